import re

import pytest

from corpus import ALL_TEXTS, load, switchpoints_closed_form
from wfoc import (
    EXPONENTIALLY, FINITELY, POLYNOMIALLY, UNAMBIGUOUS,
    abstract_semantics, accepts, ambiguity_degree_bounded,
    aperiodicity_index, classify_ambiguity, count_accepting_runs,
    enumerate_runs, is_scc_unambiguous, is_unambiguous, pair_semantics,
    scc_decompose, transition_monoid, trim, words_upto,
)
from wfoc.errors import InputError
from wfoc.multiset import SeqMultiset


def w(s):
    return tuple(s)


FIB = [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]


class TestAbstractSemantics:
    def test_switchpoints_worked_word(self):
        # the single accepting run on aabab carries weights 1,5,3,5,1
        m = abstract_semantics(load("switchpoints"), w("aabab"))
        assert m == SeqMultiset({(1, 5, 3, 5, 1): 1})

    @pytest.mark.parametrize("m_", [2, 3, 4])
    @pytest.mark.parametrize("n", [0, 1, 2])
    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_switchpoints_closed_form(self, m_, n, p):
        word = "a" * m_ + "ba" * n + "b" * p
        got = abstract_semantics(load("switchpoints"), w(word))
        assert got == SeqMultiset(switchpoints_closed_form(m_, n, p))

    def test_triplerun_three_runs(self):
        m = abstract_semantics(load("triplerun"), w("aaab"))
        assert m == SeqMultiset({(2, 2, 3, 3): 1, (2, 1, 5, 3): 1,
                                 (2, 1, 4, 3): 1})

    def test_empty_word_rejected(self):
        with pytest.raises(InputError):
            abstract_semantics(load("fibonacci"), ())

    def test_unknown_letter_rejected(self):
        with pytest.raises(InputError):
            abstract_semantics(load("fibonacci"), w("ab"))

    def test_matches_run_enumeration(self):
        wa = load("modeblocks")
        for word in words_upto(wa.nfa.alphabet, 4):
            expect = {}
            for p in wa.nfa.initial:
                for q in wa.nfa.final:
                    for r in enumerate_runs(wa, p, q, word):
                        seq = r.weights(wa)
                        expect[seq] = expect.get(seq, 0) + 1
            assert abstract_semantics(wa, word) == SeqMultiset(expect)

    def test_fibonacci_three_letters(self):
        m = abstract_semantics(load("fibonacci"), w("aaa"))
        assert m == SeqMultiset({(1, 1, 1): 2})

    def test_pair_semantics_empty_word(self):
        wa = load("fibonacci")
        assert pair_semantics(wa, 1, 1, ()) == SeqMultiset({(): 1})

    def test_empty_run_needs_matching_states(self):
        with pytest.raises(InputError):
            enumerate_runs(load("fibonacci"), 1, 2, ())

    def test_no_run_on_unsupported_word(self):
        assert enumerate_runs(load("switchpoints"), 1, 4, w("ba")) == []


class TestRunCounts:
    @pytest.mark.parametrize("n", range(1, 11))
    def test_fibonacci_run_count(self, n):
        assert count_accepting_runs(load("fibonacci"), ("a",) * n) == FIB[n]

    def test_linearcount(self):
        for n in range(1, 8):
            assert count_accepting_runs(load("linearcount"),
                                        ("a",) * n) == n


class TestLanguages:
    def test_switchpoints_domain(self):
        # two a's, then anything, then a trailing b
        wa = load("switchpoints")
        pat = re.compile(r"a+a[ab]*b+")
        for word in words_upto(wa.nfa.alphabet, 6):
            assert accepts(wa.nfa, word) == bool(pat.fullmatch("".join(word)))

    def test_mingap_accepts_iff_double_b(self):
        wa = load("mingap")
        pat = re.compile(r"[ab]*ba*b[ab]*")
        for word in words_upto(wa.nfa.alphabet, 6):
            assert accepts(wa.nfa, word) == bool(pat.fullmatch("".join(word)))


class TestScc:
    def test_switchpoints_components(self):
        scc = scc_decompose(load("switchpoints").nfa)
        assert [sorted(c) for c in scc.components] == [[1], [2, 3], [4]]
        assert sorted(scc.dag_edges) == [(0, 1), (1, 2)]

    def test_modeblocks_components(self):
        scc = scc_decompose(load("modeblocks").nfa)
        assert [sorted(c) for c in scc.components] == [[1, 2], [3]]

    def test_triplerun_all_trivial_but_loops(self):
        scc = scc_decompose(load("triplerun").nfa)
        assert len(scc.components) == 6
        assert scc.same(1, 1)
        assert not scc.same(1, 6)


CLASSES = {
    "switchpoints": POLYNOMIALLY,
    "modeblocks": UNAMBIGUOUS,
    "triplerun": FINITELY,
    "fibonacci": EXPONENTIALLY,
    "blockmax": EXPONENTIALLY,
    "countminmax": FINITELY,
    "expsum": FINITELY,
    "linearcount": POLYNOMIALLY,
    "splitmax": POLYNOMIALLY,
    "splitmin": POLYNOMIALLY,
    "mingap": POLYNOMIALLY,
}


@pytest.mark.parametrize("name", sorted(ALL_TEXTS))
def test_classification(name):
    assert classify_ambiguity(load(name)) == CLASSES[name]


def test_unambiguity_flags():
    assert is_unambiguous(load("modeblocks").nfa)
    assert not is_unambiguous(load("switchpoints").nfa)
    assert is_scc_unambiguous(load("switchpoints").nfa)
    assert is_scc_unambiguous(load("mingap").nfa)
    assert not is_scc_unambiguous(load("fibonacci").nfa)
    assert not is_scc_unambiguous(load("blockmax").nfa)


def test_ambiguity_degrees():
    assert ambiguity_degree_bounded(load("triplerun").nfa, 6) == 3
    assert ambiguity_degree_bounded(load("modeblocks").nfa, 5) == 1
    assert ambiguity_degree_bounded(load("expsum").nfa, 6) == 2
    assert ambiguity_degree_bounded(load("fibonacci").nfa, 9) == FIB[9]
    assert ambiguity_degree_bounded(load("linearcount").nfa, 7) == 7


INDICES = {
    # hand-computed from the transition monoids
    "switchpoints": 2,
    "modeblocks": 1,
    "triplerun": 3,
    "fibonacci": 2,
    "blockmax": 1,
    "countminmax": 1,
    "expsum": 1,
    "linearcount": 1,
    "splitmax": 1,
    "splitmin": 1,
    "mingap": 2,
}


@pytest.mark.parametrize("name", sorted(ALL_TEXTS))
def test_aperiodicity_index(name):
    assert aperiodicity_index(load(name)) == INDICES[name]


def test_transition_monoid_is_closed():
    nfa = load("mingap").nfa
    monoid = transition_monoid(nfa)
    assert len(monoid) == 3  # identity-on-letters a, b, bb


def test_nonaperiodic_detected():
    from wfoc import parse_automaton
    flip = parse_automaton("""
alphabet: a
states: 1 2
initial: 1
final: 1
trans: 1 a 2
trans: 2 a 1
""")
    assert aperiodicity_index(flip) is None


def test_union_doubles_runs():
    from wfoc import disjoint_union
    nfa = load("modeblocks").nfa
    both = disjoint_union(nfa, nfa)
    assert len(both.states) == 6
    assert ambiguity_degree_bounded(both, 4) == 2


def test_product_preserves_aperiodicity():
    from wfoc import product
    a = load("switchpoints").nfa
    b = load("mingap").nfa
    assert aperiodicity_index(product(a, b)) is not None


def test_product_of_full_loops():
    from wfoc import parse_automaton, product
    one = parse_automaton("""
alphabet: a
states: 1
initial: 1
final: 1
trans: 1 a 1
""")
    p = product(one, one)
    assert len(p.states) == 1
    assert accepts(p, ("a", "a", "a"))


def test_trim_drops_useless_states():
    from wfoc import parse_automaton
    wa = parse_automaton("""
alphabet: a
states: 1 2 3
initial: 1
final: 2
trans: 1 a 2 1
trans: 3 a 3 1
""")
    t = trim(wa)
    assert set(t.states) == {1, 2}
