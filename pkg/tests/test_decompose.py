"""Splitting finitely ambiguous automata into unambiguous slices."""

import re
from math import comb

import pytest

from tests.corpus import ALL_TEXTS, load
from wfoc.automata import (
    Nfa, WeightedAutomaton, abstract_semantics, accepts, aperiodicity_index,
    count_accepting_runs, enumerate_runs, is_unambiguous, language_upto,
    reachable_states, restrict, state_key, trim, words_upto,
)
from wfoc.decompose import (
    build_a_geq_k, build_a_k_ell, build_a_leq_k, decompose,
    ensure_single_initial,
)
from wfoc.errors import HypothesisError, InputError
from wfoc.multiset import SeqMultiset

CORPUS = sorted(ALL_TEXTS)
MULTI_INITIAL = [n for n in CORPUS if len(load(n).nfa.initial) > 1]


def sorted_runs(wa, word):
    """Accepting runs ordered the way the k-run tracker orders them."""
    nfa = wa.nfa
    runs = [r for i in nfa.initial for f in nfa.final
            for r in enumerate_runs(wa, i, f, word)]
    runs.sort(key=lambda r: [state_key(s)
                             for s in [r.start] + [t[2] for t in r.trans]])
    return runs


def union_sem(parts, word):
    out = SeqMultiset.empty()
    for p in parts:
        out = out.union(abstract_semantics(p, word))
    return out


def witness_in(err):
    found = re.search(r"'([a-z]*)'", str(err))
    assert found, "no witness word in %r" % str(err)
    return found.group(1)


class TestEnsureSingleInitial:
    def test_single_initial_untouched(self):
        tri = load("triplerun")
        assert ensure_single_initial(tri) is tri

    @pytest.mark.parametrize("name", MULTI_INITIAL)
    def test_normalized_has_one_start(self, name):
        norm = ensure_single_initial(load(name))
        assert len(norm.nfa.initial) == 1

    @pytest.mark.parametrize("name", MULTI_INITIAL)
    def test_run_multisets_preserved(self, name):
        wa = load(name)
        norm = ensure_single_initial(wa)
        for w in words_upto(wa.nfa.alphabet, 5):
            assert abstract_semantics(norm, w) == abstract_semantics(wa, w)

    def test_empty_word_membership_preserved(self):
        bm = load("blockmax")
        norm = ensure_single_initial(bm)
        assert accepts(norm.nfa, ()) == accepts(bm.nfa, ()) is True


class TestBuildAGeqK:
    def test_three_run_tracker_on_aaabb(self):
        geq = build_a_geq_k(load("triplerun").nfa, 3)
        start = (1, 1, 1, 0, 0)
        runs = [r for f in geq.final
                for r in enumerate_runs(geq, start, f, tuple("aaabb"))]
        assert len(runs) == 1
        seq = [runs[0].start] + [t[2] for t in runs[0].trans]
        assert seq == [(1, 1, 1, 0, 0), (1, 1, 2, 0, 1), (2, 3, 4, 1, 1),
                       (5, 5, 6, 1, 1), (6, 6, 6, 1, 1), (6, 6, 6, 1, 1)]

    def test_three_run_language(self):
        geq = build_a_geq_k(load("triplerun").nfa, 3)
        want = {tuple("a" * m + "b" * p)
                for m in range(3, 8) for p in range(1, 9 - m)}
        assert language_upto(geq, 8) == want

    @pytest.mark.parametrize("name", ["triplerun", "blockmax"])
    def test_k1_accessible_part_is_the_automaton(self, name):
        base = ensure_single_initial(load(name).nfa)
        geq = build_a_geq_k(base, 1)
        acc = restrict(base, reachable_states(base))
        assert geq.states == {(q,) for q in acc.states}
        assert geq.transitions == {((p,), a, (q,))
                                   for (p, a, q) in acc.transitions}
        assert geq.initial == {(q,) for q in acc.initial}
        assert geq.final == {(q,) for q in acc.final}

    @pytest.mark.parametrize("name", CORPUS)
    @pytest.mark.parametrize("k", [2, 3])
    def test_run_counts_are_binomial(self, name, k):
        base = ensure_single_initial(load(name).nfa)
        geq = build_a_geq_k(base, k)
        for w in words_upto(base.alphabet, 7):
            want = comb(count_accepting_runs(base, w), k)
            assert count_accepting_runs(geq, w) == want

    @pytest.mark.parametrize("name", CORPUS)
    def test_index_bound(self, name):
        base = ensure_single_initial(load(name).nfa)
        m = aperiodicity_index(base)
        for k in (1, 2, 3):
            idx = aperiodicity_index(build_a_geq_k(base, k))
            assert idx is not None and idx <= k * (m + 1)

    def test_rejects_zero(self):
        with pytest.raises(InputError):
            build_a_geq_k(load("triplerun").nfa, 0)


class TestBuildALeqK:
    def test_unambiguous_input_accepts_everything(self):
        leq = build_a_leq_k(load("modeblocks").nfa, 1)
        assert all(leq.classify(w) == "F"
                   for w in words_upto(load("modeblocks").nfa.alphabet, 6))

    def test_matching_bound_accepts_everything(self):
        leq = build_a_leq_k(load("triplerun").nfa, 3)
        assert all(leq.classify(w) == "F" for w in words_upto({"a", "b"}, 6))

    def test_tight_bound_rejects_the_three_run_words(self):
        leq = build_a_leq_k(load("triplerun").nfa, 2)
        rejected = {w for w in words_upto({"a", "b"}, 8)
                    if leq.classify(w) != "F"}
        assert rejected == {tuple("a" * m + "b" * p)
                            for m in range(3, 8) for p in range(1, 9 - m)}
        assert all(leq.classify(w) == "G" for w in rejected)

    def test_deterministic_complete(self):
        assert build_a_leq_k(load("triplerun").nfa, 2) \
            .check_deterministic_complete()

    @pytest.mark.parametrize("name", CORPUS)
    def test_stays_aperiodic(self, name):
        leq = build_a_leq_k(load(name).nfa, 2)
        assert aperiodicity_index(leq.nfa) is not None


class TestBuildAKEll:
    def test_middle_run_weights_on_aaab(self):
        # runs on aaab in state order: 1 1 2 5 6, then 1 1 3 5 6, then
        # 1 2 4 6 6; the slice automata pick their weights apart
        tri = load("triplerun")
        picks = {1: (2, 2, 3, 3), 2: (2, 1, 5, 3), 3: (2, 1, 4, 3)}
        for ell, weights in picks.items():
            got = abstract_semantics(build_a_k_ell(tri, 3, ell), "aaab")
            assert dict(got.items()) == {weights: 1}

    def test_empty_off_the_exact_count(self):
        tri = load("triplerun")
        assert count_accepting_runs(tri, "aaa") == 1
        assert abstract_semantics(build_a_k_ell(tri, 3, 2), "aaa").total() == 0

    @pytest.mark.parametrize("name,k", [
        ("triplerun", 1), ("triplerun", 2), ("triplerun", 3),
        ("blockmax", 2), ("fibonacci", 2),
    ])
    def test_picks_the_sorted_run(self, name, k):
        wa = load(name)
        norm = ensure_single_initial(wa)
        for ell in range(1, k + 1):
            akl = build_a_k_ell(wa, k, ell)
            for w in words_upto(wa.nfa.alphabet, 5):
                runs = sorted_runs(norm, w)
                if len(runs) == k:
                    picked = [norm.wgt[t] for t in runs[ell - 1].trans]
                    want = SeqMultiset.singleton(picked)
                else:
                    want = SeqMultiset.empty()
                assert abstract_semantics(akl, w) == want

    @pytest.mark.parametrize("name", CORPUS)
    def test_unambiguous(self, name):
        wa = load(name)
        for ell in (1, 2):
            assert is_unambiguous(build_a_k_ell(wa, 2, ell))

    def test_stays_aperiodic(self):
        akl = build_a_k_ell(load("triplerun"), 3, 2)
        assert aperiodicity_index(akl) is not None

    def test_disjoint_supports_across_counts(self):
        tri = load("triplerun")
        langs = [language_upto(build_a_k_ell(tri, k, 1), 7) for k in (1, 2, 3)]
        assert langs[0] and langs[1] and langs[2]
        for i in range(3):
            for j in range(i + 1, 3):
                assert not langs[i] & langs[j]

    def test_rejects_out_of_range_index(self):
        tri = load("triplerun")
        with pytest.raises(InputError):
            build_a_k_ell(tri, 2, 0)
        with pytest.raises(InputError):
            build_a_k_ell(tri, 2, 3)


class TestDecompose:
    def test_three_certified_slices(self):
        parts = decompose(load("triplerun"), 3)
        assert len(parts) == 3
        for b in parts:
            assert is_unambiguous(b)
            assert aperiodicity_index(b) is not None

    def test_union_identity(self):
        tri = load("triplerun")
        parts = decompose(tri, 3)
        for w in words_upto({"a", "b"}, 8):
            assert union_sem(parts, w) == abstract_semantics(tri, w)

    def test_bound_is_detected(self):
        assert len(decompose(load("triplerun"))) == 3

    def test_unambiguous_input_decomposes_to_itself(self):
        mode = load("modeblocks")
        (b1,) = decompose(mode)
        assert is_unambiguous(b1)
        for w in words_upto(mode.nfa.alphabet, 6):
            assert abstract_semantics(b1, w) == abstract_semantics(mode, w)

    def test_oversized_bound_adds_empty_slices(self):
        tri = load("triplerun")
        parts = decompose(tri, 4)
        assert len(parts) == 4
        assert not trim(parts[3]).nfa.states
        for w in words_upto({"a", "b"}, 5):
            assert union_sem(parts, w) == abstract_semantics(tri, w)

    def test_too_small_bound_refused_with_witness(self):
        tri = load("triplerun")
        with pytest.raises(HypothesisError) as err:
            decompose(tri, 2)
        assert count_accepting_runs(tri, witness_in(err.value)) >= 3

    def test_unbounded_ambiguity_refused_with_witness(self):
        mg = load("mingap")
        with pytest.raises(HypothesisError) as err:
            decompose(mg)
        word = witness_in(err.value)
        assert count_accepting_runs(mg, word) > len(trim(mg.nfa).states)

    def test_empty_support_decomposes_to_nothing(self):
        dead = WeightedAutomaton(
            Nfa({1}, {"a"}, {(1, "a", 1)}, {1}, set()), {(1, "a", 1): 0})
        assert decompose(dead) == []
        assert decompose(dead, 0) == []

    def test_negative_bound_rejected(self):
        with pytest.raises(InputError):
            decompose(load("triplerun"), -1)
