import random
from fractions import Fraction

import pytest

from corpus import SEED, all_words, load
from wfoc import (
    InputError, SeqMultiset, Symbol, abstract_semantics, aggr_ma, aggr_sp,
    builtin_semiring, concrete_semantics, max_average_aggregator,
    sum_product_aggregator,
)
from wfoc.semantics import NEG_INF, POS_INF

FIB = [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610,
       987, 1597, 2584, 4181, 6765]


def test_builtin_names():
    for name in ("natural", "boolean", "minplus", "maxplus", "languages",
                 "multiset_seqs"):
        assert builtin_semiring(name).name == name
    with pytest.raises(InputError):
        builtin_semiring("nope")


def test_natural_ops():
    s = builtin_semiring("natural")
    assert s.plus(2, 3) == 5 and s.times(2, 3) == 6


def test_minplus_zero_absorbs():
    s = builtin_semiring("minplus")
    assert s.plus(POS_INF, 4) == 4
    assert s.times(POS_INF, 4) == POS_INF


def test_languages_concatenation():
    s = builtin_semiring("languages")
    assert s.times(frozenset({"a"}), frozenset({"b", "c"})) == {"ab", "ac"}


@pytest.mark.parametrize("name", ["natural", "boolean", "minplus",
                                  "maxplus", "languages", "multiset_seqs"])
def test_semiring_axioms_sampled(name):
    s = builtin_semiring(name)
    rng = random.Random(SEED)
    for _ in range(1000):
        a, b, c = s.sample(rng), s.sample(rng), s.sample(rng)
        assert s.plus(s.plus(a, b), c) == s.plus(a, s.plus(b, c))
        assert s.plus(a, b) == s.plus(b, a)
        assert s.times(s.times(a, b), c) == s.times(a, s.times(b, c))
        assert s.plus(a, s.zero) == a
        assert s.times(a, s.one) == a
        assert s.times(s.one, a) == a
        assert s.times(a, s.zero) == s.zero
        assert s.times(s.zero, a) == s.zero
        assert s.times(a, s.plus(b, c)) == s.plus(s.times(a, b),
                                                  s.times(a, c))
        assert s.times(s.plus(a, b), c) == s.plus(s.times(a, c),
                                                  s.times(b, c))
        if s.commutative:
            assert s.times(a, b) == s.times(b, a)
        if s.idempotent:
            assert s.plus(a, a) == a


def test_aggr_sp_triplerun():
    m = abstract_semantics(load("triplerun"), tuple("aaab"))
    assert aggr_sp(builtin_semiring("natural"), m) == 90


def test_aggr_sp_empty_is_zero():
    for name in ("natural", "minplus", "languages"):
        s = builtin_semiring(name)
        assert aggr_sp(s, SeqMultiset()) == s.zero


def test_aggr_sp_maxplus():
    m = SeqMultiset({(1, 0): 1, (0, 1): 1, (1, 1): 1})
    assert aggr_sp(builtin_semiring("maxplus"), m) == 2


def test_aggr_sp_respects_multiplicity():
    s = builtin_semiring("natural")
    assert aggr_sp(s, SeqMultiset({(2, 3): 4})) == 24


def test_aggr_sp_union_homomorphism():
    rng = random.Random(SEED)
    s = builtin_semiring("natural")
    for _ in range(200):
        m1 = _random_multiset(rng)
        m2 = _random_multiset(rng)
        assert aggr_sp(s, m1.union(m2)) == aggr_sp(s, m1) + aggr_sp(s, m2)


def _random_multiset(rng):
    return SeqMultiset({tuple(rng.randrange(4) for _ in range(rng.randrange(1, 4))):
                        rng.randrange(1, 4)
                        for _ in range(rng.randrange(0, 4))})


def test_aggr_sp_multiset_semiring_is_identity():
    wa = load("switchpoints")
    s = builtin_semiring("multiset_seqs")
    for word in all_words(("a", "b"), 5):
        m = abstract_semantics(wa, word)
        assert aggr_sp(s, m) == m


def test_aggr_ma():
    assert aggr_ma(SeqMultiset({(2, 4): 1})) == 3
    assert aggr_ma(SeqMultiset()) == NEG_INF
    assert aggr_ma(SeqMultiset({(1, 1, 1): 1, (0, 3, 0): 2})) == 1
    assert aggr_ma(SeqMultiset({(1, 2): 1})) == Fraction(3, 2)


def test_aggr_ma_rejects_symbols():
    with pytest.raises(InputError):
        aggr_ma(SeqMultiset({(Symbol("t"),): 1}))


def test_natural_rejects_bad_weights():
    s = builtin_semiring("natural")
    with pytest.raises(InputError):
        s.embed(-1)
    with pytest.raises(InputError):
        s.embed(Symbol("t"))
    with pytest.raises(InputError):
        s.embed(Fraction(1, 2))


def test_symbolic_weights_flow_through_languages():
    s = builtin_semiring("languages")
    m = SeqMultiset({(Symbol("t"), 2): 1})
    assert aggr_sp(s, m) == frozenset({"t2"})


class TestConcreteSemantics:
    nat = sum_product_aggregator(builtin_semiring("natural"))
    mx = sum_product_aggregator(builtin_semiring("maxplus"))
    mn = sum_product_aggregator(builtin_semiring("minplus"))

    @pytest.mark.parametrize("n", range(1, 21))
    def test_fibonacci(self, n):
        got = concrete_semantics(load("fibonacci"), ("a",) * n, self.nat)
        assert got == FIB[n]

    def test_countminmax(self):
        wa = load("countminmax")
        for word in all_words(("a", "b"), 6):
            na, nb = word.count("a"), word.count("b")
            assert concrete_semantics(wa, word, self.mx) == max(na, nb)
            assert concrete_semantics(wa, word, self.mn) == min(na, nb)

    def test_expsum_closed_form(self):
        wa = load("expsum")
        for word in all_words(("a", "b"), 6):
            na, nb = word.count("a"), word.count("b")
            assert concrete_semantics(wa, word, self.nat) \
                == 2 ** na + 3 ** nb

    def test_blockmax_both_readings(self):
        wa = load("blockmax")
        for word in all_words(("a", "b", "c"), 5):
            blocks = "".join(word).split("c")
            fmax = sum(max(b.count("a"), b.count("b")) for b in blocks)
            fmin = sum(min(b.count("a"), b.count("b")) for b in blocks)
            assert concrete_semantics(wa, word, self.mx) == fmax
            assert concrete_semantics(wa, word, self.mn) == fmin

    def test_splitmax_splitmin(self):
        for word in all_words(("a", "b"), 6):
            s = "".join(word)
            splits = [(s[:i], s[i:]) for i in range(len(s) + 1)]
            vals = [u.count("a") + v.count("b") for u, v in splits]
            assert concrete_semantics(load("splitmax"), word, self.mx) \
                == max(vals)
            assert concrete_semantics(load("splitmin"), word, self.mn) \
                == min(vals)

    def test_mingap(self):
        wa = load("mingap")
        for word in all_words(("a", "b"), 7):
            s = "".join(word)
            gaps = []
            for i in range(len(s)):
                if s[i] != "b":
                    continue
                for j in range(i + 1, len(s)):
                    if s[j] == "b":
                        gaps.append(j - i - 1)
                        break
            expect = min(gaps) if gaps else POS_INF
            assert concrete_semantics(wa, word, self.mn) == expect

    def test_linearcount(self):
        for n in range(1, 8):
            assert concrete_semantics(load("linearcount"), ("a",) * n,
                                      self.nat) == n

    def test_triplerun_family(self):
        wa = load("triplerun")
        for n in range(4):
            for p in range(4):
                word = ("a",) * n + tuple("aaab") + ("b",) * p
                assert concrete_semantics(wa, word, self.nat) \
                    == 2 ** n * 90 * 3 ** p

    def test_max_average(self):
        wa = load("countminmax")
        ma = max_average_aggregator()
        # averages of the two constant-rate runs: #a/n and #b/n
        got = concrete_semantics(wa, tuple("aab"), ma)
        assert got == Fraction(2, 3)
