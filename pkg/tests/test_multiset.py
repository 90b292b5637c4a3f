from fractions import Fraction

import pytest

from wfoc.multiset import SeqMultiset
from wfoc.weights import Symbol


def test_empty():
    m = SeqMultiset()
    assert m.total() == 0
    assert not m.support()
    assert m.pretty() == ""


def test_union_adds_multiplicities():
    a = SeqMultiset({(1, 2): 2, (3,): 1})
    b = SeqMultiset({(1, 2): 1})
    u = a.union(b)
    assert u.count((1, 2)) == 3
    assert u.count((3,)) == 1
    assert u.total() == 4
    assert a.count((1, 2)) == 2  # inputs untouched


def test_union_many():
    parts = [SeqMultiset({(i,): 1}) for i in range(4)]
    u = SeqMultiset().union(*parts)
    assert u.total() == 4


def test_cauchy_concatenates_pairwise():
    a = SeqMultiset({(1,): 2})
    b = SeqMultiset({(2,): 3, (9, 9): 1})
    c = a.cauchy(b)
    assert c.count((1, 2)) == 6
    assert c.count((1, 9, 9)) == 2
    assert c.total() == 8


def test_cauchy_identity_and_zero():
    one = SeqMultiset({(): 1})
    m = SeqMultiset({(5, 6): 2})
    assert one.cauchy(m) == m
    assert m.cauchy(one) == m
    assert m.cauchy(SeqMultiset()) == SeqMultiset()


def test_equality_is_exact():
    assert SeqMultiset({(1,): 2}) != SeqMultiset({(1,): 1})
    assert SeqMultiset({(1,): 1}) == SeqMultiset([(1,)])
    assert hash(SeqMultiset({(1,): 2})) == hash(SeqMultiset({(1,): 2}))


def test_multiplicity_normalization():
    assert SeqMultiset({(1,): 0}) == SeqMultiset()
    with pytest.raises(ValueError):
        SeqMultiset({(1,): -1})


def test_pretty_sorts_lexicographically():
    m = SeqMultiset({(2, 1): 1, (1, 5): 3, (1, 2): 1})
    assert m.pretty().splitlines() == [
        "1 x [1,2]",
        "3 x [1,5]",
        "1 x [2,1]",
    ]


def test_pretty_mixed_weights():
    m = SeqMultiset({(Fraction(1, 2), Symbol("t")): 1})
    assert m.pretty() == "1 x [1/2,t]"
