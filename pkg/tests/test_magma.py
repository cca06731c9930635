from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operadlab.identities import builtin
from operadlab.magma import (MLPoly, apply_permutation, catalan, enumerate_monomials,
                             format_poly, format_tree, free_dimension, from_row, leaves, mul,
                             parse_letter_poly, parse_letters, parse_poly, parse_tree, shapes,
                             substitute, to_row, var)


def brute_catalan(n):
    return comb(2 * n, n) // (n + 1)


@pytest.mark.parametrize("n", range(1, 6))
def test_monomial_count(n):
    idx = enumerate_monomials(n)
    assert len(idx) == brute_catalan(n - 1) * factorial(n) == free_dimension(n)
    assert len(set(idx)) == len(idx)
    for k, t in enumerate(idx):
        assert sorted(leaves(t)) == list(range(1, n + 1))
        assert idx.index(t) == k


def test_canonical_order_arity_3():
    idx = enumerate_monomials(3)
    assert idx[0] == ((1, 2), 3)
    assert idx[5] == ((3, 2), 1)
    assert idx[6] == (1, (2, 3))
    assert idx[11] == (3, (2, 1))


def test_shapes_left_comb_first():
    assert shapes(3) == (((0, 0), 0), (0, (0, 0)))
    assert len(shapes(5)) == catalan(4) == 14


def test_poly_arithmetic():
    a, b, c = var(1), var(2), var(3)
    p = (a * b) * c - a * (b * c)
    assert p.arity == 3 and len(p) == 2
    assert p - p == MLPoly.zero(3)
    assert (2 * p).terms[((1, 2), 3)] == 2
    assert (p / 2).terms[(1, (2, 3))] == Fraction(-1, 2)
    with pytest.raises(ValueError):
        a * a
    with pytest.raises(ValueError):
        MLPoly({(1, 2): 1, 3: 1})
    with pytest.raises(ValueError):
        MLPoly({})


def test_apply_permutation_convention():
    lw = builtin("lwlei")
    p = apply_permutation(lw, (3, 1, 2))
    # [t3,t1]t2 - 2 t3(t1 t2) + 2 t1(t3 t2)
    a, b, c = var(3), var(1), var(2)
    assert p == (a * b - b * a) * c - 2 * (a * (b * c)) + 2 * (b * (a * c))
    with pytest.raises(ValueError):
        apply_permutation(lw, (1, 1, 2))


perms3 = st.permutations([1, 2, 3])


@given(perms3, perms3)
def test_permutation_action_composes(s, t):
    p = builtin("rwlei") + 3 * builtin("assoc")
    left = apply_permutation(apply_permutation(p, s), t)
    composed = tuple(t[s[i] - 1] for i in range(3))
    assert left == apply_permutation(p, composed)


def test_substitute_counts():
    lw = builtin("lwlei")
    right = substitute(lw, 3, "right")
    left = substitute(lw, 3, "left")
    assert right.arity == 4
    # lwlei expands to 4 monomials; grafting keeps the count
    assert len(right) == len(lw) == 4
    assert len(right + left) == 8
    assert ((1, 2), (3, 4)) in right.terms
    assert ((1, 2), (4, 3)) in left.terms
    with pytest.raises(ValueError):
        substitute(lw, 4)


def test_mul_new_variable():
    p = builtin("assoc")
    assert mul(p, "left") == var(4) * p
    assert mul(p, "right") == p * var(4)


@st.composite
def polys(draw, n=3):
    idx = enumerate_monomials(n)
    picks = draw(st.lists(st.integers(0, len(idx) - 1), max_size=6))
    coeffs = draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6),
                           min_size=len(picks), max_size=len(picks)))
    terms = {}
    for k, c in zip(picks, coeffs):
        terms[idx[k]] = terms.get(idx[k], 0) + c
    return MLPoly(terms, n)


@settings(max_examples=200)
@given(polys())
def test_format_parse_round_trip(p):
    text = format_poly(p)
    assert parse_poly(text, 3) == p
    assert from_row(to_row(p), enumerate_monomials(3)) == p


@settings(max_examples=100)
@given(polys(4))
def test_row_round_trip_arity_4(p):
    assert from_row(to_row(p), enumerate_monomials(4)) == p


def test_parse_grammar():
    assert parse_poly("2 (1 (2 3))") == MLPoly({(1, (2, 3)): 2})
    assert parse_poly("3/2*((1 2) 3) - (1 (2 3))") == MLPoly({((1, 2), 3): Fraction(3, 2), (1, (2, 3)): -1})
    assert parse_tree("((1 2) 3)") == ((1, 2), 3)
    assert parse_poly("0", 3) == MLPoly.zero(3)
    with pytest.raises(ValueError):
        parse_poly("(1 2")
    with pytest.raises(ValueError):
        parse_poly("(1 x)")


def test_letters():
    assert parse_letters("c(ab)") == (3, (1, 2))
    assert parse_letters("(bc)a") == ((2, 3), 1)
    assert format_tree((3, (1, 2)), "abc") == "c(ab)"
    assert format_tree(((1, 2), 3)) == "((1 2) 3)"
    p = parse_letter_poly("c(ab) + 1/2 (ac)b - 1/2 (ca)b")
    assert p.terms == {(3, (1, 2)): 1, ((1, 3), 2): Fraction(1, 2), ((3, 1), 2): Fraction(-1, 2)}
    assert parse_letter_poly(format_poly(p, "abc")) == p
    with pytest.raises(ValueError):
        parse_letters("abc")
