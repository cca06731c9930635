"""Multilinear magmatic monomials and polynomials.

A monomial is a binary tree whose leaves are variable indices.  Leaves are
plain ints and inner nodes are 2-tuples ``(left, right)``, so ``((1, 2), 3)``
is the monomial ``(t1 t2) t3``.  Trees are hashable and compare structurally.

Column order used everywhere (``MonomialIndex``): first by tree shape, with
shapes listed left-comb first (the left subtree as large as possible, then
recursively), then by the left-to-right leaf sequence in lexicographic order.
For four leaves the shapes come out as ((..).)., (.(..))., (..)(..),
.((..).), .(.(..)).
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .exact import SparseRow

Tree = Union[int, tuple]


# -- trees -----------------------------------------------------------------

def is_leaf(t: Tree) -> bool:
    return isinstance(t, int)


def leaves(t: Tree) -> tuple[int, ...]:
    if isinstance(t, int):
        return (t,)
    return leaves(t[0]) + leaves(t[1])


def tree_arity(t: Tree) -> int:
    if isinstance(t, int):
        return 1
    return tree_arity(t[0]) + tree_arity(t[1])


def shape_of(t: Tree) -> Tree:
    """The tree with every leaf replaced by 0."""
    if isinstance(t, int):
        return 0
    return (shape_of(t[0]), shape_of(t[1]))


def relabel(t: Tree, mapping: Mapping[int, int] | Sequence[int]) -> Tree:
    """Replace leaf ``i`` by ``mapping[i]`` (dict) or ``mapping[i - 1]`` (sequence)."""
    if isinstance(mapping, Mapping):
        get = mapping.__getitem__
    else:
        get = lambda i: mapping[i - 1]  # noqa: E731

    def go(s):
        if isinstance(s, int):
            return get(s)
        return (go(s[0]), go(s[1]))

    return go(t)


def graft(t: Tree, i: int, replacement: Tree) -> Tree:
    """Replace the leaf labelled ``i`` by ``replacement``."""
    if isinstance(t, int):
        return replacement if t == i else t
    return (graft(t[0], i, replacement), graft(t[1], i, replacement))


def _fill(shape: Tree, labels: Iterator) -> Tree:
    if isinstance(shape, int):
        return next(labels)
    left = _fill(shape[0], labels)
    return (left, _fill(shape[1], labels))


def fill(shape: Tree, labels: Iterable[int]) -> Tree:
    """Put ``labels`` on the leaves of ``shape`` from left to right."""
    return _fill(shape, iter(labels))


@lru_cache(maxsize=None)
def shapes(n: int) -> tuple[Tree, ...]:
    """All binary tree shapes with ``n`` leaves, left-comb first."""
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    if n == 1:
        return (0,)
    out = []
    for k in range(n - 1, 0, -1):
        for left in shapes(k):
            for right in shapes(n - k):
                out.append((left, right))
    return tuple(out)


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def free_dimension(n: int) -> int:
    """Number of multilinear monomials of arity n: Catalan(n-1) * n!."""
    return catalan(n - 1) * factorial(n)


class MonomialIndex:
    """All multilinear monomials of one arity, in canonical order."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("arity must be at least 1")
        self.arity = n
        perms = list(itertools.permutations(range(1, n + 1)))
        self.monomials: tuple[Tree, ...] = tuple(
            fill(s, p) for s in shapes(n) for p in perms)
        self._position = {m: i for i, m in enumerate(self.monomials)}

    def __len__(self) -> int:
        return len(self.monomials)

    def __getitem__(self, i: int) -> Tree:
        return self.monomials[i]

    def __iter__(self):
        return iter(self.monomials)

    def __contains__(self, t: Tree) -> bool:
        return t in self._position

    def index(self, t: Tree) -> int:
        try:
            return self._position[t]
        except KeyError:
            raise KeyError(f"{format_tree(t)} is not a multilinear monomial of arity {self.arity}") from None


@lru_cache(maxsize=None)
def enumerate_monomials(n: int) -> MonomialIndex:
    return MonomialIndex(n)


# -- polynomials -----------------------------------------------------------

def _check_perm(sigma: Sequence[int], n: int) -> None:
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{tuple(sigma)} is not a permutation of 1..{n}")


class MLPoly:
    """A rational combination of multilinear monomials on one set of labels.

    Every term uses the same variables, each exactly once; ``arity`` is their
    count.  Polynomials on labels ``1..n`` are called standard; only those
    can be turned into rows.  The zero polynomial needs an explicit arity.

    ``p * q`` is the magma product when ``q`` is a polynomial (the label sets
    must be disjoint) and scaling when ``q`` is a number.
    """

    __slots__ = ("arity", "terms", "labels")

    def __init__(self, terms: Mapping[Tree, object] | None = None, arity: int | None = None):
        clean: dict[Tree, Fraction] = {}
        labels = None
        for t, c in (terms or {}).items():
            c = Fraction(c)
            if not c:
                continue
            ls = leaves(t)
            s = frozenset(ls)
            if len(s) != len(ls):
                raise ValueError(f"{format_tree(t)} repeats a variable")
            if labels is None:
                labels = s
            elif s != labels:
                raise ValueError("terms use different variable sets")
            clean[t] = c
        if labels is None:
            if arity is None:
                raise ValueError("the zero polynomial needs an explicit arity")
            labels = frozenset(range(1, arity + 1))
        elif arity is not None and arity != len(labels):
            raise ValueError(f"terms have arity {len(labels)}, not {arity}")
        self.arity = len(labels)
        self.labels = labels
        self.terms = clean

    @classmethod
    def monomial(cls, t: Tree, coeff: object = 1) -> "MLPoly":
        return cls({t: coeff})

    @classmethod
    def zero(cls, arity: int) -> "MLPoly":
        return cls({}, arity)

    @property
    def is_standard(self) -> bool:
        return self.labels == frozenset(range(1, self.arity + 1))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MLPoly):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms.items())))

    def _add(self, other: "MLPoly", sign: int) -> "MLPoly":
        if not isinstance(other, MLPoly):
            return NotImplemented
        if not other.terms:
            if other.arity != self.arity:
                raise ValueError("arity mismatch")
            return self
        if not self.terms:
            if other.arity != self.arity:
                raise ValueError("arity mismatch")
            return other if sign > 0 else -other
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, 0) + sign * c
        return MLPoly(out, self.arity)

    def __add__(self, other: "MLPoly") -> "MLPoly":
        return self._add(other, 1)

    def __sub__(self, other: "MLPoly") -> "MLPoly":
        return self._add(other, -1)

    def __neg__(self) -> "MLPoly":
        return MLPoly({t: -c for t, c in self.terms.items()}, self.arity)

    def __mul__(self, other) -> "MLPoly":
        if isinstance(other, MLPoly):
            if self.labels & other.labels:
                raise ValueError("product of polynomials sharing a variable")
            if not self.terms or not other.terms:
                return MLPoly.zero(self.arity + other.arity)
            out: dict[Tree, Fraction] = {}
            for t, c in self.terms.items():
                for s, d in other.terms.items():
                    out[(t, s)] = c * d
            return MLPoly(out)
        c = Fraction(other)
        return MLPoly({t: v * c for t, v in self.terms.items()}, self.arity)

    def __rmul__(self, other) -> "MLPoly":
        return self * other

    def __truediv__(self, other) -> "MLPoly":
        return self * (1 / Fraction(other))

    def __repr__(self) -> str:
        return f"MLPoly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def var(i: int) -> MLPoly:
    return MLPoly({i: 1})


def commutator(p: MLPoly, q: MLPoly) -> MLPoly:
    return p * q - q * p


def anticommutator(p: MLPoly, q: MLPoly) -> MLPoly:
    return p * q + q * p


def apply_permutation(p: MLPoly, sigma: Sequence[int]) -> MLPoly:
    """Relabel leaf ``i`` as ``sigma[i-1]``.

    With ``sigma = (1, 3, 2)`` this turns ``f(t1, t2, t3)`` into
    ``f(t1, t3, t2)``.
    """
    if not p.is_standard:
        raise ValueError("permutations act on polynomials in t1..tn")
    _check_perm(sigma, p.arity)
    if not p.terms:
        return p
    return MLPoly({relabel(t, sigma): c for t, c in p.terms.items()}, p.arity)


def substitute(p: MLPoly, i: int, side: str = "right") -> MLPoly:
    """Replace leaf ``i`` by ``(i, new)`` (side="right") or ``(new, i)`` (side="left").

    The new variable gets label ``arity + 1``.
    """
    n = p.arity
    if not 1 <= i <= n:
        raise ValueError(f"variable {i} out of range 1..{n}")
    new = n + 1
    if side == "right":
        rep = (i, new)
    elif side == "left":
        rep = (new, i)
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    if not p.terms:
        return MLPoly.zero(n + 1)
    return MLPoly({graft(t, i, rep): c for t, c in p.terms.items()})


def mul(p: MLPoly, side: str) -> MLPoly:
    """``t_{n+1} * p`` (side="left") or ``p * t_{n+1}`` (side="right")."""
    new = var(p.arity + 1)
    if side == "left":
        return new * p
    if side == "right":
        return p * new
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def to_row(p: MLPoly, idx: MonomialIndex | None = None) -> SparseRow:
    if idx is None:
        idx = enumerate_monomials(p.arity)
    if p.arity != idx.arity:
        raise ValueError(f"arity mismatch: polynomial {p.arity}, index {idx.arity}")
    return SparseRow({idx.index(t): c for t, c in p.terms.items()}, len(idx))


def from_row(row: SparseRow, idx: MonomialIndex) -> MLPoly:
    if row.dim != len(idx):
        raise ValueError(f"row of dimension {row.dim} does not match arity {idx.arity}")
    return MLPoly({idx[c]: v for c, v in row.items()}, idx.arity)


# -- text format -----------------------------------------------------------

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def format_tree(t: Tree, names: Sequence[str] | None = None) -> str:
    """``((1 2) 3)`` by default; with ``names`` the compact form ``(ab)c``."""
    if names is None:
        if isinstance(t, int):
            return str(t)
        return f"({format_tree(t[0])} {format_tree(t[1])})"

    def go(s, top):
        if isinstance(s, int):
            return names[s - 1]
        body = go(s[0], False) + go(s[1], False)
        return body if top else f"({body})"

    return go(t, True)


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: MLPoly, names: Sequence[str] | None = None, order: MonomialIndex | Sequence[Tree] | None = None) -> str:
    """Terms in canonical column order, or in the order of ``order``, e.g. ``((1 2) 3) - 2 (1 (2 3))``."""
    if not p.terms:
        return "0"
    if order is None and p.is_standard:
        order = enumerate_monomials(p.arity)
    items = list(p.terms.items())
    if order is not None:
        items.sort(key=lambda tc: order.index(tc[0]))
    out = []
    for k, (t, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        coef = "" if mag == 1 else format_rational(mag) + " "
        term = coef + format_tree(t, names)
        if k == 0:
            out.append(("-" if sign == "-" else "") + term)
        else:
            out.append(f"{sign} {term}")
    return " ".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        tok = m.group(1) or m.group(2)
        if tok.isspace():
            continue
        if not (tok.isdigit() or tok in "()+-*/"):
            raise ValueError(f"unexpected character {tok!r}")
        out.append(tok)
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.pos = 0

    def peek(self, k: int = 0) -> str | None:
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'a token'}, got {tok!r}")
        self.pos += 1
        return tok

    def tree(self) -> Tree:
        tok = self.take()
        if tok.isdigit():
            return int(tok)
        if tok != "(":
            raise ValueError(f"expected a leaf or '(', got {tok!r}")
        left = self.tree()
        right = self.tree()
        self.take(")")
        return (left, right)

    def term(self) -> tuple[Fraction, Tree]:
        coeff = Fraction(1)
        tok = self.peek()
        if tok is not None and tok.isdigit() and self.peek(1) in ("/", "*", "("):
            num = int(self.take())
            if self.peek() == "/":
                self.take()
                coeff = Fraction(num, int(self.take()))
            else:
                coeff = Fraction(num)
            if self.peek() == "*":
                self.take()
        elif tok is not None and tok.isdigit() and self.peek(1) is not None and self.peek(1).isdigit():
            # "2 3" is a coefficient followed by a leaf
            coeff = Fraction(int(self.take()))
        return coeff, self.tree()

    def poly(self) -> dict[Tree, Fraction]:
        terms: dict[Tree, Fraction] = {}
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        while True:
            c, t = self.term()
            terms[t] = terms.get(t, 0) + sign * c
            tok = self.peek()
            if tok is None:
                return terms
            if tok not in ("+", "-"):
                raise ValueError(f"expected '+' or '-', got {tok!r}")
            sign = -1 if self.take() == "-" else 1


def parse_tree(text: str) -> Tree:
    p = _Parser(text)
    t = p.tree()
    if p.peek() is not None:
        raise ValueError(f"trailing input after tree: {p.peek()!r}")
    return t


def parse_poly(text: str, arity: int | None = None) -> MLPoly:
    """Parse ``poly := term (('+'|'-') term)*`` with ``term := [rational ['*']] tree``."""
    text = text.strip()
    if text == "0":
        return MLPoly.zero(arity or 0)
    return MLPoly(_Parser(text).poly(), arity)


def parse_letters(text: str) -> Tree:
    """Read compact letter notation such as ``c(ab)`` or ``(bc)a``; a=1, b=2, ..."""
    pos = 0

    def factor():
        nonlocal pos
        ch = text[pos]
        if ch == "(":
            pos += 1
            t = product()
            if text[pos] != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            pos += 1
            return t
        if ch in LETTERS:
            pos += 1
            return LETTERS.index(ch) + 1
        raise ValueError(f"unexpected {ch!r} in {text!r}")

    def product():
        left = factor()
        if pos < len(text) and text[pos] != ")":
            right = factor()
            if pos < len(text) and text[pos] != ")":
                raise ValueError(f"ambiguous product in {text!r}")
            return (left, right)
        return left

    text = text.replace(" ", "")
    t = product()
    if pos != len(text):
        raise ValueError(f"trailing input in {text!r}")
    return t


_LETTER_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*([a-z()\s]+?)\s*(?=[+-]|$)")


def parse_letter_poly(text: str, arity: int | None = None) -> MLPoly:
    """Read e.g. ``c(ab) + 1/2 (ac)b - 1/2 (ca)b``."""
    text = text.strip()
    terms: dict[Tree, Fraction] = {}
    pos = 0
    while pos < len(text):
        m = _LETTER_TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text[pos:]!r}")
        sign, coef, mono = m.groups()
        if pos and not sign:
            raise ValueError(f"missing sign before {mono!r}")
        c = Fraction(coef or 1) * (-1 if sign == "-" else 1)
        t = parse_letters(mono)
        terms[t] = terms.get(t, 0) + c
        pos = m.end()
    return MLPoly({t: c for t, c in terms.items() if c}, arity)
