"""Concrete algebras on a basis ``e_i`` (i in Z) and exact window checks.

Products are given by a rule on basis pairs and extended bilinearly.  They
are always computed in full: a window ``[-K, K]`` only limits which basis
tuples get tested, never the support of a product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .exact import _fast_q as _q, _to_fraction
from .magma import MLPoly, Tree


class SpanElement(Mapping):
    """Finitely supported element ``sum(c_i e_i)`` with rational coefficients.

    Coefficients read back as ``Fraction``; internally they are kept as
    gmpy2 rationals, which matters for the window sweeps.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        if isinstance(coeffs, Mapping):
            coeffs = coeffs.items()
        out: dict[int, object] = {}
        for i, c in coeffs:
            c = out.get(i, 0) + _q(c)
            if c:
                out[i] = c
            else:
                out.pop(i, None)
        self._c = dict(sorted(out.items()))
        self._hash = None

    @classmethod
    def _trusted(cls, coeffs: dict) -> "SpanElement":
        # values already internal rationals; zeros are dropped here
        el = cls.__new__(cls)
        el._c = {i: c for i, c in sorted(coeffs.items()) if c}
        el._hash = None
        return el

    @classmethod
    def basis(cls, i: int, coeff: object = 1) -> "SpanElement":
        return cls({i: coeff})

    def __getitem__(self, i: int) -> Fraction:
        return _to_fraction(self._c[i]) if i in self._c else Fraction(0)

    def __contains__(self, i: object) -> bool:
        return i in self._c

    def __iter__(self):
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SpanElement):
            return self._c == other._c
        if other == 0:
            return not self._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple((i, _to_fraction(c)) for i, c in self._c.items()))
        return self._hash

    def _combine(self, other: "SpanElement", sign: int) -> "SpanElement":
        out = dict(self._c)
        for i, c in other._c.items():
            out[i] = out.get(i, 0) + sign * c
        return SpanElement._trusted(out)

    def __add__(self, other: "SpanElement") -> "SpanElement":
        if isinstance(other, int) and other == 0:
            return self
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other: "SpanElement") -> "SpanElement":
        if isinstance(other, int) and other == 0:
            return self
        return self._combine(other, -1)

    def __neg__(self) -> "SpanElement":
        return SpanElement._trusted({i: -c for i, c in self._c.items()})

    def __mul__(self, scalar: object) -> "SpanElement":
        s = _q(scalar)
        return SpanElement._trusted({i: c * s for i, c in self._c.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"SpanElement({self.format()!r})"

    def format(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k, (i, c) in enumerate(self._c.items()):
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag} "
            term = f"{coef}e_{i}"
            if k == 0:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
        return " ".join(parts)

    def to_json(self) -> dict[str, str]:
        return {str(i): str(c) for i, c in self._c.items()}


ZERO = SpanElement()
Rule = Callable[[int, int], "SpanElement | Mapping[int, object]"]


def as_element(x: "SpanElement | int | Mapping[int, object]") -> SpanElement:
    """Integers are read as basis indices."""
    if isinstance(x, SpanElement):
        return x
    if isinstance(x, int):
        return SpanElement.basis(x)
    return SpanElement(x)


class SpanAlgebra:
    """An algebra on the basis ``e_i``, given by ``rule(i, j) = e_i * e_j``."""

    def __init__(self, rule: Rule, name: str = "algebra"):
        self.rule = rule
        self.name = name
        self._cache: dict[tuple[int, int], SpanElement] = {}

    def basis_product(self, i: int, j: int) -> SpanElement:
        key = (i, j)
        out = self._cache.get(key)
        if out is None:
            out = as_element(self.rule(i, j))
            self._cache[key] = out
        return out

    def mul(self, x: SpanElement, y: SpanElement) -> SpanElement:
        acc: dict[int, object] = {}
        for i, a in x._c.items():
            for j, b in y._c.items():
                ab = a * b
                for k, c in self.basis_product(i, j)._c.items():
                    acc[k] = acc.get(k, 0) + ab * c
        return SpanElement._trusted(acc)

    __call__ = mul

    def __repr__(self) -> str:
        return f"SpanAlgebra({self.name!r})"


@dataclass
class BiAlgebra:
    """Two products on one basis.

    For a transposed Poisson or Poisson pair ``circ`` is the bracket and
    ``bullet`` the commutative product.  For a Novikov-Poisson pair ``circ``
    holds the Novikov product.
    """

    circ: SpanAlgebra
    bullet: SpanAlgebra
    name: str = "dialgebra"


# -- constructions ---------------------------------------------------------

def make_aS(S: Sequence[int], eps: Sequence[object]) -> SpanAlgebra:
    """``e_i x e_j = (j - i) e_{i+j} + sum_s eps_s e_{i+j+s}``."""
    if len(S) != len(eps):
        raise ValueError(f"{len(S)} shifts but {len(eps)} coefficients")
    shifts = [(int(s), Fraction(e)) for s, e in zip(S, eps)]

    def rule(i, j):
        return itertools.chain(((i + j, j - i),), ((i + j + s, e) for s, e in shifts))

    desc = ", ".join(f"{s}:{e}" for s, e in shifts)
    return SpanAlgebra(lambda i, j: SpanElement(rule(i, j)), f"A(S) [{desc}]")


def make_derivation_algebra(u: SpanElement | int, v: SpanElement | int | None) -> SpanAlgebra:
    """``a x b = u (a d(b) - b d(a)) + v a b`` on Laurent polynomials.

    ``e_i = x^i``, ``e_i e_j = e_{i+j}`` and ``d = d/dx``.  Integer arguments
    name basis elements; ``v=None`` means zero.
    """
    u = as_element(u)
    v = ZERO if v is None else as_element(v)

    def rule(i, j):
        terms = [(i + j + k - 1, c * (j - i)) for k, c in u.items()]
        terms += [(i + j + k, c) for k, c in v.items()]
        return SpanElement(terms)

    return SpanAlgebra(rule, f"derivation u={u.format()} v={v.format()}")


def make_witt_np() -> BiAlgebra:
    """``e_i . e_j = j e_{i+j}`` and ``e_i o e_j = e_{i+j}`` (that is a d(b) and ab)."""
    dot = SpanAlgebra(lambda i, j: SpanElement({i + j: j}), "x^i d(x^j)")
    prod = SpanAlgebra(lambda i, j: SpanElement({i + j: 1}), "x^i x^j")
    return BiAlgebra(dot, prod, "witt-np")


def localize(np: BiAlgebra, u: SpanElement | int = 0, v: SpanElement | int = 0) -> BiAlgebra:
    """``a o_u b = u * (a.b - b.a)`` and ``a *_v b = v * (a * b)`` from a Novikov-Poisson pair."""
    u = as_element(u)
    v = as_element(v)
    dot, prod = np.circ, np.bullet

    def circ(i, j):
        a, b = SpanElement.basis(i), SpanElement.basis(j)
        return prod.mul(u, dot.mul(a, b) - dot.mul(b, a))

    def bullet(i, j):
        return prod.mul(v, prod.basis_product(i, j))

    name = f"{np.name}[u={u.format()}, v={v.format()}]"
    return BiAlgebra(SpanAlgebra(circ, name + " circ"), SpanAlgebra(bullet, name + " bullet"), name)


def polarize(a: SpanAlgebra) -> BiAlgebra:
    """``x o y = (xy - yx)/2`` and ``x * y = (xy + yx)/2``."""
    half = Fraction(1, 2)

    def circ(i, j):
        return (a.basis_product(i, j) - a.basis_product(j, i)) * half

    def bullet(i, j):
        return (a.basis_product(i, j) + a.basis_product(j, i)) * half

    return BiAlgebra(SpanAlgebra(circ, f"{a.name} circ"), SpanAlgebra(bullet, f"{a.name} bullet"),
                     f"polarization of {a.name}")


def depolarize(b: BiAlgebra, scale: object = 1) -> SpanAlgebra:
    """``x y = scale * (x o y + x * y)``; the plain recombination has scale 1."""
    s = Fraction(scale)

    def rule(i, j):
        return (b.circ.basis_product(i, j) + b.bullet.basis_product(i, j)) * s

    return SpanAlgebra(rule, f"depolarization of {b.name}" + ("" if s == 1 else f" (scale {s})"))


# -- window checks ---------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    axiom: str
    indices: tuple[int, ...]
    lhs: SpanElement
    rhs: SpanElement

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "indices": list(self.indices),
                "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json()}


@dataclass(frozen=True)
class Verdict:
    passed: bool
    checked: int
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {"passed": self.passed, "checked": self.checked,
                "witness": None if self.witness is None else self.witness.to_json()}


def evaluate(a: SpanAlgebra, p: MLPoly, args: Sequence[SpanElement]) -> SpanElement:
    """``p(args[0], args[1], ...)`` in ``a``; leaf ``i`` takes ``args[i-1]``."""

    def go(t: Tree) -> SpanElement:
        if isinstance(t, int):
            return args[t - 1]
        return a.mul(go(t[0]), go(t[1]))

    acc: dict[int, object] = {}
    for t, c in p.terms.items():
        c = _q(c)
        for k, x in go(t)._c.items():
            acc[k] = acc.get(k, 0) + c * x
    return SpanElement._trusted(acc)


def window(K: int, arity: int) -> Iterable[tuple[int, ...]]:
    """All index tuples in ``[-K, K]^arity``, lexicographically."""
    if K < 0:
        raise ValueError("window size must be non-negative")
    return itertools.product(range(-K, K + 1), repeat=arity)


def check_identity(a: SpanAlgebra, p: MLPoly, K: int = 4, name: str | None = None) -> Verdict:
    """Test ``p = 0`` on every basis tuple in the window."""
    if not p.is_standard:
        raise ValueError("identity must be written in t1..tn")
    name = name or str(p)
    count = 0
    for idx in window(K, p.arity):
        count += 1
        val = evaluate(a, p, [SpanElement.basis(i) for i in idx])
        if val:
            return Verdict(False, count, Witness(name, idx, val, ZERO))
    return Verdict(True, count)


class _Ops:
    def __init__(self, b: BiAlgebra):
        self.c = b.circ.mul
        self.b = b.bullet.mul


def _jacobi(m, a, b, c):
    return m(m(a, b), c) + m(m(b, c), a) + m(m(c, a), b)


AXIOMS: dict[str, list[tuple[str, int, Callable]]] = {
    "transposed_poisson": [
        ("circ anticommutative", 2, lambda o, a, b: (o.c(a, b), -o.c(b, a))),
        ("circ Jacobi", 3, lambda o, a, b, c: (_jacobi(o.c, a, b, c), ZERO)),
        ("bullet commutative", 2, lambda o, a, b: (o.b(a, b), o.b(b, a))),
        ("bullet associative", 3, lambda o, a, b, c: (o.b(o.b(a, b), c), o.b(a, o.b(b, c)))),
        ("1/2-derivation", 3, lambda o, a, b, c: (
            o.b(a, o.c(b, c)) * 2, o.c(o.b(a, b), c) + o.c(b, o.b(a, c)))),
    ],
    "novikov_poisson": [
        ("left-symmetric", 3, lambda o, a, b, c: (
            o.c(o.c(a, b) - o.c(b, a), c), o.c(a, o.c(b, c)) - o.c(b, o.c(a, c)))),
        ("right-commutative", 3, lambda o, a, b, c: (o.c(o.c(a, b), c), o.c(o.c(a, c), b))),
        ("bullet commutative", 2, lambda o, a, b: (o.b(a, b), o.b(b, a))),
        ("bullet associative", 3, lambda o, a, b, c: (o.b(o.b(a, b), c), o.b(a, o.b(b, c)))),
        ("bullet-dot compatibility", 3, lambda o, a, b, c: (o.b(a, o.c(b, c)), o.c(o.b(a, b), c))),
        ("dot-bullet derivation", 3, lambda o, a, b, c: (
            o.c(a, o.b(b, c)), o.b(o.c(a, b), c) + o.b(b, o.c(a, c)))),
    ],
    "poisson": [
        ("circ anticommutative", 2, lambda o, a, b: (o.c(a, b), -o.c(b, a))),
        ("circ Jacobi", 3, lambda o, a, b, c: (_jacobi(o.c, a, b, c), ZERO)),
        ("bullet commutative", 2, lambda o, a, b: (o.b(a, b), o.b(b, a))),
        ("bullet associative", 3, lambda o, a, b, c: (o.b(o.b(a, b), c), o.b(a, o.b(b, c)))),
        ("Leibniz rule", 3, lambda o, a, b, c: (
            o.c(a, o.b(b, c)), o.b(o.c(a, b), c) + o.b(b, o.c(a, c)))),
    ],
}


def check_axioms(b: BiAlgebra, axiom_set: str, K: int = 4) -> Verdict:
    """Check every axiom of ``axiom_set`` on all basis tuples in the window.

    Axioms are tried in their listed order, tuples lexicographically; the
    first failure is returned.
    """
    try:
        axioms = AXIOMS[axiom_set]
    except KeyError:
        raise KeyError(f"unknown axiom set {axiom_set!r}; known: {', '.join(AXIOMS)}") from None
    ops = _Ops(b)
    count = 0
    for name, arity, fn in axioms:
        for idx in window(K, arity):
            count += 1
            args = [SpanElement.basis(i) for i in idx]
            lhs, rhs = fn(ops, *args)
            if lhs != rhs:
                return Verdict(False, count, Witness(name, idx, lhs, rhs))
    return Verdict(True, count)


def recheck(b: BiAlgebra | SpanAlgebra, witness: Witness, identity: MLPoly | None = None,
            axiom_set: str | None = None) -> bool:
    """Re-evaluate a witness; True iff the recorded failure is genuine."""
    args = [SpanElement.basis(i) for i in witness.indices]
    if identity is not None:
        val = evaluate(b, identity, args)
        return bool(val) and val == witness.lhs
    for name, arity, fn in AXIOMS[axiom_set]:
        if name == witness.axiom:
            lhs, rhs = fn(_Ops(b), *args)
            return lhs != rhs and lhs == witness.lhs and rhs == witness.rhs
    raise KeyError(witness.axiom)
