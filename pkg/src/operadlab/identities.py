"""Named degree-3 identities and implication certificates between them.

Argument order follows the usual function notation: ``lwlei(t3, t1, t2)`` is
``apply_permutation(lwlei, (3, 1, 2))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exact import Subspace, express, rref
from .magma import (MLPoly, anticommutator, apply_permutation, commutator,
                    enumerate_monomials, format_rational, to_row, var)

t1, t2, t3 = var(1), var(2), var(3)


def _br(p, q):
    return commutator(p, q)


def _ac(p, q):
    return anticommutator(p, q)


def _builders():
    a, b, c = t1, t2, t3
    return {
        # [a,b]c - 2a(bc) + 2b(ac)
        "lwlei": _br(a, b) * c - 2 * (a * (b * c)) + 2 * (b * (a * c)),
        # a[b,c] - 2(ab)c + 2(ac)b
        "rwlei": a * _br(b, c) - 2 * ((a * b) * c) + 2 * ((a * c) * b),
        "lieadm": _br(_br(a, b), c) + _br(_br(b, c), a) + _br(_br(c, a), b),
        "assadm": _ac(a, _ac(b, c)) - _ac(_ac(a, b), c),
        "alder": 2 * _ac(_br(a, b), c) - _br(a, _ac(b, c)) - _br(_ac(a, c), b),
        "lalia": _br(a, b) * c + _br(b, c) * a + _br(c, a) * b,
        "ralia": a * _br(b, c) + b * _br(c, a) + c * _br(a, b),
        # (ab)c = a(bc) - b(ac)
        "lleib": (a * b) * c - a * (b * c) + b * (a * c),
        # a(bc) = (ab)c - (ac)b
        "rleib": a * (b * c) - (a * b) * c + (a * c) * b,
        "assoc": (a * b) * c - a * (b * c),
        "jacobi": (a * b) * c + (b * c) * a + (c * a) * b,
        "anticomm": a * b + b * a,
        "comm": a * b - b * a,
        # Poisson rule for the bracket acting on the anticommutator
        "pder": _br(a, _ac(b, c)) - _ac(_br(a, b), c) - _ac(b, _br(a, c)),
    }


NAMES = tuple(_builders())


@lru_cache(maxsize=None)
def _table() -> dict[str, MLPoly]:
    return _builders()


def builtin(name: str) -> MLPoly:
    try:
        return _table()[name]
    except KeyError:
        raise KeyError(f"unknown identity {name!r}; known: {', '.join(NAMES)}") from None


def permutations(n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(1, n + 1)))


def orbit(p: MLPoly) -> list[MLPoly]:
    return [apply_permutation(p, s) for s in permutations(p.arity)]


def orbit_span(polys: Iterable[MLPoly], n: int = 3) -> Subspace:
    """Span of all relabelings of ``polys`` inside the arity-n monomial space."""
    idx = enumerate_monomials(n)
    rows = []
    for p in polys:
        if p.arity != n:
            raise ValueError(f"polynomial of arity {p.arity} in an arity-{n} span")
        rows.extend(to_row(q, idx) for q in orbit(p))
    return rref(rows, len(idx))


def span_of(names: Sequence[str]) -> Subspace:
    return orbit_span([builtin(n) for n in names], 3)


@dataclass(frozen=True)
class Certificate:
    """``target == sum(c * generator(sigma))`` over the listed terms."""

    target: str
    combination: tuple[tuple[Fraction, str, tuple[int, ...]], ...]

    def expand(self) -> MLPoly:
        return combine(self.combination)

    def verify(self) -> bool:
        return self.expand() == builtin(self.target)

    def format(self) -> str:
        parts = []
        for k, (c, name, sigma) in enumerate(self.combination):
            args = ",".join(f"t{i}" for i in sigma)
            mag = abs(c)
            coef = "" if mag == 1 else format_rational(mag) + " "
            sign = "-" if c < 0 else "+"
            term = f"{coef}{name}({args})"
            parts.append((("-" if c < 0 else "") + term) if k == 0 else f"{sign} {term}")
        return f"{self.target}(t1,t2,t3) = " + (" ".join(parts) if parts else "0")

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "combination": [
                {"coefficient": format_rational(c), "generator": name, "arguments": list(sigma)}
                for c, name, sigma in self.combination],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        return cls(data["target"], tuple(
            (Fraction(t["coefficient"]), t["generator"], tuple(t["arguments"]))
            for t in data["combination"]))


def combine(terms: Iterable[tuple[object, str, Sequence[int]]]) -> MLPoly:
    """Expand ``sum(c * name(t_sigma))``."""
    total = MLPoly.zero(3)
    for c, name, sigma in terms:
        p = builtin(name)
        total = total + Fraction(c) * apply_permutation(p, sigma)
    return total


def implies3(premises: Sequence[str], goal: str) -> tuple[bool, Certificate | None]:
    """Decide whether ``goal = 0`` follows from ``premises = 0`` in degree 3.

    Generators are the relabelings of each premise, in the order given and
    with permutations in lexicographic order; the certificate uses the first
    independent ones.
    """
    target = builtin(goal)
    gens = [(name, s) for name in premises for s in permutations(builtin(name).arity)]
    idx = enumerate_monomials(target.arity)
    rows = [to_row(apply_permutation(builtin(n), s), idx) for n, s in gens]
    for n, _ in gens:
        if builtin(n).arity != target.arity:
            raise ValueError(f"{n} and {goal} have different arity")
    coeffs = express(to_row(target, idx), rows)
    if coeffs is None:
        return False, None
    cert = Certificate(goal, tuple(
        (c, n, s) for c, (n, s) in zip(coeffs, gens) if c))
    if not cert.verify():
        raise AssertionError(f"certificate for {goal} does not re-expand")  # pragma: no cover
    return True, cert


def equiv3(left: Sequence[str], right: Sequence[str]) -> bool:
    return span_of(left) == span_of(right)


FOUR_TERM = (
    (1, "assadm", (1, 2, 3)),
    (1, "lieadm", (1, 2, 3)),
    (-1, "lwlei", (3, 1, 2)),
    (1, "rwlei", (2, 3, 1)),
)


def verify_four_term(scale: object = 1) -> bool:
    """assadm + lieadm - lwlei(t3,t1,t2) + rwlei(t2,t3,t1) vanishes identically."""
    s = Fraction(scale)
    return not combine((c * s, n, sigma) for c, n, sigma in FOUR_TERM)
