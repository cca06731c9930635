"""Operad components of a variety of algebras and its Koszul dual.

The consequence space of a relation set in arity n is the multilinear part of
the T-ideal it generates.  It is built one arity at a time: from a spanning
set of the arity-m space we form ``t_{m+1} f``, ``f t_{m+1}`` and ``f`` with
``t_i`` replaced by ``t_i t_{m+1}``, then relabel by the m+1 transpositions
``(k, m+1)``.  Because the arity-m space is already closed under S_m, those
transpositions suffice for closure under S_{m+1}, and the ``t_{m+1} t_i``
substitution is one of the relabelings.

All generators are images of the relations under maps that send monomials to
monomials, so they stay as sparse as the relations themselves.  The spanning
set carried from one arity to the next is the set of generators that raised
the rank, not the reduced basis.

Dimensions alone are cheaper to get from :class:`~operadlab.tower.QuotientTower`,
which works in a much smaller space; :func:`operad_dims` uses it, and the test
suite checks that both routes agree.
"""

from __future__ import annotations

import itertools
import logging
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from pathlib import Path
from typing import Iterable, Sequence

from .exact import Eliminator, SparseRow, Subspace, _integer_row, rref
from .identities import builtin, orbit, permutations
from .magma import (MLPoly, Tree, enumerate_monomials, format_poly,
                    format_tree, free_dimension, graft, parse_letters,
                    parse_poly, relabel, to_row)
from .series import PowerSeries
from .tower import QuotientTower

log = logging.getLogger(__name__)

DEFAULT_MAX_ARITY = 5


class ArityLimitError(ValueError):
    """Arity 6 and beyond must be requested explicitly."""


@dataclass(frozen=True)
class RelationSet:
    name: str
    relations: tuple[MLPoly, ...] = ()

    def __post_init__(self):
        for r in self.relations:
            if not r.is_standard:
                raise ValueError(f"relation {r} is not written in t1..tn")
            if r.arity < 2:
                raise ValueError("relations must have arity at least 2")

    @property
    def arities(self) -> list[int]:
        return sorted({r.arity for r in self.relations})

    def is_quadratic(self) -> bool:
        return all(r.arity == 3 for r in self.relations)

    def span(self, n: int = 3) -> Subspace:
        """Relabeling-closed span of the arity-n relations."""
        idx = enumerate_monomials(n)
        rows = [to_row(q, idx) for r in self.relations if r.arity == n for q in orbit(r)]
        return rref(rows, len(idx))

    def to_text(self) -> str:
        lines = [f"name: {self.name}"]
        lines += [format_poly(r) for r in self.relations]
        return "\n".join(lines) + "\n"


def parse_relation_set(text: str, default_name: str = "relations") -> RelationSet:
    """Read a relation-set file.

    Blank lines and ``#`` comments are ignored; an optional ``name: ...``
    header names the set; every other line is one polynomial.
    """
    name = default_name
    rels = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"name\s*:\s*(\S.*)", line)
        if m:
            name = m.group(1).strip()
            continue
        try:
            rels.append(parse_poly(line))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return RelationSet(name, tuple(rels))


def load_relation_set(path: str | Path) -> RelationSet:
    path = Path(path)
    return parse_relation_set(path.read_text(), default_name=path.stem)


def _full_relations() -> tuple[MLPoly, ...]:
    return tuple(MLPoly.monomial(m) for m in enumerate_monomials(3))


def named_relation_set(name: str) -> RelationSet:
    sets = {
        "wlei": ("lwlei", "rwlei"),
        "assoc": ("assoc",),
        "leibniz": ("lleib", "rleib"),
        "free": (),
        "empty": (),
        "lie": ("anticomm", "jacobi"),
        "comm-assoc": ("comm", "assoc"),
    }
    if name == "full":
        return RelationSet("full", _full_relations())
    if name not in sets:
        raise KeyError(f"unknown relation set {name!r}; known: {', '.join(sorted([*sets, 'full']))}")
    return RelationSet(name, tuple(builtin(n) for n in sets[name]))


def relation_set(spec: str) -> RelationSet:
    """A named set, else a path to a relation file."""
    try:
        return named_relation_set(spec)
    except KeyError:
        if Path(spec).is_file():
            return load_relation_set(spec)
        raise


# -- consequence spaces ----------------------------------------------------

@lru_cache(maxsize=None)
def _step_maps(m: int) -> tuple[tuple[list[int], ...], tuple[list[int], ...]]:
    """Column maps from arity m to arity m+1.

    Returns (lift maps, relabel maps): the lift maps send a monomial to
    ``t_{m+1} x``, ``x t_{m+1}`` and ``x[t_i -> t_i t_{m+1}]`` for each i;
    the relabel maps apply the transposition (k, m+1) for k = 1..m and the
    identity.
    """
    small = enumerate_monomials(m)
    big = enumerate_monomials(m + 1)
    new = m + 1
    lifts = [
        [big.index((new, x)) for x in small],
        [big.index((x, new)) for x in small],
    ]
    for i in range(1, m + 1):
        lifts.append([big.index(graft(x, i, (i, new))) for x in small])
    relabels = []
    for k in range(1, m + 1):
        swap = {j: j for j in range(1, new + 1)}
        swap[k], swap[new] = new, k
        relabels.append([big.index(relabel(x, swap)) for x in big])
    relabels.append(None)
    return tuple(lifts), tuple(relabels)


@lru_cache(maxsize=None)
def _orbit_maps(n: int) -> tuple[list[int], ...]:
    idx = enumerate_monomials(n)
    return tuple([idx.index(relabel(x, s)) for x in idx] for s in permutations(n))


class ConsequenceBuilder:
    """Walks a relation set up through the arities, one step at a time.

    ``spanning[n]`` holds integer rows spanning the arity-n consequence space
    and ``eliminators[n]`` the echelon form used to pick them.
    """

    def __init__(self, relations: RelationSet):
        self.relations = relations
        self.spanning: dict[int, list[dict[int, int]]] = {1: []}
        self.eliminators: dict[int, Eliminator] = {1: Eliminator(1)}

    def _seed_rows(self, n: int) -> Iterable[dict[int, int]]:
        idx = enumerate_monomials(n)
        maps = _orbit_maps(n)
        for r in self.relations.relations:
            if r.arity != n:
                continue
            base = _integer_row(to_row(r, idx))
            for perm in maps:
                yield {perm[c]: v for c, v in base.items()}

    def _lifted_rows(self, m: int) -> Iterable[dict[int, int]]:
        lifts, relabels = _step_maps(m)
        for row in self.spanning[m]:
            for lift in lifts:
                lifted = {lift[c]: v for c, v in row.items()}
                for perm in relabels:
                    if perm is None:
                        yield lifted
                    else:
                        yield {perm[c]: v for c, v in lifted.items()}

    def extend(self, n: int, keep: bool = True) -> Eliminator:
        """Make sure arity n is computed; return its eliminator.

        With ``keep=False`` the spanning rows for the top arity are not
        stored (enough when only the rank is wanted).
        """
        if n in self.eliminators:
            return self.eliminators[n]
        m = n - 1
        if m not in self.eliminators:
            self.extend(m)
        if m not in self.spanning:
            raise RuntimeError(f"arity {m} was computed without its spanning set")
        elim = Eliminator(free_dimension(n))
        kept: list[dict[int, int]] = []
        sources = itertools.chain(self._seed_rows(n), self._lifted_rows(m))
        count = 0
        for row in sources:
            count += 1
            if elim.add_integer(row) and keep:
                kept.append(row)
        log.debug("arity %d: %d generators, rank %d", n, count, elim.rank)
        self.eliminators[n] = elim
        if keep:
            self.spanning[n] = kept
        return elim

    def rank(self, n: int) -> int:
        return self.extend(n).rank


def consequence_space(relations: RelationSet, n: int) -> Subspace:
    """Arity-n multilinear part of the T-ideal generated by ``relations``."""
    if n < 1:
        raise ValueError("arity must be at least 1")
    return ConsequenceBuilder(relations).extend(n).subspace()


def _check_arity(n_max: int, allow_arity_6: bool) -> None:
    if n_max > DEFAULT_MAX_ARITY and not allow_arity_6:
        raise ArityLimitError(f"arity {n_max} needs allow_arity_6=True (long exact elimination)")
    if n_max > 6:
        raise ArityLimitError("arities above 6 are not supported")


_towers: dict[tuple, QuotientTower] = {}
_towers_lock = threading.Lock()


def tower_for(relations: RelationSet) -> QuotientTower:
    """Shared tower for relation sets with the same spans."""
    key = tuple((k, relations.span(k).rows) for k in relations.arities)
    with _towers_lock:
        tower = _towers.get(key)
        if tower is None:
            tower = _towers[key] = QuotientTower(relations)
    return tower


def operad_dims(relations: RelationSet, n_max: int, allow_arity_6: bool = False) -> list[int]:
    """``d_n = free_dimension(n) - dim consequence_space(n)`` for n = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    _check_arity(n_max, allow_arity_6)
    return tower_for(relations).dims(n_max)


def operad_dims_direct(relations: RelationSet, n_max: int) -> list[int]:
    """Same as :func:`operad_dims`, through the full consequence spaces (slow)."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    builder = ConsequenceBuilder(relations)
    dims = []
    for n in range(1, n_max + 1):
        rank = builder.extend(n, keep=n < n_max).rank
        dims.append(free_dimension(n) - rank)
    return dims


# -- degree-3 normal form --------------------------------------------------

DEFAULT_BASIS = ("c(ab)", "(bc)a", "(ca)b", "(ac)b", "(ba)c", "(ab)c")


class NormalFormError(ValueError):
    pass


@dataclass
class Rewriter:
    """Rewrites arity-3 monomials modulo a relation span onto a fixed basis."""

    basis: tuple[Tree, ...]
    table: dict[Tree, MLPoly]

    def rewrite(self, x: Tree | MLPoly) -> MLPoly:
        if isinstance(x, MLPoly):
            out = MLPoly.zero(3)
            for t, c in x.terms.items():
                out = out + c * self.rewrite(t)
            return out
        if x in self.basis:
            return MLPoly.monomial(x)
        return self.table[x]

    def __call__(self, x):
        return self.rewrite(x)

    @property
    def non_basis(self) -> list[Tree]:
        return list(self.table)


def normal_form(relations: RelationSet, basis: Sequence[Tree | str] | None = None) -> Rewriter:
    """Rewriting table of the arity-3 quotient onto ``basis``.

    ``basis`` defaults to the six monomials c(ab), (bc)a, (ca)b, (ac)b,
    (ba)c, (ab)c when they form a basis of the quotient, and otherwise to
    the non-pivot monomials of the canonical reduced span.
    """
    idx = enumerate_monomials(3)
    span = relations.span(3)
    if basis is None:
        if span.rank == 6:
            try:
                return normal_form(relations, DEFAULT_BASIS)
            except NormalFormError:
                pass
        pivots = set(span.pivots)
        basis = [m for k, m in enumerate(idx) if k not in pivots]
    basis = tuple(parse_letters(b) if isinstance(b, str) else b for b in basis)
    if len(basis) != len(idx) - span.rank:
        raise NormalFormError(f"{len(basis)} basis monomials for a quotient of dimension {len(idx) - span.rank}")
    others = [m for m in idx if m not in basis]
    # order columns so that non-basis monomials come first and get the pivots
    order = others + list(basis)
    col = {m: k for k, m in enumerate(order)}
    rows = [SparseRow({col[idx[c]]: v for c, v in r.items()}, len(idx)) for r in span.rows]
    reduced = rref(rows, len(idx))
    if reduced.pivots != tuple(range(len(others))):
        dependent = [format_letters(basis[p - len(others)]) for p in reduced.pivots if p >= len(others)]
        raise NormalFormError("basis monomials are dependent modulo the relations: " + ", ".join(dependent))
    table = {}
    for m, r in zip(others, reduced.rows):
        # m + sum(c_j b_j) == 0 modulo relations
        table[m] = MLPoly({order[c]: -v for c, v in r.items() if c != col[m]}, 3)
    return Rewriter(basis, table)


def format_letters(t: Tree) -> str:
    return format_tree(t, "abc")


# -- Koszul dual -----------------------------------------------------------

TensorPoly = dict  # (A-tree, U-tree) -> Fraction


def _tensor_bracket(x: TensorPoly, y: TensorPoly) -> TensorPoly:
    """[x(p), y(q)] = (xy)(pq) - (yx)(qp), extended bilinearly."""
    out: TensorPoly = {}
    for (a1, u1), c1 in x.items():
        for (a2, u2), c2 in y.items():
            c = c1 * c2
            for key, s in ((((a1, a2), (u1, u2))), 1), ((((a2, a1), (u2, u1))), -1):
                v = out.get(key, 0) + s * c
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return out


def tensor_jacobiator() -> TensorPoly:
    """jac(a(u), b(v), c(w)) with a, b, c and u, v, w labelled 1, 2, 3."""
    g = [{(i, i): Fraction(1)} for i in (1, 2, 3)]
    out: TensorPoly = {}
    for x, y, z in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        for key, v in _tensor_bracket(_tensor_bracket(g[x], g[y]), g[z]).items():
            nv = out.get(key, 0) + v
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)
    return out


def jacobiator_coefficients(rewriter: Rewriter) -> dict[Tree, MLPoly]:
    """U-side coefficient of each basis monomial after rewriting the A side."""
    coeffs: dict[Tree, dict[Tree, Fraction]] = {b: {} for b in rewriter.basis}
    for (a_tree, u_tree), c in tensor_jacobiator().items():
        for b, d in rewriter.rewrite(a_tree).terms.items():
            slot = coeffs[b]
            slot[u_tree] = slot.get(u_tree, 0) + c * d
    return {b: MLPoly(terms, 3) for b, terms in coeffs.items()}


def koszul_dual(relations: RelationSet) -> RelationSet:
    """Relations of the Koszul dual of a binary quadratic operad.

    They are the conditions on U making A(x)U with the bracket
    (xy)(pq) - (yx)(qp) satisfy the Jacobi identity for every algebra A of
    the given variety.
    """
    if not relations.is_quadratic():
        raise ValueError("the Koszul dual needs degree-3 relations only")
    span = relations.span(3)
    rewriter = normal_form(relations)
    coeffs = jacobiator_coefficients(rewriter)
    polys = [p for p in coeffs.values() if p]
    dual = RelationSet(f"{relations.name}!", tuple(polys))
    expected = len(enumerate_monomials(3)) - span.rank
    got = dual.span(3).rank
    if got != expected:
        raise AssertionError(f"dual relation span has dimension {got}, expected {expected}")
    return dual


# -- generating series -----------------------------------------------------

def gen_series(dims: Sequence[int], N: int | None = None) -> PowerSeries:
    """Skew-exponential series sum((-1)^n d_n x^n / n!), dims starting at n = 1."""
    if N is None:
        N = len(dims)
    if len(dims) < N:
        raise ValueError(f"need dimensions up to arity {N}, got {len(dims)}")
    coeffs = [Fraction(0)] + [Fraction((-1) ** n * dims[n - 1], factorial(n)) for n in range(1, N + 1)]
    return PowerSeries(coeffs)


@dataclass
class KoszulTest:
    relations: RelationSet
    dual: RelationSet
    dims: list[int]
    dual_dims: list[int]
    f: PowerSeries
    f_dual: PowerSeries
    composite: PowerSeries
    residual: PowerSeries
    self_dual: bool = field(default=False)

    @property
    def passes(self) -> bool:
        """True when the necessary condition holds through the computed degree."""
        return not self.residual


def koszul_test(relations: RelationSet, N: int, allow_arity_6: bool = False) -> KoszulTest:
    if N < 2:
        raise ValueError("degree must be at least 2")
    dual = koszul_dual(relations)
    dims = operad_dims(relations, N, allow_arity_6)
    self_dual = dual.span(3) == relations.span(3)
    dual_dims = dims if self_dual else operad_dims(dual, N, allow_arity_6)
    f = gen_series(dims, N)
    g = gen_series(dual_dims, N)
    comp = f.compose(g)
    return KoszulTest(relations, dual, dims, dual_dims, f, g, comp, comp - PowerSeries.x(N), self_dual)


def koszulity_residual(relations: RelationSet, N: int, allow_arity_6: bool = False) -> PowerSeries:
    """f(f_dual(x)) - x through degree N; nonzero means not Koszul."""
    return koszul_test(relations, N, allow_arity_6).residual
