"""Operad components as a tower of quotients.

Every arity-n monomial is a product ``x y`` with x and y monomials on
complementary label sets S and T.  Modulo everything that vanishes in lower
arities, the arity-n free component is therefore

    W(n) = sum over splits (S, T) of P(|S|) (x) P(|T|)

with labels moved onto S and T.  A consequence of the relations is a relation
instance sitting at some node of a tree.  Unless that node is the root, the
instance already dies in one of the factors, and at the root its arguments
may be replaced by basis representatives.  So P(n) is W(n) modulo the
elements ``r(m_1, ..., m_k)`` with r running over a basis of the
relabeling-closed relation span and the m_i over basis monomials on the blocks
of a set partition of {1..n}.  Block order does not matter, since the
relation span is closed under relabeling.

This is much smaller than working in the full monomial space: at arity 6
there are 2808 columns instead of 30240.
"""

from __future__ import annotations

import logging
import threading
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator

from .exact import ReducedEchelon, _fast_q, _integer_row
from .magma import MLPoly, Tree, enumerate_monomials, leaves, relabel

log = logging.getLogger(__name__)


def set_partitions(n: int, k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Partitions of {1..n} into k blocks, blocks ordered by least element."""
    def rec(i: int, blocks: list[list[int]]):
        if n - i + 1 < k - len(blocks):
            return
        if i > n:
            if len(blocks) == k:
                yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        if len(blocks) < k:
            blocks.append([i])
            yield from rec(i + 1, blocks)
            blocks.pop()

    yield from rec(1, [])


def _standardize(t: Tree) -> tuple[Tree, tuple[int, ...]]:
    labels = tuple(sorted(leaves(t)))
    return relabel(t, {v: k for k, v in enumerate(labels, 1)}), labels


class _Level:
    def __init__(self, arity: int, columns: dict, echelon: ReducedEchelon | None):
        self.arity = arity
        self.columns = columns          # (S, i, j) -> column of W(arity)
        self.echelon = echelon
        if echelon is None:
            self.free = [0]
        else:
            self.free = [c for c in range(len(columns)) if not echelon.is_pivot(c)]
        self.free_pos = {c: k for k, c in enumerate(self.free)}
        self.coords: dict[Tree, dict] = {}
        self._nf: dict[int, dict] = {}
        self.reps: list[Tree] = []

    @property
    def dim(self) -> int:
        return len(self.free)

    def normal_form(self, col: int) -> dict:
        """Column as a combination of basis (free) columns."""
        out = self._nf.get(col)
        if out is None:
            if col in self.free_pos:
                out = {self.free_pos[col]: _fast_q(1)}
            else:
                row = self.echelon.row(col)
                out = {self.free_pos[c]: -v for c, v in row.items() if c != col}
            self._nf[col] = out
        return out


class QuotientTower:
    """Computes the components P(1), P(2), ... of the operad of a relation set."""

    def __init__(self, relations):
        self.relations = relations
        self._rels: dict[int, list[list[tuple[Tree, object]]]] = {}
        for k in sorted({r.arity for r in relations.relations}):
            idx = enumerate_monomials(k)
            basis = []
            for row in relations.span(k).rows:
                basis.append([(idx[c], _fast_q(v)) for c, v in _integer_row(row).items()])
            self._rels[k] = basis
        unit = _Level(1, {(): 0}, None)
        unit.reps = [1]
        unit.coords[1] = {0: _fast_q(1)}
        self._levels = {1: unit}
        self._lock = threading.RLock()

    def dims(self, n_max: int) -> list[int]:
        return [self.level(n).dim for n in range(1, n_max + 1)]

    def dim(self, n: int) -> int:
        return self.level(n).dim

    def basis(self, n: int) -> list[Tree]:
        """Monomials whose classes form a basis of P(n)."""
        return list(self.level(n).reps)

    def reduce(self, p: MLPoly) -> dict[int, Fraction]:
        """Coordinates of ``p`` on :meth:`basis`; zero iff p is a consequence."""
        out: dict[int, object] = {}
        for t, c in p.terms.items():
            for b, v in self._coords(t).items():
                nv = out.get(b, 0) + _fast_q(c) * v
                if nv:
                    out[b] = nv
                else:
                    del out[b]
        return {b: Fraction(int(v.numerator), int(v.denominator)) for b, v in sorted(out.items())}

    def level(self, n: int) -> _Level:
        if n < 1:
            raise ValueError("arity must be at least 1")
        with self._lock:
            for k in range(2, n + 1):
                if k not in self._levels:
                    self._levels[k] = self._build(k)
            return self._levels[n]

    def _coords(self, t: Tree) -> dict:
        """Coordinates of a monomial on labels 1..k in the basis of P(k)."""
        lev = self._levels[len(leaves(t))]
        out = lev.coords.get(t)
        if out is not None:
            return out
        left, right = t
        sl, S = _standardize(left)
        sr, _ = _standardize(right)
        cl, cr = self._coords(sl), self._coords(sr)
        out = {}
        for i, a in cl.items():
            for j, b in cr.items():
                ab = a * b
                for col, v in lev.normal_form(lev.columns[(S, i, j)]).items():
                    nv = out.get(col, 0) + ab * v
                    if nv:
                        out[col] = nv
                    else:
                        del out[col]
        lev.coords[t] = out
        return out

    def _columns(self, n: int) -> dict:
        cols = {}
        for size in range(1, n):
            dl = self._levels[size].dim
            dr = self._levels[n - size].dim
            for S in combinations(range(1, n + 1), size):
                for i in range(dl):
                    for j in range(dr):
                        cols[(S, i, j)] = len(cols)
        return cols

    def _generators(self, n: int, cols: dict) -> list[dict]:
        gens = []
        for k, basis in sorted(self._rels.items()):
            if k > n:
                continue
            for blocks in set_partitions(n, k):
                reps = [self._levels[len(b)].reps for b in blocks]
                for choice in product(*(range(len(r)) for r in reps)):
                    subst = {v: relabel(reps[v - 1][choice[v - 1]], dict(enumerate(blocks[v - 1], 1)))
                             for v in range(1, k + 1)}
                    for rel in basis:
                        row: dict[int, object] = {}
                        for (left, right), c in rel:
                            sl, S = _standardize(relabel(left, subst))
                            sr, _ = _standardize(relabel(right, subst))
                            cl, cr = self._coords(sl), self._coords(sr)
                            for i, a in cl.items():
                                ca = c * a
                                for j, b in cr.items():
                                    col = cols[(S, i, j)]
                                    nv = row.get(col, 0) + ca * b
                                    if nv:
                                        row[col] = nv
                                    else:
                                        del row[col]
                        if row:
                            gens.append(row)
        return gens

    def _build(self, n: int) -> _Level:
        cols = self._columns(n)
        gens = self._generators(n, cols)
        # short rows first keeps the reduced form sparse for longer
        gens.sort(key=len)
        ech = ReducedEchelon(len(cols))
        for g in gens:
            ech.add(g)
        lev = _Level(n, cols, ech)
        keys = list(cols)
        for c in lev.free:
            S, i, j = keys[c]
            T = tuple(x for x in range(1, n + 1) if x not in S)
            left = relabel(self._levels[len(S)].reps[i], dict(enumerate(S, 1)))
            right = relabel(self._levels[len(T)].reps[j], dict(enumerate(T, 1)))
            lev.reps.append((left, right))
        log.debug("arity %d: %d columns, %d generators, dimension %d", n, len(cols), len(gens), lev.dim)
        return lev

