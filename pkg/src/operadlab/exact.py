"""Exact rational linear algebra on sparse rows.

Public values use ``fractions.Fraction``.  Two elimination engines sit
underneath:

* :class:`Eliminator` keeps a fraction-free integer echelon form and only
  back-substitutes on request.  It suits very sparse rows.
* :class:`ReducedEchelon` keeps a canonical reduced echelon form at all
  times, with gmpy2 rationals when available.  It suits denser rows where
  most incoming rows turn out to be dependent.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Mapping, Sequence

try:
    from gmpy2 import mpq as _fast_q
except ImportError:  # pragma: no cover
    _fast_q = Fraction

Rational = Fraction


def _to_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    return Fraction(int(q.numerator), int(q.denominator))


class DimensionError(ValueError):
    """Raised when rows of different ambient dimension are combined."""


def _check_dim(expected: int, got: int) -> None:
    if expected != got:
        raise DimensionError(f"ambient dimension mismatch: {expected} != {got}")


class SparseRow:
    """An immutable sparse vector in ``Q^dim``.

    ``entries`` maps column index to a nonzero rational; iteration is in
    increasing column order.
    """

    __slots__ = ("dim", "_entries", "_hash")

    def __init__(self, entries: Mapping[int, object] | Iterable[tuple[int, object]] = (), dim: int = 0):
        if isinstance(entries, Mapping):
            entries = entries.items()
        clean = {}
        for col, val in entries:
            if not 0 <= col < dim:
                raise IndexError(f"column {col} outside ambient dimension {dim}")
            val = Fraction(val)
            if val:
                clean[col] = val
        self.dim = dim
        self._entries = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def _trusted(cls, entries: dict[int, Fraction], dim: int) -> "SparseRow":
        # entries already sorted, nonzero, in range
        row = cls.__new__(cls)
        row.dim = dim
        row._entries = entries
        row._hash = None
        return row

    @classmethod
    def from_dense(cls, values: Sequence[object]) -> "SparseRow":
        return cls(enumerate(values), len(values))

    @classmethod
    def zero(cls, dim: int) -> "SparseRow":
        return cls._trusted({}, dim)

    @property
    def entries(self) -> Mapping[int, Fraction]:
        return dict(self._entries)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self._entries.items())

    def to_dense(self) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for col, val in self._entries.items():
            out[col] = val
        return out

    def leading(self) -> int | None:
        """Column of the first nonzero entry, or None for the zero row."""
        return next(iter(self._entries), None)

    def __getitem__(self, col: int) -> Fraction:
        return self._entries.get(col, Fraction(0))

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __iter__(self):
        return iter(self._entries.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseRow):
            return NotImplemented
        return self.dim == other.dim and self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, tuple(self._entries.items())))
        return self._hash

    def _combine(self, other: "SparseRow", sign: int) -> "SparseRow":
        _check_dim(self.dim, other.dim)
        out = dict(self._entries)
        for col, val in other._entries.items():
            v = out.get(col, 0) + sign * val
            if v:
                out[col] = v
            else:
                out.pop(col, None)
        return SparseRow._trusted(dict(sorted(out.items())), self.dim)

    def __add__(self, other: "SparseRow") -> "SparseRow":
        return self._combine(other, 1)

    def __sub__(self, other: "SparseRow") -> "SparseRow":
        return self._combine(other, -1)

    def __neg__(self) -> "SparseRow":
        return SparseRow._trusted({c: -v for c, v in self._entries.items()}, self.dim)

    def __mul__(self, scalar: object) -> "SparseRow":
        s = Fraction(scalar)
        if not s:
            return SparseRow.zero(self.dim)
        return SparseRow._trusted({c: v * s for c, v in self._entries.items()}, self.dim)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        body = ", ".join(f"{c}: {v}" for c, v in self._entries.items())
        return f"SparseRow({{{body}}}, dim={self.dim})"


def _integer_row(row: SparseRow | Mapping[int, object]) -> dict[int, int]:
    """Scale a rational row to a primitive integer row (same span)."""
    items = row.items() if isinstance(row, SparseRow) else (
        (c, Fraction(v)) for c, v in row.items())
    items = [(c, v) for c, v in items if v]
    if not items:
        return {}
    den = lcm(*(v.denominator for _, v in items))
    out = {c: v.numerator * (den // v.denominator) for c, v in items}
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


class Eliminator:
    """Incremental row echelon form over the integers.

    Rows are kept primitive (content one) with a positive leading entry; the
    leading column is unique per stored row.  Adding a row reduces its
    leading entry against stored pivots until it either vanishes or lands on
    a fresh column.  Entries behind the leading one are left alone, so the
    stored rows are echelon but not reduced.
    """

    def __init__(self, ambient: int):
        self.ambient = ambient
        self._pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def __len__(self) -> int:
        return len(self._pivots)

    def add(self, row: SparseRow | Mapping[int, object]) -> bool:
        """Insert ``row``; return True iff the rank went up."""
        if isinstance(row, SparseRow):
            _check_dim(self.ambient, row.dim)
        return self.add_integer(_integer_row(row))

    def add_integer(self, row: dict[int, int]) -> bool:
        """Like :meth:`add` for a row already given with int entries.

        The caller guarantees column indices lie in range.  ``row`` is not
        mutated.
        """
        if not row:
            return False
        pivots = self._pivots
        heap = list(row)
        heapq.heapify(heap)
        row = dict(row)
        steps = 0
        while heap:
            col = heapq.heappop(heap)
            b = row.get(col)
            if not b:
                continue
            prow = pivots.get(col)
            if prow is None:
                if b < 0:
                    row = {c: -v for c, v in row.items()}
                pivots[col] = _primitive(row)
                return True
            a = prow[col]
            g = gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                for c in row:
                    row[c] *= a
            for c, v in prow.items():
                nv = row.get(c, 0) - b * v
                if nv:
                    if c not in row:
                        heapq.heappush(heap, c)
                    row[c] = nv
                else:
                    row.pop(c, None)
            steps += 1
            if a != 1 and steps % 16 == 0:
                row = _primitive(row)
        return False

    def contains(self, row: SparseRow | Mapping[int, object]) -> bool:
        return not self._reduce_integer(_integer_row(row))

    def _reduce_integer(self, row: dict[int, int]) -> dict[int, int]:
        """Fully reduce ``row`` against all pivots; return the remainder."""
        pivots = self._pivots
        heap = list(row)
        heapq.heapify(heap)
        row = dict(row)
        while heap:
            col = heapq.heappop(heap)
            b = row.get(col)
            if not b or col not in pivots:
                continue
            prow = pivots[col]
            a = prow[col]
            g = gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                for c in row:
                    row[c] *= a
            for c, v in prow.items():
                nv = row.get(c, 0) - b * v
                if nv:
                    if c not in row:
                        heapq.heappush(heap, c)
                    row[c] = nv
                else:
                    row.pop(c, None)
        return _primitive(row) if row else row

    def pivot_columns(self) -> list[int]:
        return sorted(self._pivots)

    def subspace(self) -> "Subspace":
        """Back-substitute into canonical reduced row echelon form."""
        cols = sorted(self._pivots)
        pivot_set = set(cols)
        reduced: dict[int, dict[int, Fraction]] = {}
        for col in reversed(cols):
            prow = self._pivots[col]
            lead = prow[col]
            out: dict[int, Fraction] = {}
            for c, v in prow.items():
                out[c] = Fraction(v, lead)
            for c in [c for c in out if c != col and c in pivot_set]:
                f = out.pop(c, None)
                if not f:
                    continue
                # reduced[c] has entries only at c and at non-pivot columns
                for cc, vv in reduced[c].items():
                    if cc == c:
                        continue
                    nv = out.get(cc, 0) - f * vv
                    if nv:
                        out[cc] = nv
                    else:
                        out.pop(cc, None)
            reduced[col] = out
        rows = tuple(SparseRow._trusted(dict(sorted(reduced[c].items())), self.ambient) for c in cols)
        return Subspace._trusted(self.ambient, rows)


class ReducedEchelon:
    """Incrementally maintained canonical reduced row echelon form.

    Each stored row has a 1 at its pivot, which is its smallest column, and
    zeros at every other pivot.  New rows are reduced, take their smallest
    remaining column as pivot, and that column is cleared from older rows.
    Because pivots are always leading columns the result equals the
    canonical RREF of the span whatever the insertion order.
    """

    def __init__(self, ambient: int):
        self.ambient = ambient
        self._rows: dict[int, dict] = {}
        # free column -> pivots of the rows that use it
        self._users: dict[int, set[int]] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def _reduce(self, row: dict) -> dict:
        rows = self._rows
        for c in [c for c in row if c in rows]:
            f = row.pop(c)
            for cc, vv in rows[c].items():
                if cc == c:
                    continue
                nv = row.get(cc, 0) - f * vv
                if nv:
                    row[cc] = nv
                else:
                    del row[cc]
        return row

    def add(self, row: SparseRow | Mapping[int, object]) -> bool:
        """Insert ``row``; return True iff the rank went up."""
        if isinstance(row, SparseRow):
            _check_dim(self.ambient, row.dim)
            items = row.items()
        else:
            items = row.items()
        q = _fast_q
        row = self._reduce({c: q(v) for c, v in items if v})
        if not row:
            return False
        p = min(row)
        f = row[p]
        if f != 1:
            row = {c: v / f for c, v in row.items()}
        rows, users = self._rows, self._users
        for r_piv in users.pop(p, ()):
            r = rows[r_piv]
            g = r.pop(p)
            for cc, vv in row.items():
                if cc == p:
                    continue
                nv = r.get(cc, 0) - g * vv
                if nv:
                    if cc not in r:
                        users.setdefault(cc, set()).add(r_piv)
                    r[cc] = nv
                else:
                    del r[cc]
                    users[cc].discard(r_piv)
        rows[p] = row
        for cc in row:
            if cc != p:
                users.setdefault(cc, set()).add(p)
        return True

    def contains(self, row: SparseRow | Mapping[int, object]) -> bool:
        q = _fast_q
        return not self._reduce({c: q(v) for c, v in row.items() if v})

    def pivot_columns(self) -> list[int]:
        return sorted(self._rows)

    def row(self, pivot: int) -> dict:
        """The stored row with the given pivot (internal rationals; do not mutate)."""
        return self._rows[pivot]

    def is_pivot(self, col: int) -> bool:
        return col in self._rows

    def subspace(self) -> "Subspace":
        rows = tuple(
            SparseRow._trusted({c: _to_fraction(v) for c, v in sorted(self._rows[p].items())}, self.ambient)
            for p in sorted(self._rows))
        return Subspace._trusted(self.ambient, rows)


class Subspace:
    """A subspace of ``Q^ambient`` held as canonical RREF rows.

    Rows have strictly increasing pivot columns, each pivot equals one, and
    every pivot column is zero in all other rows.  Two subspaces are equal
    exactly when their row tuples coincide.
    """

    __slots__ = ("ambient", "rows", "_pivots")

    def __init__(self, rows: Iterable[SparseRow] = (), ambient: int | None = None):
        other = rref(list(rows), ambient)
        self.ambient = other.ambient
        self.rows = other.rows
        self._pivots = other._pivots

    @classmethod
    def _trusted(cls, ambient: int, rows: tuple[SparseRow, ...]) -> "Subspace":
        s = cls.__new__(cls)
        s.ambient = ambient
        s.rows = rows
        s._pivots = {r.leading(): r for r in rows}
        return s

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        rows = tuple(SparseRow._trusted({i: Fraction(1)}, ambient) for i in range(ambient))
        return cls._trusted(ambient, rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(self._pivots)

    def reduce(self, v: SparseRow) -> SparseRow:
        """Remainder of ``v`` after clearing every pivot column."""
        _check_dim(self.ambient, v.dim)
        out = dict(v._entries)
        for col in [c for c in v._entries if c in self._pivots]:
            f = out.pop(col, None)
            if not f:
                continue
            for cc, vv in self._pivots[col].items():
                if cc == col:
                    continue
                nv = out.get(cc, 0) - f * vv
                if nv:
                    out[cc] = nv
                else:
                    out.pop(cc, None)
        return SparseRow._trusted(dict(sorted(out.items())), self.ambient)

    def __contains__(self, v: SparseRow) -> bool:
        return not self.reduce(v)

    def __le__(self, other: "Subspace") -> bool:
        _check_dim(self.ambient, other.ambient)
        return all(r in other for r in self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        _check_dim(self.ambient, other.ambient)
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.ambient, self.rows))

    def __add__(self, other: "Subspace") -> "Subspace":
        _check_dim(self.ambient, other.ambient)
        return rref(self.rows + other.rows, self.ambient)

    def __repr__(self) -> str:
        return f"Subspace(rank={self.rank}, ambient={self.ambient})"


def rref(rows: Sequence[SparseRow], ambient: int | None = None) -> Subspace:
    """Canonical reduced row echelon basis of the span of ``rows``.

    ``ambient`` is only needed when ``rows`` is empty; otherwise it is taken
    from the rows (and checked against them if given).
    """
    if ambient is None:
        ambient = rows[0].dim if rows else 0
    for r in rows:
        _check_dim(ambient, r.dim)
    elim = Eliminator(ambient)
    for r in rows:
        elim.add(r)
    return elim.subspace()


def member(s: Subspace, v: SparseRow) -> bool:
    return v in s


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    return a == b


def express(target: SparseRow, generators: Sequence[SparseRow]) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum(c[i] * generators[i]) == target``.

    Generators are taken greedily in order; one that is dependent on earlier
    ones always gets coefficient zero.  Returns None if ``target`` is not in
    the span.
    """
    dim = target.dim
    for g in generators:
        _check_dim(dim, g.dim)
    # pivot column -> (row with pivot 1, combination of generators giving it)
    pivots: dict[int, tuple[dict[int, Fraction], dict[int, Fraction]]] = {}

    def reduce(row: dict[int, Fraction], combo: dict[int, Fraction]):
        heap = list(row)
        heapq.heapify(heap)
        while heap:
            col = heapq.heappop(heap)
            f = row.get(col)
            if not f or col not in pivots:
                continue
            prow, pcombo = pivots[col]
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    if c not in row:
                        heapq.heappush(heap, c)
                    row[c] = nv
                else:
                    row.pop(c, None)
            for i, v in pcombo.items():
                nv = combo.get(i, 0) - f * v
                if nv:
                    combo[i] = nv
                else:
                    combo.pop(i, None)
        return row, combo

    for idx, g in enumerate(generators):
        row, combo = reduce(dict(g._entries), {idx: Fraction(1)})
        if row:
            lead = min(row)
            f = row[lead]
            pivots[lead] = ({c: v / f for c, v in row.items()},
                            {i: v / f for i, v in combo.items()})

    # target - sum(f_k p_k) = rest; rest == 0 iff target in span
    rest, neg = reduce(dict(target._entries), {})
    if rest:
        return None
    coeffs = [Fraction(0)] * len(generators)
    for i, v in neg.items():
        coeffs[i] = -v
    return coeffs
