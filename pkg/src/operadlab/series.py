"""Truncated power series with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .magma import format_rational


class PowerSeries:
    """Coefficients of x^0..x^N; everything past x^N is unknown."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[object]):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")

    @classmethod
    def x(cls, N: int) -> "PowerSeries":
        return cls([0, 1] + [0] * (N - 1))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def _common(self, other: "PowerSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        N = self._common(other)
        return PowerSeries(self.coeffs[i] + other.coeffs[i] for i in range(N + 1))

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        N = self._common(other)
        return PowerSeries(self.coeffs[i] - other.coeffs[i] for i in range(N + 1))

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(-c for c in self.coeffs)

    def __mul__(self, other) -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            s = Fraction(other)
            return PowerSeries(c * s for c in self.coeffs)
        N = self._common(other)
        a, b = self.coeffs, other.coeffs
        return PowerSeries(sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(N + 1))

    __rmul__ = __mul__

    def truncate(self, N: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: N + 1])

    def compose(self, g: "PowerSeries") -> "PowerSeries":
        """``self(g(x))``; g must have zero constant term."""
        if g.coeffs[0]:
            raise ValueError("inner series must have zero constant term")
        N = self._common(g)
        g = g.truncate(N)
        # Horner: f0 + g(f1 + g(f2 + ...))
        out = PowerSeries([self.coeffs[N]] + [0] * N)
        for c in reversed(self.coeffs[:N]):
            out = out * g
            out = PowerSeries((out.coeffs[0] + c,) + out.coeffs[1:])
        return out

    def __call__(self, g: "PowerSeries") -> "PowerSeries":
        return self.compose(g)

    def terms(self) -> list[tuple[int, Fraction]]:
        return [(n, c) for n, c in enumerate(self.coeffs) if c]

    def format(self) -> str:
        """E.g. ``-x + x^2 - 37/60 x^5``; ``0`` for the zero series."""
        parts = []
        for k, (n, c) in enumerate(self.terms()):
            mon = "" if n == 0 else ("x" if n == 1 else f"x^{n}")
            mag = abs(c)
            if not mon:
                body = format_rational(mag)
            elif mag == 1:
                body = mon
            else:
                body = f"{format_rational(mag)} {mon}"
            if k == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"PowerSeries({self.format()!r}, order={self.order})"


def compose_series(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    return f.compose(g)
