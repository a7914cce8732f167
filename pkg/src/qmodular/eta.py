"""Eta quotients: products of eta(m tau)^e as exact q-expansions.

eta(m tau)^e = q^(m e / 24) * prod_{n>=1} (1 - q^(m n))^e, so a quotient
prod_m eta(m tau)^(e_m) is a rational-exponent prefactor times an integer-
grid power series.  Only quotients whose prefactor exponent lands in (1/2)Z
can be represented here; anything else raises FractionalExponent.

The Euler product prod (1 - q^n) is generated from its pentagonal-number
expansion (exponents k(3k-1)/2), which keeps quotient expansion cheap; the
test suite checks it against naive term-by-term binomial products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import FractionalExponent, UnknownLevel
from .qseries import QSeries, _as_fraction, one_series


@lru_cache(maxsize=None)
def euler_function(prec: int) -> QSeries:
    """prod_{n>=1} (1 - q^n) below q^prec, via the pentagonal-number series
    1 + sum_{k>=1} (-1)^k (q^(k(3k-1)/2) + q^(k(3k+1)/2))."""
    if prec < 0:
        prec = 0
    arr = [0] * prec
    if prec > 0:
        arr[0] = 1
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 >= prec:
            break
        s = -1 if k % 2 else 1
        arr[e1] += s
        if e2 < prec:
            arr[e2] += s
        k += 1
    return QSeries.build(1, 0, arr, prec)


def euler_product(m: int, prec: int) -> QSeries:
    """prod_{n>=1} (1 - q^(m n)) below q^prec."""
    if m < 1:
        raise ValueError("multiplier must be a positive integer")
    inner = euler_function(max(0, math.ceil(Fraction(prec, m))))
    return inner.substitute_power(m).truncate(prec)


def _canonical_factors(factors):
    merged: dict[int, int] = {}
    for m, e in factors:
        if not isinstance(m, int) or not isinstance(e, int):
            raise TypeError("eta factors must be pairs of ints")
        if m < 1:
            raise ValueError(f"eta multiplier must be >= 1, got {m}")
        merged[m] = merged.get(m, 0) + e
    return tuple(sorted((m, e) for m, e in merged.items() if e != 0))


@dataclass(frozen=True)
class EtaQuotient:
    """prod_m eta(m tau)^(e_m), stored as sorted (multiplier, exponent) pairs."""

    factors: tuple

    def __init__(self, factors):
        object.__setattr__(self, "factors", _canonical_factors(factors))

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(e for _, e in self.factors), 2)

    @property
    def lead_exponent(self) -> Fraction:
        """Exponent of the leading term: sum of m*e/24."""
        return Fraction(sum(m * e for m, e in self.factors), 24)

    def expand(self, prec) -> QSeries:
        """q-expansion below exponent prec."""
        s = self.lead_exponent
        if s.denominator not in (1, 2):
            raise FractionalExponent(
                f"leading exponent {s} of this eta quotient is not in (1/2)Z"
            )
        bound = _as_fraction(prec)
        rel = math.ceil(bound - s)
        if rel <= 0:
            # the leading term already sits at or beyond the bound
            pn = max(0, math.floor(bound * 2))
            return QSeries.build(2, pn, (), pn)
        acc = one_series(rel)
        for m, e in self.factors:
            base = euler_product(m, rel)
            if e < 0:
                base = base.invert()
                e = -e
            acc = acc * base.pow(e)
        return acc.shift(s).truncate(bound)

    def __str__(self):
        return "*".join(
            (f"eta({m})" if e == 1 else f"eta({m})^{e}") for m, e in self.factors
        )


@dataclass(frozen=True)
class LevelUnit:
    """The distinguished cusp form Delta_N: weight rho, valuation nu, and its
    eta-quotient presentation."""

    level: int
    rho: int
    nu: int
    quotient: EtaQuotient


def _unit(level, rho, nu, factors) -> LevelUnit:
    q = EtaQuotient(factors)
    assert q.weight == rho, (level, q.weight)
    assert q.lead_exponent == nu, (level, q.lead_exponent)
    return LevelUnit(level, rho, nu, q)


DELTA_TABLE = {
    1: _unit(1, 12, 1, [(1, 24)]),
    2: _unit(2, 4, 1, [(1, -8), (2, 16)]),
    3: _unit(3, 6, 2, [(1, -6), (3, 18)]),
    4: _unit(4, 2, 1, [(2, -4), (4, 8)]),
    5: _unit(5, 4, 2, [(1, -2), (5, 10)]),
    6: _unit(6, 2, 2, [(1, 2), (2, -4), (3, -6), (6, 12)]),
    7: _unit(7, 6, 4, [(1, -2), (7, 14)]),
    8: _unit(8, 2, 2, [(4, -4), (8, 8)]),
    9: _unit(9, 2, 2, [(3, -2), (9, 6)]),
    10: _unit(10, 4, 6, [(1, 2), (2, -4), (5, -10), (10, 20)]),
}


def level_unit(level: int) -> LevelUnit:
    if level not in DELTA_TABLE:
        raise UnknownLevel(f"no level data for N={level} (supported: 1..10)")
    return DELTA_TABLE[level]


def delta(level: int, prec) -> QSeries:
    """q-expansion of Delta_N below exponent prec."""
    return level_unit(level).quotient.expand(prec)
