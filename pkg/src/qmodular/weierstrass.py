"""Torsion values of rescaled Weierstrass functions as q-expansions.

Two families, both weight-2 objects on the m-fold cover:

* wp_hat(a, b, m): the rescaled p-function evaluated at z = a/m' tau-style
  torsion points written as (a tau + b-ish) combinations -- concretely the
  expansion

      -1/3 + S(a, b) + sum_{n>=1} [ S(n m + a, b) + S(n m - a, b) - 2 S(n m, 0) ]

  where S(c, b) is the Lambert expansion of 1/sin^2(pi(c tau + b)) from
  qseries.inv_sin2 (S(0, 1/2) = 1, S at the origin is a pole, and S is even
  in c).  Domain: m >= 1, 0 <= a < m with 2a integral, b in {0, 1/2}, and
  (a, b) != (0, 0).

* wpt_hat(a, b, m): the half-period-shifted companion

      sum_{n in Z} [ S((n + 1/2) m + a, b + 1/2 mod 1) - S((n + 1/2) m, 1/2) ]

  for |a| <= m/2, 2a integral, b in {0, 1/2}; the argument is a pole exactly
  when |a| = m/2 and b = 1/2.

Also here: classical Eisenstein series E_k(m tau), the weight-2 level
series Phi_N in both of its presentations, and an independent product-form
expansion of wpt_hat(1/2-point) used as a test oracle.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import PoleAtArgument, UnknownLevel, UnsupportedWeight
from .qseries import (
    HALF,
    QSeries,
    _as_fraction,
    _lambert_acc,
    bernoulli,
    monomial,
    one_series,
    sigma_series,
)


def _check_phase(b: Fraction) -> Fraction:
    if b not in (0, HALF):
        raise ValueError(f"phase must be 0 or 1/2, got {b}")
    return Fraction(b)


def _torsion_den(a: Fraction) -> int:
    if a.denominator not in (1, 2):
        raise ValueError(f"torsion offset {a} must have denominator 1 or 2")
    return a.denominator


@lru_cache(maxsize=None)
def wp_hat(a, b, m: int, prec) -> QSeries:
    """q-expansion of the rescaled p-function torsion value (see module doc)."""
    a = _as_fraction(a)
    b = _check_phase(_as_fraction(b))
    if m < 1:
        raise ValueError(f"cover index must be >= 1, got {m}")
    if not (0 <= a < m):
        raise ValueError(f"offset {a} outside [0, {m})")
    den = _torsion_den(a)
    if a == 0 and b == 0:
        raise PoleAtArgument("wp_hat at the lattice origin")
    bound = _as_fraction(prec)
    pn = max(0, math.ceil(bound * den))
    arr = [0] * pn
    eps = 1 if b == 0 else -1
    const = Fraction(-1, 3)
    if a == 0:
        const += 1  # S(0, 1/2)
    elif a < bound:
        _lambert_acc(arr, den, a, eps, 1)
    n = 1
    while n * m - a < bound:
        c = n * m
        if c + a < bound:
            _lambert_acc(arr, den, c + a, eps, 1)
        _lambert_acc(arr, den, c - a, eps, 1)
        if c < bound:
            _lambert_acc(arr, den, Fraction(c), 1, -2)
        n += 1
    if pn > 0:
        arr[0] += const
    return QSeries.build(den, 0, arr, pn)


@lru_cache(maxsize=None)
def wpt_hat(a, b, m: int, prec) -> QSeries:
    """q-expansion of the half-period-shifted companion (see module doc)."""
    a = _as_fraction(a)
    b = _check_phase(_as_fraction(b))
    if m < 1:
        raise ValueError(f"cover index must be >= 1, got {m}")
    if not (-Fraction(m, 2) <= a <= Fraction(m, 2)):
        raise ValueError(f"offset {a} outside [-{m}/2, {m}/2]")
    _torsion_den(a)
    if abs(a) == Fraction(m, 2) and b == HALF:
        raise PoleAtArgument(f"wpt_hat pole at offset {a} with phase 1/2")
    den = 2 if (m % 2 == 1 or a.denominator == 2) else 1
    bound = _as_fraction(prec)
    pn = max(0, math.ceil(bound * den))
    arr = [0] * pn
    bp = HALF if b == 0 else Fraction(0)  # b + 1/2 mod 1
    eps_main = 1 if bp == 0 else -1
    const = 0
    for sign in (1, -1):
        n = 0 if sign == 1 else -1
        while True:
            base = (n + HALF) * m  # never zero
            cmain = base + a
            if abs(cmain) >= bound and abs(base) >= bound:
                break
            if cmain == 0:
                const += 1  # S(0, 1/2); bp = 0 was excluded by the pole check
            elif abs(cmain) < bound:
                _lambert_acc(arr, den, abs(cmain), eps_main, 1)
            if abs(base) < bound:
                _lambert_acc(arr, den, abs(base), -1, -1)
            n += sign
    if pn > 0 and const:
        arr[0] += const
    return QSeries.build(den, 0, arr, pn)


def wpt_valuation(a, b, m: int) -> Fraction:
    """Exact leading exponent of wpt_hat(a, b, m): m/2 - |a| when |a| < m/2,
    else 0 (the surviving folded term is the constant 1)."""
    a = _as_fraction(a)
    return Fraction(m, 2) - abs(a) if abs(a) < Fraction(m, 2) else Fraction(0)


# ---------------------------------------------------------------------------
# Eisenstein series
# ---------------------------------------------------------------------------


def eisenstein(k: int, m: int, prec) -> QSeries:
    """E_k(m tau) = 1 - (2k/B_k) sum_{n>=1} sigma_{k-1}(n) q^(m n), for even
    k >= 4."""
    if not isinstance(k, int) or k % 2 == 1 or k < 4:
        raise UnsupportedWeight(f"Eisenstein weight must be even and >= 4, got {k}")
    if m < 1:
        raise ValueError(f"multiplier must be >= 1, got {m}")
    bound = _as_fraction(prec)
    pn = max(0, math.ceil(bound))
    coef = Fraction(-2 * k) / bernoulli(k)
    return one_series(max(pn, 1)).truncate(max(bound, 0)) + sigma_series(k - 1, m, pn).scale(coef)


# ---------------------------------------------------------------------------
# the weight-2 level series Phi_N
# ---------------------------------------------------------------------------


def phi_level(N: int, prec, mode: str = "weierstrass") -> QSeries:
    """Phi_N, the normalized weight-2 form on level N (2 <= N <= 10).

    mode 'weierstrass': -3/(N-1) times the parity-folded sum of the torsion
    values wp_hat(k, 0, N) over 0 < k < N (each pair {k, N-k} counted once,
    doubled; the middle point of even N counted once).

    mode 'divisor': 1 + 24/(N-1) * sum_{n>=1} (sigma_1(n) - N sigma_1(n/N)) q^n,
    the divisor-sum presentation.  Both modes agree; keeping the two routes
    separate lets the identity suite compare them.
    """
    if not 2 <= N <= 10:
        raise UnknownLevel(f"Phi_N needs 2 <= N <= 10, got {N}")
    if mode == "weierstrass":
        h = N // 2
        acc = None
        for k in range(1, h + 1):
            t = wp_hat(Fraction(k), Fraction(0), N, prec)
            if N % 2 == 0 and k == h:
                pass  # the middle torsion point is its own partner
            else:
                t = t.scale(2)
            acc = t if acc is None else acc + t
        return acc.scale(Fraction(-3, N - 1))
    if mode == "divisor":
        bound = _as_fraction(prec)
        pn = max(0, math.ceil(bound))
        s = sigma_series(1, 1, pn) - sigma_series(1, N, pn).scale(N)
        return one_series(max(pn, 1)).truncate(max(bound, 0)) + s.scale(Fraction(24, N - 1))
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# independent product-form oracle
# ---------------------------------------------------------------------------


def twpa_half_product(prec) -> QSeries:
    """Product-form expansion of wpt_hat at the half-period on the full lattice:

        -16 q^(1/2) prod_{j>=1} (1-q^(2j))^4
                    prod_{j odd} (1-q^(j/2))^4
                    [ prod_{j>=1} (1+q^j)^2 / prod_{j odd} (1-q^(j/2))^2 ]^2

    built literally, binomial by binomial, as an independent cross-check of
    the Lambert-sum route."""
    bound = _as_fraction(prec)
    a = one_series(bound)  # prod (1 - q^(2j))
    j = 2
    while j < bound:
        a = a * (one_series(bound) - monomial(1, j, 1, bound))
        j += 2
    b = one_series(bound)  # prod over odd j of (1 - q^(j/2))
    j = 1
    while Fraction(j, 2) < bound:
        b = b * (one_series(bound) - monomial(1, j, 2, bound))
        j += 2
    c = one_series(bound)  # prod (1 + q^j)
    j = 1
    while j < bound:
        c = c * (one_series(bound) + monomial(1, j, 1, bound))
        j += 1
    bracket = c.pow(2) * b.pow(2).invert()
    tail = a.pow(4) * b.pow(4) * bracket.pow(2)
    return tail.scale(-16).shift(HALF).truncate(bound)
