"""Truncated q-expansions with exact rational coefficients.

A series is a finite window of a Puiseux expansion in q: exponents live in
(1/D)Z with D in {1, 2}, coefficients are exact rationals, and every series
carries an explicit precision bound ("known for all exponents below
prec/D").  Arithmetic tracks how far results stay trustworthy, so that a
product of series known to different depths never overclaims.

Coefficients are stored as plain ints whenever they are integral and as
fractions.Fraction otherwise; the two compare equal, and keeping ints keeps
the convolution loops fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import (
    FractionalExponent,
    InvalidPrecision,
    NotInvertible,
    PoleAtArgument,
    UnsupportedTwist,
)

Rat = Union[int, Fraction]

HALF = Fraction(1, 2)


def _norm_coeff(c: Rat) -> Rat:
    """Collapse integral Fractions to int (canonical storage form)."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


@dataclass(frozen=True)
class QSeries:
    """One truncated Puiseux series.

    den    -- exponent denominator D (1 or 2), minimal for the stored data
    val    -- numerator of the leading exponent; leading exponent is val/den
    coeffs -- coeffs[i] is the coefficient of q^((val+i)/den); coeffs[0] != 0
    prec   -- numerator of the precision bound: all exponents < prec/den known

    A series with no known-nonzero coefficient ("zero so far") has
    val == prec and coeffs == ().
    """

    den: int
    val: int
    coeffs: tuple
    prec: int

    # -- construction -----------------------------------------------------

    @staticmethod
    def build(den: int, val: int, coeffs, prec: int) -> "QSeries":
        """Normalize raw data: strip leading zeros, int-ify coefficients,
        and reduce the exponent denominator when that loses no information
        (all supported exponents *and* the precision bound must survive the
        rescaling exactly)."""
        assert den in (1, 2), den
        cs = [_norm_coeff(c) for c in coeffs]
        # strip leading zeros
        k = 0
        while k < len(cs) and cs[k] == 0:
            k += 1
        val += k
        cs = cs[k:]
        if not cs:
            val = prec
        assert len(cs) == prec - val, (len(cs), prec, val)
        if den == 2 and prec % 2 == 0 and val % 2 == 0:
            if all(cs[i] == 0 for i in range(1, len(cs), 2)):
                return QSeries(1, val // 2, tuple(cs[0::2]), prec // 2)
        return QSeries(den, val, tuple(cs), prec)

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True when no nonzero coefficient is known ("zero so far")."""
        return not self.coeffs

    @property
    def bound(self) -> Fraction:
        """Precision bound as an exponent: known below this."""
        return Fraction(self.prec, self.den)

    @property
    def valuation(self) -> Fraction:
        """Leading exponent (equals bound for a zero-so-far series)."""
        return Fraction(self.val, self.den)

    @property
    def leading(self):
        return self.coeffs[0] if self.coeffs else None

    def coefficient(self, e) -> Rat:
        """Coefficient of q^e; raises InvalidPrecision beyond the bound."""
        e = _as_fraction(e)
        if e >= self.bound:
            raise InvalidPrecision(f"coefficient of q^{e} not determined (bound {self.bound})")
        t = e * self.den
        if t.denominator != 1:
            return 0
        i = int(t) - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    # -- rescaling helpers -------------------------------------------------

    def _rescale(self, den: int) -> "QSeries":
        """Rewrite on a finer exponent grid (den a multiple of self.den)."""
        if den == self.den:
            return self
        g = den // self.den
        assert g * self.den == den
        n = len(self.coeffs)
        cs = [0] * (n * g)
        for i, c in enumerate(self.coeffs):
            cs[i * g] = c
        return QSeries(den, self.val * g, tuple(cs), self.prec * g)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        den = self.den if self.den == other.den else 2
        a, b = self._rescale(den), other._rescale(den)
        prec = min(a.prec, b.prec)
        val = min(a.val, b.val, prec)
        out = [0] * (prec - val)
        for i, c in enumerate(a.coeffs):
            j = a.val + i - val
            if j < len(out):
                out[j] += c
        for i, c in enumerate(b.coeffs):
            j = b.val + i - val
            if j < len(out):
                out[j] += c
        return QSeries.build(den, val, out, prec)

    def __neg__(self) -> "QSeries":
        return QSeries(self.den, self.val, tuple(-c for c in self.coeffs), self.prec)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def scale(self, c) -> "QSeries":
        """Multiply by an exact rational scalar."""
        c = _as_fraction(c)
        if c == 0:
            return QSeries(self.den, self.prec, (), self.prec)
        return QSeries.build(self.den, self.val, [c * x for x in self.coeffs], self.prec)

    def __mul__(self, other: "QSeries") -> "QSeries":
        den = self.den if self.den == other.den else 2
        a, b = self._rescale(den), other._rescale(den)
        val = a.val + b.val
        prec = min(a.prec + b.val, b.prec + a.val)
        n = prec - val
        if n <= 0 or not a.coeffs or not b.coeffs:
            return QSeries.build(den, prec, (), prec)
        ca = a.coeffs[:n]
        cb = b.coeffs[:n]
        if len(ca) > 32 and len(cb) > 32:
            # walk the sparser operand on the outside
            na = sum(1 for x in ca if x != 0)
            nb = sum(1 for x in cb if x != 0)
            if nb < na:
                ca, cb = cb, ca
        out = [0] * n
        for i, x in enumerate(ca):
            if x == 0:
                continue
            top = n - i
            for j in range(min(len(cb), top)):
                y = cb[j]
                if y != 0:
                    out[i + j] += x * y
        return QSeries.build(den, val, out, prec)

    def pow(self, n: int) -> "QSeries":
        """n-th power, n >= 0, by repeated squaring.

        pow(f, 0) is 1 carried to f's *relative* precision (prec - val
        exponent steps above 0); raises InvalidPrecision when that window
        is empty."""
        if not isinstance(n, int) or n < 0:
            raise ValueError("pow exponent must be a nonnegative integer")
        if n == 0:
            return monomial(1, 0, 1, Fraction(self.prec - self.val, self.den))
        result = None
        base = self
        while True:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n == 0:
                return result
            base = base * base

    __pow__ = pow

    def invert(self) -> "QSeries":
        """Multiplicative inverse; the leading coefficient must be known."""
        if not self.coeffs:
            raise NotInvertible("leading coefficient unknown (zero so far)")
        c = self.coeffs
        n = len(c)
        u0 = Fraction(1) / c[0]
        u = [u0] + [0] * (n - 1)
        for j in range(1, n):
            s = 0
            for i in range(1, min(j, len(c) - 1) + 1):
                ci = c[i]
                if ci != 0:
                    s += ci * u[j - i]
            u[j] = -u0 * s
        return QSeries.build(self.den, -self.val, u, self.prec - 2 * self.val)

    def substitute_power(self, m: int) -> "QSeries":
        """Replace q by q^m (m >= 1): exponents scale by m."""
        if not isinstance(m, int) or m < 1:
            raise ValueError("substitution power must be a positive integer")
        if m == 1:
            return self
        n = len(self.coeffs)
        cs = [0] * (n * m)
        for i, c in enumerate(self.coeffs):
            cs[i * m] = c
        return QSeries.build(self.den, self.val * m, cs, self.prec * m)

    def half_twist(self) -> "QSeries":
        """Send q^(1/2) to -q^(1/2): negate coefficients at odd numerators.

        Integer-exponent series are unchanged."""
        if self.den == 1:
            return self
        if self.den != 2:
            raise UnsupportedTwist(f"exponent denominator {self.den} does not divide 2")
        cs = [(-c if (self.val + i) % 2 else c) for i, c in enumerate(self.coeffs)]
        return QSeries.build(self.den, self.val, cs, self.prec)

    def truncate(self, bound) -> "QSeries":
        """Forget everything at exponents >= bound (no-op if already shorter)."""
        b = _as_fraction(bound)
        p = math.ceil(b * self.den)
        if p >= self.prec:
            return self
        if p <= self.val:
            return QSeries.build(self.den, p, (), p)
        return QSeries.build(self.den, self.val, self.coeffs[: p - self.val], p)

    def shift(self, s) -> "QSeries":
        """Multiply by q^s for an exact rational s with denominator 1 or 2."""
        s = _as_fraction(s)
        if s.denominator not in (1, 2):
            raise FractionalExponent(f"shift exponent {s} not in (1/2)Z")
        den = self.den if s.denominator == 1 else 2
        a = self._rescale(den)
        d = int(s * den)
        return QSeries.build(den, a.val + d, a.coeffs, a.prec + d)

    # -- rendering ----------------------------------------------------------

    def to_text(self) -> str:
        """Human form, e.g. ``1 + 6q + 18q^2 + 24q^3 + 42q^4 + O(q^5)``.

        Zero coefficients are skipped; fractional data is parenthesized:
        ``(9/2)q^4``, ``q^(5/2)``."""
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = Fraction(self.val + i, self.den)
            parts.append((c, e))
        tail = f"O(q^{_fmt_exp(self.bound)})"
        if not parts:
            return tail
        out = []
        for k, (c, e) in enumerate(parts):
            neg = c < 0
            body = _fmt_term(abs(Fraction(c)), e)
            if k == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        out.append("+ " + tail)
        return " ".join(out)

    def coefficient_pairs(self):
        """All stored coefficients from the valuation up to the bound, as
        (numerator, denominator) pairs of ints (for JSON payloads)."""
        pairs = []
        for c in self.coeffs:
            f = Fraction(c)
            pairs.append((f.numerator, f.denominator))
        return pairs

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"QSeries[{self.to_text()}]"


def _fmt_exp(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e})"


def _fmt_term(c: Fraction, e: Fraction) -> str:
    if e == 0:
        return str(c) if c.denominator == 1 else f"{c}"
    if e == 1:
        q = "q"
    else:
        q = f"q^{_fmt_exp(e)}"
    if c == 1:
        return q
    if c.denominator == 1:
        return f"{c.numerator}{q}"
    return f"({c}){q}"


# -- constructors ------------------------------------------------------------


def monomial(coeff, p, q=1, prec=None) -> QSeries:
    """c * q^(p/q) + O(q^prec).  prec is an exponent bound (int or rational)
    and must exceed p/q."""
    if prec is None:
        raise TypeError("monomial requires a precision bound")
    e = Fraction(p, q)
    if e.denominator not in (1, 2):
        raise FractionalExponent(f"exponent {e} not in (1/2)Z")
    den = e.denominator
    b = _as_fraction(prec)
    pn = math.ceil(b * den)
    vn = int(e * den)
    if pn <= vn:
        raise InvalidPrecision(f"bound {b} does not exceed exponent {e}")
    c = _norm_coeff(_as_fraction(coeff))
    if c == 0:
        return QSeries.build(den, pn, (), pn)
    return QSeries.build(den, vn, [c] + [0] * (pn - vn - 1), pn)


def zero_series(prec) -> QSeries:
    """The zero-so-far series at an integer-grid bound."""
    b = _as_fraction(prec)
    p = math.ceil(b)
    if p < 0:
        raise InvalidPrecision(f"negative bound {prec}")
    return QSeries(1, p, (), p)


def one_series(prec) -> QSeries:
    return monomial(1, 0, 1, prec)


# -- arithmetic generating series --------------------------------------------


@lru_cache(maxsize=None)
def sigma_series(k: int, m: int, prec: int) -> QSeries:
    """Sum over n >= 1 of sigma_k(n) q^(m n), truncated below prec.

    sigma_k(n) is the sum of k-th powers of the positive divisors of n,
    accumulated by a divisor sieve."""
    if k < 0 or m < 1 or prec < 0:
        raise ValueError("sigma_series needs k >= 0, m >= 1, prec >= 0")
    top = (prec - 1) // m if prec > m else 0
    if top < 1:
        return zero_series(prec)
    sig = [0] * (top + 1)
    for d in range(1, top + 1):
        dk = d**k
        for j in range(d, top + 1, d):
            sig[j] += dk
    out = [0] * (prec - m)
    for n in range(1, top + 1):
        out[m * n - m] = sig[n]
    return QSeries.build(1, m, out, prec)


def _lambert_acc(arr, den: int, c: Fraction, eps: int, w) -> None:
    """Accumulate w * (-4) * sum_{d>=1} d eps^d q^(c d) into arr, whose slot
    k holds the coefficient of q^(k/den)."""
    step = int(c * den)
    assert step > 0
    top = len(arr)
    k = step
    d = 1
    while k < top:
        t = -4 * d * w
        if eps == -1 and (d & 1):
            t = -t
        arr[k] += t
        d += 1
        k += step


@lru_cache(maxsize=None)
def inv_sin2(c, b, prec) -> QSeries:
    """Lambert-type expansion of 1/sin^2(pi(c tau + b)) up to a factor:
    for c > 0 this is -4 sum_{d>=1} d eps^d q^(c d) with eps = e^(2 pi i b),
    extended evenly to c < 0; for c == 0 it is the constant 1 when b = 1/2
    and a pole when b = 0.

    c is a rational with denominator dividing 2; b is 0 or 1/2."""
    c = _as_fraction(c)
    b = _as_fraction(b)
    if b not in (0, HALF):
        raise ValueError(f"phase must be 0 or 1/2, got {b}")
    if c < 0:
        c = -c
    if c == 0:
        if b == 0:
            raise PoleAtArgument("1/sin^2 at the lattice origin")
        return monomial(1, 0, 1, prec)
    if c.denominator not in (1, 2):
        raise FractionalExponent(f"frequency {c} not in (1/2)Z")
    den = c.denominator
    bnd = _as_fraction(prec)
    pn = math.ceil(bnd * den)
    if pn < 0:
        raise InvalidPrecision(f"negative bound {prec}")
    arr = [0] * pn
    _lambert_acc(arr, den, c, 1 if b == 0 else -1, 1)
    return QSeries.build(den, 0, arr, pn)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2), by the classical recurrence."""
    if n < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    # sum_{j=0}^{n} C(n+1, j) B_j = 0
    s = Fraction(0)
    for j in range(n):
        bj = bernoulli(j)
        if bj:
            s += math.comb(n + 1, j) * bj
    return -s / (n + 1)
