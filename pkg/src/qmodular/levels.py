"""Spaces of modular forms on Gamma0(N), 1 <= N <= 10.

Per level the module knows:

* the dimension of every even-weight space (a stored table through weight
  16, extended upward by the unit-ladder recursion d(w) = d(w - rho) + nu,
  where Delta_N has weight rho and valuation nu);
* a registry of unitary generators E(w, N, s) for the base weights w <= rho,
  each given as an expression tree over torsion-value atoms;
* how to assemble a unitary upper-triangular basis of any even-weight space
  by multiplying powers of Delta_N into the low-weight generators.

Also here: expand_expr, the precision-aware evaluator for expression trees
(it pushes the target precision down through products using valuation lower
bounds, so sparse high-valuation products cost almost nothing), and reduce,
the forward-substitution that writes a series in basis coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    EmptySpace,
    InsufficientPrecision,
    InvalidPrecision,
    InvalidRegistryEntry,
    NotInSpan,
    UnknownGenerator,
    UnknownLevel,
    UnsupportedWeight,
)
from .eta import DELTA_TABLE, EtaQuotient, delta, level_unit
from .expr import (
    DeltaRef,
    EisensteinAtom,
    EtaAtom,
    FormExpr,
    GeneratorRef,
    HalfTwist,
    PhiAtom,
    Power,
    Product,
    Scalar,
    Sum,
    WpAtom,
    WptAtom,
    make_power,
    make_product,
    make_sum,
    print_expr,
    val_lower,
    weight,
)
from .qseries import HALF, QSeries, _as_fraction, monomial
from .weierstrass import eisenstein, phi_level, wp_hat, wpt_hat

__all__ = [
    "FormExpr",
    "Scalar",
    "GeneratorRef",
    "DeltaRef",
    "WpAtom",
    "WptAtom",
    "EtaAtom",
    "EisensteinAtom",
    "PhiAtom",
    "Sum",
    "Product",
    "Power",
    "HalfTwist",
    "make_sum",
    "make_product",
    "make_power",
    "print_expr",
    "weight",
    "val_lower",
    "dimension",
    "generator",
    "basis_skeleton",
    "basis",
    "BasisElement",
    "BasisSet",
    "expand_expr",
    "reduce",
]


# ---------------------------------------------------------------------------
# dimensions
# ---------------------------------------------------------------------------

# dim M_{2k}(Gamma0(N)) for 2k = 2, 4, ..., 16; everything above follows
# from d(w) = d(w - rho) + nu.
_DIM_ROWS = {
    1: (0, 1, 1, 1, 1, 2, 1, 2),
    2: (1, 2, 2, 3, 3, 4, 4, 5),
    3: (1, 2, 3, 3, 4, 5, 5, 6),
    4: (2, 3, 4, 5, 6, 7, 8, 9),
    5: (1, 3, 3, 5, 5, 7, 7, 9),
    6: (3, 5, 7, 9, 11, 13, 15, 17),
    7: (1, 3, 5, 5, 7, 9, 9, 11),
    8: (3, 5, 7, 9, 11, 13, 15, 17),
    9: (3, 5, 7, 9, 11, 13, 15, 17),
    10: (3, 7, 9, 13, 15, 19, 21, 25),
}


def _check_level(level: int) -> None:
    if level not in _DIM_ROWS:
        raise UnknownLevel(f"level must be in 1..10, got {level}")


def _check_weight(wt: int) -> None:
    if not isinstance(wt, int) or wt < 2 or wt % 2:
        raise UnsupportedWeight(f"weight must be an even integer >= 2, got {wt}")


def dimension(level: int, wt: int) -> int:
    """dim M_wt(Gamma0(level)) for even wt >= 2."""
    _check_level(level)
    _check_weight(wt)
    if wt <= 16:
        return _DIM_ROWS[level][(wt - 2) // 2]
    unit = level_unit(level)
    steps = -((16 - wt) // unit.rho)  # ceil((wt-16)/rho)
    base = wt - steps * unit.rho
    assert 2 <= base <= 16 and base % 2 == 0
    return _DIM_ROWS[level][(base - 2) // 2] + steps * unit.nu


# ---------------------------------------------------------------------------
# generator registry (base weights w <= rho, levels 2..10)
# ---------------------------------------------------------------------------


def _wp(a, b, m) -> WpAtom:
    return WpAtom(Fraction(a), Fraction(b), m)


def _sq_plus_cross(x: FormExpr, y: FormExpr) -> Sum:
    """x^2 + y^2 + x*y."""
    return Sum([(1, Power(x, 2)), (1, Power(y, 2)), (1, Product((x, y)))])


def _build_registry():
    reg = {}

    # N = 2
    e220 = Sum([(-3, _wp(1, 0, 2))])
    reg[(2, 2)] = (e220,)
    reg[(2, 4)] = (Power(GeneratorRef(2, 2, 0), 2), DeltaRef(2))

    # N = 3
    e230 = Sum([(-3, _wp(1, 0, 3))])
    e431 = Sum(
        [
            (Fraction(3, 8), Power(_wp(1, 0, 3), 2)),
            (Fraction(-1, 8), Power(_wp(0, HALF, 3), 2)),
            (Fraction(-1, 8), Power(_wp(Fraction(3, 2), 0, 3), 2)),
            (Fraction(-1, 8), Product((_wp(0, HALF, 3), _wp(Fraction(3, 2), 0, 3)))),
        ]
    )
    reg[(3, 2)] = (e230,)
    reg[(3, 4)] = (Power(GeneratorRef(3, 2, 0), 2), e431)
    reg[(3, 6)] = (
        Power(GeneratorRef(3, 2, 0), 3),
        Product((GeneratorRef(3, 2, 0), GeneratorRef(3, 4, 1))),
        DeltaRef(3),
    )

    # N = 4
    reg[(4, 2)] = (WptAtom(1, 0, 2), DeltaRef(4))

    # N = 5
    e250 = Sum([(Fraction(-3, 4), _wp(k, 0, 5)) for k in range(1, 5)])
    e451 = Sum(
        [
            (
                Fraction(9, 48),
                Power(Sum([(1, _wp(1, 0, 5)), (1, _wp(2, 0, 5))]), 2),
            ),
            (
                Fraction(-12, 48),
                _sq_plus_cross(_wp(0, HALF, 5), _wp(Fraction(5, 2), 0, 5)),
            ),
        ]
    )
    reg[(5, 2)] = (e250,)
    reg[(5, 4)] = (Power(GeneratorRef(5, 2, 0), 2), e451, DeltaRef(5))

    # N = 6
    reg[(6, 2)] = (
        Sum([(-3, _wp(1, 0, 2))]),
        Sum([(Fraction(-1, 4), _wp(1, 0, 2)), (Fraction(1, 4), _wp(1, 0, 3))]),
        DeltaRef(6),
    )

    # N = 7
    w1, w2, w3 = _wp(1, 0, 7), _wp(2, 0, 7), _wp(3, 0, 7)
    sum7 = Sum([(1, w1), (1, w2), (1, w3)])
    e270 = Sum([(-1, w1), (-1, w2), (-1, w3)])
    e471 = Sum(
        [
            (Fraction(1, 8), Power(sum7, 2)),
            (
                Fraction(-3, 8),
                _sq_plus_cross(_wp(0, HALF, 7), _wp(Fraction(7, 2), 0, 7)),
            ),
        ]
    )
    sq7 = Sum([(1, Power(w1, 2)), (1, Power(w2, 2)), (1, Power(w3, 2))])
    e472 = Sum([(Fraction(3, 32), sq7), (Fraction(-1, 32), Power(sum7, 2))])
    h1 = Sum([(9, Power(w1, 3)), (9, Power(w2, 3)), (9, Power(w3, 3))])
    h2 = Sum(
        [
            (Fraction(9, 2), Product((Power(wi, 2), wj)))
            for wi in (w1, w2, w3)
            for wj in (w1, w2, w3)
            if wi is not wj
        ]
    )
    h3 = Sum([(27, Product((w1, w2, w3)))])
    e673 = Sum(
        [
            (Fraction(-1, 576), h1),
            (Fraction(3, 576), h2),
            (Fraction(-2, 576), h3),
        ]
    )
    reg[(7, 2)] = (e270,)
    reg[(7, 4)] = (Power(GeneratorRef(7, 2, 0), 2), e471, e472)
    reg[(7, 6)] = (
        Power(GeneratorRef(7, 2, 0), 3),
        Product((GeneratorRef(7, 2, 0), GeneratorRef(7, 4, 1))),
        Product((GeneratorRef(7, 2, 0), GeneratorRef(7, 4, 2))),
        e673,
        DeltaRef(7),
    )

    # N = 8 (the middle element is the level-4 unit, which also lives here)
    reg[(8, 2)] = (WptAtom(1, 0, 2), DeltaRef(4), DeltaRef(8))

    # N = 9
    reg[(9, 2)] = (
        Sum([(-3, _wp(3, 0, 9))]),
        Sum([(Fraction(-1, 4), _wp(1, 0, 3)), (Fraction(1, 4), _wp(3, 0, 9))]),
        DeltaRef(9),
    )

    # N = 10
    e2_10_0 = Sum([(-3, _wp(5, 0, 10))])
    e2_10_1 = Sum([(Fraction(-1, 8), _wp(1, 0, 2)), (Fraction(1, 8), _wp(5, 0, 10))])
    e2_10_2 = Sum(
        [
            (Fraction(1, 16), _wp(1, 0, 2)),
            (Fraction(-2, 16), _wp(1, 0, 5)),
            (Fraction(-2, 16), _wp(2, 0, 5)),
            (Fraction(3, 16), _wp(5, 0, 10)),
        ]
    )
    g0, g1, g2 = (GeneratorRef(10, 2, s) for s in range(3))
    reg[(10, 2)] = (e2_10_0, e2_10_1, e2_10_2)
    reg[(10, 4)] = (
        Power(g0, 2),
        Product((g0, g1)),
        Product((g0, g2)),
        Product((g1, g2)),
        Power(g2, 2),
        Sum([(Fraction(1, 256), Power(WptAtom(0, HALF, 5), 2))]),
        DeltaRef(10),
    )

    return reg


_REGISTRY = _build_registry()

# each base row must match the dimension table
for (_n, _w), _row in _REGISTRY.items():
    assert len(_row) == dimension(_n, _w), (_n, _w)


def _eisenstein_head(wt: int) -> FormExpr:
    """The level-1 unitary element of valuation 0 and even weight >= 4:
    a monomial in E4 and E6 picked by the parity of wt/2."""
    j = wt // 2
    assert j >= 2
    if j % 2 == 0:
        return make_power(EisensteinAtom(4, 1), j // 2)
    if j == 3:
        return EisensteinAtom(6, 1)
    return Product((make_power(EisensteinAtom(4, 1), (j - 3) // 2), EisensteinAtom(6, 1)))


def _resolve_ref(level: int, wt: int, index: int) -> FormExpr:
    """Defining expression of the registered generator E(wt, level, index)."""
    _check_level(level)
    _check_weight(wt)
    if level == 1:
        if index == 0 and wt >= 4:
            return _eisenstein_head(wt)
        if (wt, index) == (12, 1):
            return DeltaRef(1)
        raise UnknownGenerator(f"no generator E({wt},1,{index})")
    row = _REGISTRY.get((level, wt))
    if row is None or not 0 <= index < len(row):
        raise UnknownGenerator(f"no generator E({wt},{level},{index})")
    return row[index]


# ---------------------------------------------------------------------------
# expansion of expression trees
# ---------------------------------------------------------------------------


def _zero_at(bound: Fraction) -> QSeries:
    n2 = max(0, math.floor(bound * 2))
    return QSeries.build(2, n2, (), n2)


def _const_at(value, bound: Fraction) -> QSeries:
    return monomial(Fraction(value), 0, 1, max(1, math.ceil(bound)))


def _fold_eta(factors):
    """Split product factors into one merged EtaAtom (or None) plus the rest.

    Power(EtaAtom, n) folds as n copies.  Merging first is what makes
    quotients like eta(1)^24 expandable even though eta(1) alone has a
    leading exponent outside (1/2)Z."""
    pairs = []
    rest = []
    for f in factors:
        if isinstance(f, EtaAtom):
            pairs.extend(f.quotient.factors)
        elif isinstance(f, Power) and isinstance(f.base, EtaAtom):
            pairs.extend((m, e * f.exponent) for m, e in f.base.quotient.factors)
        else:
            rest.append(f)
    if not pairs:
        return None, rest
    return EtaAtom(EtaQuotient(pairs)), rest


def _expand(e: FormExpr, bound: Fraction) -> QSeries:
    # nothing below the bound: answer without recursing
    v = val_lower(e)
    if bound <= v:
        return _zero_at(bound)

    if isinstance(e, Scalar):
        return _const_at(e.value, bound)
    if isinstance(e, WpAtom):
        return wp_hat(e.a, e.b, e.m, math.ceil(bound))
    if isinstance(e, WptAtom):
        return wpt_hat(e.a, e.b, e.m, bound)
    if isinstance(e, EtaAtom):
        return e.quotient.expand(bound)
    if isinstance(e, EisensteinAtom):
        return eisenstein(e.k, e.m, bound)
    if isinstance(e, PhiAtom):
        if not 2 <= e.level <= 10:
            raise UnknownLevel(f"Phi_N needs 2 <= N <= 10, got {e.level}")
        return phi_level(e.level, bound, e.mode)
    if isinstance(e, DeltaRef):
        return delta(e.level, bound)
    if isinstance(e, GeneratorRef):
        return _expand(_resolve_ref(e.level, e.weight, e.index), bound)
    if isinstance(e, HalfTwist):
        return _expand(e.child, bound).half_twist()
    if isinstance(e, Sum):
        if not e.terms:
            return _zero_at(bound)
        acc = None
        for c, f in e.terms:
            t = _expand(f, bound).scale(c)
            acc = t if acc is None else acc + t
        return acc
    if isinstance(e, Product):
        folded, rest = _fold_eta(e.factors)
        factors = ([folded] if folded is not None else []) + rest
        if len(factors) == 1:
            return _expand(factors[0], bound)
        lows = [val_lower(f) for f in factors]
        slack = bound - sum(lows)
        acc = None
        for f, lo in zip(factors, lows):
            t = _expand(f, slack + lo)
            acc = t if acc is None else acc * t
        return acc
    if isinstance(e, Power):
        if e.exponent == 0:
            return _const_at(1, bound)
        if isinstance(e.base, EtaAtom):
            merged = EtaAtom(
                EtaQuotient(
                    [(m, x * e.exponent) for m, x in e.base.quotient.factors]
                )
            )
            return _expand(merged, bound)
        lo = val_lower(e.base)
        t = _expand(e.base, bound - (e.exponent - 1) * lo)
        return t.pow(e.exponent)
    raise TypeError(f"not a FormExpr: {e!r}")


def expand_expr(e: FormExpr, prec) -> QSeries:
    """q-expansion of the expression tree below exponent prec."""
    b = _as_fraction(prec)
    if b < 0:
        raise InvalidPrecision(f"negative bound {prec}")
    res = _expand(e, b)
    assert res.bound >= b, (res.bound, b)
    return res.truncate(b)


# ---------------------------------------------------------------------------
# generators and bases
# ---------------------------------------------------------------------------


def generator(level: int, wt: int, index: int, prec=None):
    """The registered generator as (expression, expansion), validated to be
    unitary of valuation `index` on the integer grid."""
    ex = _resolve_ref(level, wt, index)
    p = _as_fraction(prec) if prec is not None else Fraction(index + 6)
    if p <= index:
        raise InsufficientPrecision(
            f"precision {p} cannot exhibit the leading term at q^{index}"
        )
    ser = expand_expr(ex, p)
    if ser.den != 1 or ser.valuation != index or ser.leading != 1:
        raise InvalidRegistryEntry(
            f"E({wt},{level},{index}) expands with valuation {ser.valuation} "
            f"and leading coefficient {ser.leading}"
        )
    return ex, ser


def _with_delta(level: int, b: int, core: FormExpr) -> FormExpr:
    if b == 0:
        return core
    if core == DeltaRef(level):
        return make_power(DeltaRef(level), b + 1)
    d = make_power(DeltaRef(level), b)
    if isinstance(core, Product):
        return Product((d,) + core.factors)
    return Product((d, core))


def _row_element(level: int, wt: int, index: int) -> FormExpr:
    """Basis element for a base-weight row: keep structural defining forms
    (unit powers, products, eta units) as-is, name the long linear
    combinations by their registry slot."""
    ex = _resolve_ref(level, wt, index)
    return GeneratorRef(level, wt, index) if isinstance(ex, Sum) else ex


def _skeleton_level_one(wt: int):
    k = wt // 2
    q, r = divmod(k, 6)
    if r == 0:
        q, r = q - 1, 6
    top = q - 1 if r == 1 else q
    out = []
    for n in range(top + 1):
        out.append(_with_delta(1, n, _eisenstein_head(wt - 12 * n)))
    if r == 6:
        out.append(make_power(DeltaRef(1), q + 1))
    return out


def basis_skeleton(level: int, wt: int):
    """The expressions of the unitary upper-triangular basis, ordered by
    claimed valuation 0, 1, ..., dim-1 (no expansion happens here)."""
    d = dimension(level, wt)
    if d == 0:
        raise EmptySpace(f"M_{wt}(Gamma0({level})) is zero-dimensional")
    if level == 1:
        out = _skeleton_level_one(wt)
        assert len(out) == d
        return out
    unit = level_unit(level)
    rho, nu = unit.rho, unit.nu
    out = []
    b = 0
    ww = wt
    g = GeneratorRef(level, 2, 0)
    while ww > rho:
        heads = [make_power(g, ww // 2)]
        for s in range(1, nu):
            heads.append(
                make_product(
                    [GeneratorRef(level, rho, s), make_power(g, (ww - rho) // 2)]
                )
            )
        for h in heads:
            out.append(_with_delta(level, b, h))
        b += 1
        ww -= rho
    for s in range(dimension(level, ww)):
        out.append(_with_delta(level, b, _row_element(level, ww, s)))
    assert len(out) == d
    return out


@dataclass(frozen=True)
class BasisElement:
    index: int  # position = valuation
    label: str
    expr: FormExpr
    series: QSeries


@dataclass(frozen=True)
class BasisSet:
    level: int
    weight: int
    precision: int
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def to_json(self):
        els = []
        for el in self.elements:
            coeffs = []
            for x in range(el.index, self.precision):
                c = Fraction(el.series.coefficient(x))
                coeffs.append([str(c.numerator), str(c.denominator)])
            els.append(
                {
                    "s": el.index,
                    "valuation": el.index,
                    "label": el.label,
                    "coefficients": coeffs,
                }
            )
        return {
            "level": self.level,
            "weight": self.weight,
            "precision": self.precision,
            "elements": els,
        }


def basis(level: int, wt: int, prec: int) -> BasisSet:
    """Unitary upper-triangular basis of M_wt(Gamma0(level)), each element
    expanded below exponent prec (prec >= dimension so every pivot shows)."""
    d = dimension(level, wt)
    if d == 0:
        raise EmptySpace(f"M_{wt}(Gamma0({level})) is zero-dimensional")
    p = int(prec)
    if p < d:
        raise InsufficientPrecision(
            f"precision {p} below the dimension {d} of M_{wt}(Gamma0({level}))"
        )
    skel = basis_skeleton(level, wt)
    elements = []
    for s, ex in enumerate(skel):
        ser = expand_expr(ex, p)
        if ser.den != 1 or ser.valuation != s or ser.leading != 1:
            raise InvalidRegistryEntry(
                f"basis element {print_expr(ex)} of M_{wt}(Gamma0({level})) "
                f"expands with valuation {ser.valuation}, leading {ser.leading}"
            )
        elements.append(BasisElement(s, print_expr(ex), ex, ser))
    return BasisSet(level, wt, p, tuple(elements))


# ---------------------------------------------------------------------------
# reduction to coordinates
# ---------------------------------------------------------------------------


def reduce(f: QSeries, level: int, wt: int, prec=None):
    """Coordinates of f in the unitary upper-triangular basis, by forward
    substitution on the pivots 0..dim-1.

    The residual must vanish everywhere below min(prec, f.bound); the first
    surviving exponent otherwise lands in the NotInSpan error.  f must carry
    at least dim + 5 known coefficients so that membership is actually
    tested, not merely interpolated."""
    d = dimension(level, wt)
    if d == 0:
        raise EmptySpace(f"M_{wt}(Gamma0({level})) is zero-dimensional")
    if f.bound < d + 5:
        raise InsufficientPrecision(
            f"series known below q^{f.bound} but dimension {d} needs at least q^{d + 5}"
        )
    depth = f.bound if prec is None else min(_as_fraction(prec), f.bound)
    if depth < d:
        raise InsufficientPrecision(
            f"comparison depth {depth} below the dimension {d}"
        )
    b = basis(level, wt, math.ceil(depth))
    residual = f.truncate(depth)
    coords = []
    for el in b.elements:
        c = Fraction(residual.coefficient(el.index))
        coords.append(c)
        if c:
            residual = residual - el.series.scale(c).truncate(depth)
    for i, cc in enumerate(residual.coeffs):
        if cc:
            raise NotInSpan(Fraction(residual.val + i, residual.den))
    return coords
