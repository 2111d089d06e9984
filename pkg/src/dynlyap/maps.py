"""Degree-d rational self-maps of P^1 as homogeneous lifts.

A lift F = (F0, F1) is stored by its coefficient rows a, b with
F0(p0, p1) = sum_j a[j] p0^(d-j) p1^j (a[0] multiplies p0^d), so the affine
chart is z = p0/p1 and f(z) = F0(z,1)/F1(z,1).  Iteration composes lifts
exactly; infinity bookkeeping therefore stays uniform across the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import (
    FieldElem,
    Poly,
    RatFunc,
    bareiss_det,
    field_one,
    field_zero,
    poly_gcd,
    poly_exact_div,
)
from .budget import Budget, default_budget
from .errors import ArchimedeanPlace, DegenerateMap
from .places import Place, LocalLogValue, elem_log_abs

BASE_Q = "Q"
BASE_QT = "Q(t)"


def _coerce_field(values):
    """Promote a mixed Fraction/RatFunc/int row to a single field."""
    vals = [Fraction(v) if isinstance(v, int) else v for v in values]
    if any(isinstance(v, RatFunc) for v in vals):
        vals = [v if isinstance(v, RatFunc) else RatFunc.const(v) for v in vals]
        return vals, BASE_QT
    return vals, BASE_Q


@dataclass(frozen=True)
class HomLift:
    """Homogeneous lift of a degree-d map; immutable."""

    d: int
    a: tuple
    b: tuple

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("lift degree must be >= 1")
        if len(self.a) != self.d + 1 or len(self.b) != self.d + 1:
            raise ValueError("coefficient rows must have length d+1")
        if not any(self.a) and not any(self.b):
            raise ValueError("zero lift")

    # -- conversions -----------------------------------------------------------

    def poly0(self) -> Poly:
        """F0(z, 1) as a polynomial in z (ascending coefficients)."""
        return Poly(tuple(reversed(self.a)))

    def poly1(self) -> Poly:
        return Poly(tuple(reversed(self.b)))

    def one(self) -> FieldElem:
        for c in list(self.a) + list(self.b):
            if c:
                return field_one(c)
        raise ValueError("zero lift")

    def evaluate(self, x: FieldElem, y: FieldElem):
        """(F0(x,y), F1(x,y))."""
        xa = [x * 0 + 1]
        ya = [y * 0 + 1]
        for _ in range(self.d):
            xa.append(xa[-1] * x)
            ya.append(ya[-1] * y)
        v0 = x * 0
        v1 = x * 0
        for j in range(self.d + 1):
            m = xa[self.d - j] * ya[j]
            v0 = v0 + self.a[j] * m
            v1 = v1 + self.b[j] * m
        return v0, v1

    def scale(self, alpha: FieldElem) -> "HomLift":
        return HomLift(self.d, tuple(c * alpha for c in self.a), tuple(c * alpha for c in self.b))

    def coefficient_bits(self) -> int:
        bits = 0
        for c in list(self.a) + list(self.b):
            if isinstance(c, Fraction):
                bits += c.numerator.bit_length() + c.denominator.bit_length()
            elif isinstance(c, RatFunc):
                for p in (c.num, c.den):
                    for q in p.coeffs:
                        bits += q.numerator.bit_length() + q.denominator.bit_length()
        return bits


def resultant_of_lift(lift: HomLift) -> FieldElem:
    """Res(F): the 2d x 2d determinant of the two shifted coefficient rows."""
    d = lift.d
    zero = field_zero(lift.one())
    rows = []
    for i in range(d):
        row = [zero] * (2 * d)
        for j, c in enumerate(lift.a):
            row[i + j] = c
        rows.append(row)
    for i in range(d):
        row = [zero] * (2 * d)
        for j, c in enumerate(lift.b):
            row[i + j] = c
        rows.append(row)
    return bareiss_det(rows)


@dataclass
class RationalMap:
    """A validated degree-d rational map with its chosen lift."""

    lift: HomLift
    base: str
    resultant: FieldElem
    budget: Budget = field(default_factory=default_budget)
    _iterates: dict = field(default_factory=dict, repr=False)

    @property
    def d(self) -> int:
        return self.lift.d

    def iterate_lift_cached(self, n: int) -> HomLift:
        if n not in self._iterates:
            self._iterates[n] = iterate_lift(self.lift, n, self.budget)
        return self._iterates[n]


def new_map(d: int, a_coeffs, b_coeffs, budget: Optional[Budget] = None) -> RationalMap:
    """Validate and build a RationalMap; DegenerateMap if Res(F) = 0."""
    if d < 2:
        raise ValueError("map degree must be >= 2")
    coeffs, base = _coerce_field(list(a_coeffs) + list(b_coeffs))
    lift = HomLift(d, tuple(coeffs[: d + 1]), tuple(coeffs[d + 1 :]))
    res = resultant_of_lift(lift)
    if not res:
        raise DegenerateMap(f"Res(F) = 0: the lift defines a map of degree < {d}")
    return RationalMap(lift, base, res, budget or default_budget())


def map_from_affine(num: Poly, den: Poly, budget: Optional[Budget] = None) -> RationalMap:
    """Map from affine f(z) = num/den; degree = max(deg num, deg den)."""
    d = max(len(num.coeffs), len(den.coeffs)) - 1
    one = (num.coeffs or den.coeffs)[0] * 0 + 1
    zero = one * 0
    a = list(num.coeffs) + [zero] * (d + 1 - len(num.coeffs))
    b = list(den.coeffs) + [zero] * (d + 1 - len(den.coeffs))
    return new_map(d, tuple(reversed(a)), tuple(reversed(b)), budget)


def iterate_lift(lift: HomLift, n: int, budget: Optional[Budget] = None) -> HomLift:
    """Exact homogeneous lift of f^n (degree d^n) by repeated composition."""
    if n < 1:
        raise ValueError("iterate count must be >= 1")
    budget = budget or default_budget()
    budget.check_period(lift.d, n)
    cur = lift
    for _ in range(n - 1):
        cur = _compose(lift, cur)
        budget.check_bits(cur.coefficient_bits(), "iterated lift")
    return cur


def _compose(outer: HomLift, inner: HomLift) -> HomLift:
    """outer o inner as homogeneous pairs, via univariate convolution."""
    g0 = Poly(tuple(reversed(inner.a)))
    g1 = Poly(tuple(reversed(inner.b)))
    d = outer.d
    deg_out = d * (len(inner.a) - 1)
    pow1 = [None] * (d + 1)
    pow1[0] = Poly.const(outer.one())
    for j in range(1, d + 1):
        pow1[j] = pow1[j - 1] * g1
    comp0 = Poly()
    comp1 = Poly()
    for j in range(d + 1):  # Horner in g0 with precomputed g1 powers
        comp0 = comp0 * g0 + Poly.const(outer.a[j]) * pow1[j]
        comp1 = comp1 * g0 + Poly.const(outer.b[j]) * pow1[j]
    zero = field_zero(outer.one())
    c0 = list(comp0.coeffs) + [zero] * (deg_out + 1 - len(comp0.coeffs))
    c1 = list(comp1.coeffs) + [zero] * (deg_out + 1 - len(comp1.coeffs))
    return HomLift(deg_out, tuple(reversed(c0)), tuple(reversed(c1)))


# ---------------------------------------------------------------------------
# divisors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedDivisor:
    n: int
    affine_poly: Poly  # P_n(z) = F0^(n)(z,1) - z F1^(n)(z,1)
    mult_infinity: int

    def total_degree(self) -> int:
        return (len(self.affine_poly.coeffs) - 1) + self.mult_infinity


def fixed_point_divisor(fmap: RationalMap, n: int) -> FixedDivisor:
    lift_n = fmap.iterate_lift_cached(n)
    p = lift_n.poly0() - lift_n.poly1().shift(1)
    if p.is_zero():
        raise DegenerateMap("f^n is the identity; not a degree >= 2 map")
    mult_inf = fmap.d**n + 1 - (len(p.coeffs) - 1)
    return FixedDivisor(n, p, mult_inf)


@dataclass(frozen=True)
class CriticalDivisor:
    affine_poly: Poly  # det DF(z, 1)
    mult_infinity: int
    leading_coeff: FieldElem  # C_F

    def total_degree(self) -> int:
        return (len(self.affine_poly.coeffs) - 1) + self.mult_infinity


def critical_divisor(lift: HomLift) -> CriticalDivisor:
    """Jacobian determinant of the lift, as a divisor of degree 2d-2."""
    d = lift.d
    # partials of sum c_j p0^(d-j) p1^j, kept as z-polynomials (ascending)
    def partials(row):
        d0 = [row[j] * (d - j) for j in range(d)]          # d F/d p0: deg d-1 form
        d1 = [row[j + 1] * (j + 1) for j in range(d)]      # d F/d p1
        return Poly(tuple(reversed(d0))), Poly(tuple(reversed(d1)))

    a0, a1 = partials(lift.a)
    b0, b1 = partials(lift.b)
    det = a0 * b1 - a1 * b0
    if det.is_zero():
        raise DegenerateMap("vanishing Jacobian: degenerate lift")
    mult_inf = (2 * d - 2) - (len(det.coeffs) - 1)
    return CriticalDivisor(det, mult_inf, det.lc())


def multiplier_rational_function(fmap: RationalMap, n: int) -> tuple[Poly, Poly]:
    """(f^n)'(z) = A/B in lowest terms, denominator monic."""
    lift_n = fmap.iterate_lift_cached(n)
    num = lift_n.poly0()
    den = lift_n.poly1()
    w = num.derivative() * den - num * den.derivative()
    v = den * den
    if w.is_zero():
        return Poly(), Poly.const(v.lc() / v.lc())
    g = poly_gcd(w, v)
    if g.degree > 0:
        w = poly_exact_div(w, g)
        v = poly_exact_div(v, g)
    top = v.lc()
    return w.scale(1 / top), v.scale(1 / top)


# ---------------------------------------------------------------------------
# conjugation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mobius2:
    """Invertible 2x2 matrix acting on P^1 by fractional-linear maps."""

    m00: FieldElem
    m01: FieldElem
    m10: FieldElem
    m11: FieldElem

    def __post_init__(self):
        if not (self.m00 * self.m11 - self.m01 * self.m10):
            raise ValueError("Mobius matrix must be invertible")

    def adjugate(self) -> "Mobius2":
        return Mobius2(self.m11, -self.m01, -self.m10, self.m00)

    def apply(self, x, y):
        return self.m00 * x + self.m01 * y, self.m10 * x + self.m11 * y


def conjugate(fmap: RationalMap, m: Mobius2) -> RationalMap:
    """Exact lift of M o f o M^{-1} (adjugate used for the inverse)."""
    adj = m.adjugate()
    d = fmap.d
    one = fmap.lift.one()
    # linear forms u = adj . (Z, W)
    u = Poly((adj.m01 * one, adj.m00 * one))  # ascending in z: u(z,1) = m00 z + m01
    v = Poly((adj.m11 * one, adj.m10 * one))
    pow_u = [Poly.const(one)]
    pow_v = [Poly.const(one)]
    for _ in range(d):
        pow_u.append(pow_u[-1] * u)
        pow_v.append(pow_v[-1] * v)
    f0 = Poly()
    f1 = Poly()
    for j in range(d + 1):
        term = pow_u[d - j] * pow_v[j]
        f0 = f0 + term.scale(fmap.lift.a[j])
        f1 = f1 + term.scale(fmap.lift.b[j])
    g0 = f0.scale(m.m00) + f1.scale(m.m01)
    g1 = f0.scale(m.m10) + f1.scale(m.m11)
    zero = field_zero(one)
    c0 = list(g0.coeffs) + [zero] * (d + 1 - len(g0.coeffs))
    c1 = list(g1.coeffs) + [zero] * (d + 1 - len(g1.coeffs))
    return new_map(d, tuple(reversed(c0)), tuple(reversed(c1)), fmap.budget)


# ---------------------------------------------------------------------------
# minimal lifts and local resultants
# ---------------------------------------------------------------------------

def minimal_lift(lift: HomLift, v: Place) -> HomLift:
    """Scale the lift by a uniformizer power so max_v |coefficient| = 1."""
    if v.is_archimedean():
        raise ArchimedeanPlace("minimal lifts are defined at non-archimedean places")
    vals = [v.valuation(c) for c in list(lift.a) + list(lift.b) if c]
    m = min(vals)
    if m == 0:
        return lift
    return lift.scale(v.uniformizer_power(-m, lift.one()))


def abs_resultant(fmap: RationalMap, v: Place) -> LocalLogValue:
    """log|Res(f)|_v for a v-minimal lift; always <= 0."""
    if v.is_archimedean():
        raise ArchimedeanPlace("Res(f) is used here only at non-archimedean places")
    fmin = minimal_lift(fmap.lift, v)
    res = resultant_of_lift(fmin)
    val = elem_log_abs(res, v)
    return val


# ---------------------------------------------------------------------------
# projective points over the base field
# ---------------------------------------------------------------------------

def normalize_point(x: FieldElem, y: FieldElem):
    """Canonical representative: (z, 1) for finite points, (1, 0) for infinity."""
    if y:
        return (x / y, field_one(y))
    if not x:
        raise ValueError("(0 : 0) is not a projective point")
    return (field_one(x), field_zero(x))


def apply_map(fmap: RationalMap, point) -> tuple:
    x, y = point
    v0, v1 = fmap.lift.evaluate(x, y)
    return normalize_point(v0, v1)


def orbit(fmap: RationalMap, point, length: int) -> list:
    pts = [normalize_point(*point)]
    for _ in range(length):
        pts.append(apply_map(fmap, pts[-1]))
    return pts


def cycle_multiplier(fmap: RationalMap, point, q: int) -> FieldElem:
    """Multiplier of f^q along the exact q-cycle through ``point``.

    The whole map is conjugated so the cycle avoids infinity, then the
    chain rule is applied in the affine chart; exact in the base field.
    """
    pts = orbit(fmap, point, q)
    if pts[q] != pts[0]:
        raise ValueError("point is not q-periodic")
    cycle = pts[:q]
    one = field_one(fmap.resultant)
    if any(not y for _, y in cycle):  # infinity on the cycle: move it away
        shift = 0
        while any(y and x / y == shift * one for x, y in cycle):
            shift += 1
        m = Mobius2(field_zero(one), one, one, -shift * one)  # z -> 1/(z - shift)
        g = conjugate(fmap, m)
        new_pts = [normalize_point(*m.apply(x, y)) for x, y in cycle]
        return cycle_multiplier(g, new_pts[0], q)
    num, den = multiplier_rational_function(fmap, 1)
    lam = one
    for x, y in cycle:
        z = x / y
        dval = den.evaluate(z)
        if not dval:
            raise ZeroDivisionError("derivative pole on a finite cycle")
        lam = lam * num.evaluate(z) / dval
    return lam
