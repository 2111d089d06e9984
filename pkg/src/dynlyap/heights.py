"""Naive, canonical and critical heights, and per-place dynamical Green
functions.

Non-archimedean Green values are computed with capped-precision local
arithmetic (residues mod p^M, or truncated power series at function-field
places).  Two exact short-circuits apply: good reduction gives 0
immediately, and once an orbit provably escapes into a superattracting
region at infinity the remaining tail is an exact geometric series.  When
neither fires the value is a float with a rigorous error bound from the
telescoping estimate sup|T_F| / (d^N (d-1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import (
    Poly,
    RatFunc,
    factor_int,
    field_one,
    rational_roots,
)
from .budget import Budget, default_budget
from .errors import IrrationalCriticalPoint, ResourceLimit
from .maps import (
    HomLift,
    RationalMap,
    apply_map,
    critical_divisor,
    minimal_lift,
    normalize_point,
    resultant_of_lift,
)
from .places import Place, LocalLogValue

_PREPERIOD_CAP = 64


@dataclass(frozen=True)
class HeightValue:
    value: float
    err: float
    exact: Optional[Fraction] = None

    @staticmethod
    def from_exact(q) -> "HeightValue":
        q = Fraction(q)
        return HeightValue(float(q), 0.0, q)

    def plus(self, other: "HeightValue") -> "HeightValue":
        if self.exact is not None and other.exact is not None:
            return HeightValue.from_exact(self.exact + other.exact)
        return HeightValue(self.value + other.value, self.err + other.err)

    def scaled(self, s) -> "HeightValue":
        s = Fraction(s)
        if self.exact is not None:
            return HeightValue.from_exact(self.exact * s)
        return HeightValue(self.value * float(s), self.err * abs(float(s)))


_ZERO_HEIGHT = HeightValue(0.0, 0.0, Fraction(0))


# ---------------------------------------------------------------------------
# naive heights
# ---------------------------------------------------------------------------

def _coprime_int_pair(coords):
    """Scale rational projective coordinates to coprime integers."""
    fracs = [Fraction(c) if not isinstance(c, Fraction) else c for c in coords]
    den = 1
    for c in fracs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [c.numerator * (den // c.denominator) for c in fracs]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    return [c // g for c in ints]


def _coprime_poly_coords(coords):
    """Clear Q(t) projective coordinates to coprime polynomials."""
    from .multipliers import _normalize_proj

    return [c.num for c in _normalize_proj(coords)]


def naive_height(coords) -> HeightValue:
    """Weil height of a projective point over Q or Q(t)."""
    vals = list(coords)
    if not any(vals):
        raise ValueError("(0 : ... : 0) is not a projective point")
    if any(isinstance(c, RatFunc) for c in vals):
        polys = _coprime_poly_coords(
            [c if isinstance(c, RatFunc) else RatFunc.const(c) for c in vals]
        )
        deg = max(p.degree for p in polys if not p.is_zero())
        return HeightValue.from_exact(deg)
    ints = _coprime_int_pair(vals)
    m = max(abs(c) for c in ints)
    if m == 1:
        return _ZERO_HEIGHT
    val = math.log(m)
    return HeightValue(val, abs(val) * 4e-16)


def map_height(fmap: RationalMap) -> HeightValue:
    """Height of the coefficient point of the lift in P^(2d+1)."""
    return naive_height(list(fmap.lift.a) + list(fmap.lift.b))


# ---------------------------------------------------------------------------
# local Green functions
# ---------------------------------------------------------------------------

def local_green(lift: HomLift, point, v: Place, tol: float = 1e-9,
                budget: Optional[Budget] = None) -> LocalLogValue:
    """g_{F,v} at a base-field point of P^1; exact when provably so."""
    budget = budget or default_budget()
    pt = normalize_point(*point) if isinstance(point, tuple) else normalize_point(point, field_one(lift.one()))
    if v.is_archimedean():
        return _arch_green(lift, pt, tol)
    return _nonarch_green(lift, pt, v, tol, budget)


def _nonarch_green(lift: HomLift, pt, v: Place, tol: float, budget: Budget) -> LocalLogValue:
    d = lift.d
    one = lift.one()
    mcoef = min(v.valuation(c) for c in list(lift.a) + list(lift.b) if c)
    fmin = minimal_lift(lift, v)
    # g_F = g_Fmin - mcoef * log(pi^-1) / (d-1)
    corr = Fraction(-mcoef, d - 1)
    res_val = v.valuation(resultant_of_lift(fmin))
    base = v.p if v.kind == "prime" else None
    if res_val == 0:
        return LocalLogValue.exact(corr, base if corr else None)
    sup_t = Fraction(res_val)  # sup |T_Fmin| <= |log|Res||_v in log-pi units
    # iterations for the telescoping bound sup_t/(d^N (d-1)) <= tol
    unit_log = math.log(v.p) if v.kind == "prime" else 1.0
    n_steps = 1
    while float(sup_t) * unit_log / (d**n_steps * (d - 1)) > tol:
        n_steps += 1
        if n_steps > 4000:
            raise ResourceLimit("green tolerance unreachable")
    va = [v.valuation(c) if c else None for c in fmin.a]
    vb = [v.valuation(c) if c else None for c in fmin.b]
    x, y = pt
    vals = [v.valuation(c) for c in (x, y) if c]
    shift = min(vals)
    if shift:
        scale = v.uniformizer_power(-shift, one)
        x, y = x * scale, y * scale
    tail_float = float(sup_t) * unit_log / (d**n_steps * (d - 1))
    prec = (int(res_val) + 1) * (n_steps + 2) + 48
    for _ in range(8):
        out = _nonarch_iterate(fmin, (x, y), v, d, n_steps, prec, va, vb, corr,
                               base, tail_float)
        if out is not None:
            return out
        prec *= 2
        budget.check_bits(prec * 64, "local green precision")
    raise ResourceLimit("local green precision did not stabilize")


def _nonarch_iterate(fmin, pt, v, d, n_steps, prec, va, vb, corr, base, tail_float):
    ring = _LocalRing.make(v, prec)
    r0, r1 = ring.convert(pt[0]), ring.convert(pt[1])
    ledger = corr
    poly_like = not fmin.b[0]
    for j in range(n_steps):
        # exact escape: orbit captured by a superattracting infinity
        if poly_like and va[0] is not None:
            v0, v1 = ring.val(r0), ring.val(r1)
            if v0 == 0 and (v1 is None or v1 >= 1):
                e = v1 if v1 is not None else ring.eff_prec
                ok1 = all(va[0] < va[i] + i * e for i in range(1, len(va)) if va[i] is not None)
                ok2 = all(vb[i] + i * e >= va[0] + e + 1 for i in range(1, len(vb)) if vb[i] is not None)
                if ok1 and ok2:
                    total = ledger + Fraction(-va[0], d**j * (d - 1))
                    return LocalLogValue.exact(total, base if total else None)
        s0, s1 = ring.eval_pair(fmin, r0, r1)
        m0, m1 = ring.val(s0), ring.val(s1)
        if m0 is None and m1 is None:
            return None  # precision exhausted
        m = min(x for x in (m0, m1) if x is not None)
        ledger += Fraction(-m, d ** (j + 1))
        r0, r1 = ring.shift_down(s0, m), ring.shift_down(s1, m)
        ring.consume(m)
        if ring.eff_prec < 24:
            return None
    approx = LocalLogValue.exact(ledger, base if ledger else None)
    x, err = approx.to_float()
    return LocalLogValue.from_float(x, err + tail_float)


def _arch_green(lift: HomLift, pt, tol: float) -> LocalLogValue:
    d = lift.d
    sup_t = _arch_sup_t_bound(lift)
    n_steps = 1
    while sup_t / (d**n_steps * (d - 1)) > tol:
        n_steps += 1
        if n_steps > 500:
            raise ResourceLimit("archimedean green tolerance unreachable")
    a = [_to_complex(c) for c in lift.a]
    b = [_to_complex(c) for c in lift.b]
    x, y = _to_complex(pt[0]), _to_complex(pt[1])
    norm = math.hypot(abs(x), abs(y))
    x, y = x / norm, y / norm
    total = 0.0
    scale = 1.0
    for j in range(n_steps):
        fx = _eval_form(a, x, y, d)
        fy = _eval_form(b, x, y, d)
        norm = math.hypot(abs(fx), abs(fy))
        total += math.log(norm) / d ** (j + 1)
        x, y = fx / norm, fy / norm
    err = sup_t / (d**n_steps * (d - 1)) + 5e-14 * (n_steps + 1)
    return LocalLogValue.from_float(total, err)


def _eval_form(coeffs, x, y, d):
    acc = 0j
    for c in coeffs:  # Horner in x; coeffs descending in x
        acc = acc * x + c * 1
    # The simple Horner above assumed y=1; redo with powers (d small).
    acc = 0j
    yp = 1.0 + 0j
    xs = [1.0 + 0j]
    for _ in range(d):
        xs.append(xs[-1] * x)
    for j, c in enumerate(coeffs):
        acc += c * xs[d - j] * yp
        yp *= y
    return acc


def _to_complex(c):
    if isinstance(c, Fraction):
        try:
            return complex(c.numerator / c.denominator)
        except OverflowError:
            ln = math.log(abs(c.numerator)) - math.log(c.denominator)
            return complex(math.copysign(math.exp(min(ln, 700.0)), c.numerator))
    if isinstance(c, RatFunc):
        raise ValueError("archimedean evaluation needs rational input")
    return complex(c)


def _arch_sup_t_bound(lift: HomLift) -> float:
    """Rigorous bound on sup over P^1 of |T_F| at the archimedean place."""
    d = lift.d
    coeffs = [abs(_to_complex(c)) for c in list(lift.a) + list(lift.b)]
    sup_coeff = max(coeffs)
    upper = math.log(math.sqrt(2.0) * (d + 1) * sup_coeff)
    g1, g2, h1, h2 = _bezout_cofactors(lift)
    row1 = sum(abs(_to_complex(c)) for c in g1 + g2)
    row2 = sum(abs(_to_complex(c)) for c in h1 + h2)
    res = abs(_to_complex(resultant_of_lift(lift)))
    lower = math.log(res) - (2 * d - 1) / 2 * math.log(2.0) - math.log(max(row1, row2))
    return max(abs(upper), abs(lower)) + 1e-9


def _bezout_cofactors(lift: HomLift):
    """G1, G2 and H1, H2 with F0 G1 + F1 G2 = Res(F) X^(2d-1), resp. Y^(2d-1).

    Coefficient rows are returned descending in X, like the lift itself.
    """
    d = lift.d
    res = resultant_of_lift(lift)
    one = field_one(lift.one())
    size = 2 * d
    # unknowns: g1_0..g1_{d-1}, g2_0..g2_{d-1} (descending); equations:
    # coefficient of X^(2d-1-j) Y^j for j = 0..2d-1
    rows = []
    for j in range(size):
        row = [one * 0] * size
        for i in range(d + 1):
            for k in range(d):
                if i + k == j:
                    row[k] = row[k] + lift.a[i]
                    row[d + k] = row[d + k] + lift.b[i]
        rows.append(row)
    sol_g = _solve_field(rows, [res if j == 0 else res * 0 for j in range(size)])
    sol_h = _solve_field(rows, [res if j == size - 1 else res * 0 for j in range(size)])
    return (sol_g[:d], sol_g[d:], sol_h[:d], sol_h[d:])


def _solve_field(rows, rhs):
    n = len(rows)
    m = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            raise ValueError("singular cofactor system")
        m[k], m[piv] = m[piv], m[k]
        inv = 1 / m[k][k]
        for i in range(n):
            if i != k and m[i][k]:
                f = m[i][k] * inv
                for j in range(k, n + 1):
                    m[i][j] = m[i][j] - f * m[k][j]
    return [m[i][n] / m[i][i] for i in range(n)]


# ---------------------------------------------------------------------------
# capped local arithmetic
# ---------------------------------------------------------------------------

class _LocalRing:
    """Residue arithmetic at a non-archimedean place with precision cap."""

    @staticmethod
    def make(v: Place, prec: int) -> "_LocalRing":
        if v.kind == "prime":
            return _PadicRing(v.p, prec)
        return _SeriesRing(v, prec)


class _PadicRing(_LocalRing):
    def __init__(self, p: int, prec: int):
        self.p = p
        self.eff_prec = prec
        self.modulus = p**prec
        self._coef_cache: dict = {}

    def convert(self, x):
        if isinstance(x, RatFunc):
            x = x.as_fraction()
        if x == 0:
            return 0
        return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus

    def _coef(self, x):
        r = self._coef_cache.get(id(x))
        if r is None:
            r = self.convert(x)
            self._coef_cache[id(x)] = r
        return r

    def val(self, r: int):
        if r == 0:
            return None
        v = 0
        while r % self.p == 0:
            r //= self.p
            v += 1
        return v if v < self.eff_prec else None

    def eval_pair(self, fmin: HomLift, r0: int, r1: int):
        d = fmin.d
        mod = self.modulus
        xs = [1]
        ys = [1]
        for _ in range(d):
            xs.append(xs[-1] * r0 % mod)
            ys.append(ys[-1] * r1 % mod)
        s0 = s1 = 0
        for j in range(d + 1):
            m = xs[d - j] * ys[j] % mod
            if fmin.a[j]:
                s0 = (s0 + self._coef(fmin.a[j]) * m) % mod
            if fmin.b[j]:
                s1 = (s1 + self._coef(fmin.b[j]) * m) % mod
        return s0, s1

    def shift_down(self, r: int, m: int):
        return r // self.p**m if m else r

    def consume(self, m: int):
        self.eff_prec -= m


class _SeriesRing(_LocalRing):
    """Truncated power series in the local uniformizer at an FF place."""

    def __init__(self, v: Place, prec: int):
        self.v = v
        self.eff_prec = prec
        self._coef_cache: dict = {}

    def convert(self, x):
        if isinstance(x, Fraction):
            x = RatFunc.const(x)
        if x.is_zero():
            return []
        if self.v.kind == "ffpoint":
            a = self.v.a
            num = x.num.compose(Poly((a, Fraction(1))))
            den = x.den.compose(Poly((a, Fraction(1))))
        else:
            dn, dd = x.num.degree, x.den.degree
            if dd < dn:
                raise ValueError("element not integral at t=inf")
            num = x.num.reversed_coeffs(dn).shift(dd - dn)
            den = x.den.reversed_coeffs(dd)
        return _series_div(list(num.coeffs), list(den.coeffs), self.eff_prec)

    def _coef(self, x):
        r = self._coef_cache.get(id(x))
        if r is None:
            r = self.convert(x)
            self._coef_cache[id(x)] = r
        return r

    def val(self, r: list):
        for i, c in enumerate(r):
            if c:
                return i
        return None

    def eval_pair(self, fmin: HomLift, r0, r1):
        d = fmin.d
        prec = self.eff_prec
        xs = [[Fraction(1)]]
        ys = [[Fraction(1)]]
        for _ in range(d):
            xs.append(_series_mul(xs[-1], r0, prec))
            ys.append(_series_mul(ys[-1], r1, prec))
        s0: list = []
        s1: list = []
        for j in range(d + 1):
            m = _series_mul(xs[d - j], ys[j], prec)
            if fmin.a[j]:
                s0 = _series_add(s0, _series_mul(self._coef(fmin.a[j]), m, prec))
            if fmin.b[j]:
                s1 = _series_add(s1, _series_mul(self._coef(fmin.b[j]), m, prec))
        return s0, s1

    def shift_down(self, r: list, m: int):
        return r[m:] if m else r

    def consume(self, m: int):
        self.eff_prec -= m


def _series_mul(a: list, b: list, prec: int) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * min(len(a) + len(b) - 1, prec)
    for i, ai in enumerate(a):
        if ai and i < prec:
            for j, bj in enumerate(b):
                if i + j >= prec:
                    break
                if bj:
                    out[i + j] += ai * bj
    return out


def _series_add(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return out


def _series_div(num: list, den: list, prec: int) -> list:
    """num/den as a truncated series; den[0] must be a unit."""
    if not den or not den[0]:
        raise ZeroDivisionError("series division by non-unit")
    inv0 = 1 / den[0]
    out = []
    num = list(num) + [Fraction(0)] * max(0, prec - len(num))
    for k in range(prec):
        acc = num[k] if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc * inv0)
    return out


# ---------------------------------------------------------------------------
# canonical and critical heights
# ---------------------------------------------------------------------------

def point_of(x, one=Fraction(1)):
    """P^1 point from an affine field element, or "inf"."""
    if isinstance(x, str):
        if x == "inf":
            return (one, one * 0)
        raise ValueError(f"unknown point {x!r}")
    return normalize_point(one * 0 + (Fraction(x) if isinstance(x, int) else x), one)


def bad_places(fmap: RationalMap) -> list[Place]:
    """Places where the chosen lift is non-minimal or has bad reduction.

    At every other non-archimedean place the Green function of the lift
    vanishes identically, so canonical-height sums may be restricted to
    this set (plus the archimedean or t=inf place).
    """
    if fmap.base == "Q":
        primes: set[int] = set()
        content = 0
        den_l = 1
        for c in list(fmap.lift.a) + list(fmap.lift.b):
            if c:
                content = math.gcd(content, abs(c.numerator))
                den_l = den_l * c.denominator // math.gcd(den_l, c.denominator)
        res = fmap.resultant
        for n in (content, den_l, abs(res.numerator), res.denominator):
            if n > 1:
                primes |= set(factor_int(n))
        return [Place.prime(p) for p in sorted(primes)]
    # function field: rational points where coefficients or Res degenerate
    pts: set[Fraction] = set()
    gcd_num: Optional[Poly] = None
    from .algebra import poly_gcd

    for c in list(fmap.lift.a) + list(fmap.lift.b):
        if not c:
            continue
        c = c if isinstance(c, RatFunc) else RatFunc.const(c)
        pts |= _rational_zero_set(c.den)
        gcd_num = c.num if gcd_num is None else poly_gcd(gcd_num, c.num)
    if gcd_num is not None and gcd_num.degree > 0:
        pts |= _rational_zero_set(gcd_num)
    res = fmap.resultant
    res = res if isinstance(res, RatFunc) else RatFunc.const(res)
    if res.num.degree > 0:
        pts |= _rational_zero_set(res.num)
    if res.den.degree > 0:
        pts |= _rational_zero_set(res.den)
    return [Place.ff_point(a) for a in sorted(pts)]


def _rational_zero_set(p: Poly) -> set[Fraction]:
    roots, cofactor = rational_roots(p)
    if cofactor.degree > 0:
        raise ResourceLimit(
            "bad reduction at a non-rational point of the t-line is unsupported"
        )
    return {r for r, _ in roots}


def _preperiodic(fmap: RationalMap, pt, cap: int = _PREPERIOD_CAP) -> bool:
    seen = {pt}
    cur = pt
    for _ in range(cap):
        cur = apply_map(fmap, cur)
        if cur in seen:
            return True
        seen.add(cur)
        if _point_bits(cur) > 1 << 14:
            return False  # escaping fast; certainly not preperiodic
    return False


def _point_bits(pt) -> int:
    bits = 0
    for c in pt:
        if isinstance(c, Fraction):
            bits += c.numerator.bit_length() + c.denominator.bit_length()
        else:
            for p in (c.num, c.den):
                for q in p.coeffs:
                    bits += q.numerator.bit_length() + q.denominator.bit_length()
    return bits


def canonical_height(fmap: RationalMap, point, tol: float = 1e-9) -> HeightValue:
    """Call-Silverman canonical height of a base-field point of P^1.

    Exact 0 for points detected preperiodic; otherwise assembled from the
    per-place Green functions of the chosen lift, with certified error.
    Over Q(t) the value is exact whenever every local computation resolves
    exactly.
    """
    one = field_one(fmap.resultant)
    pt = point if isinstance(point, tuple) else point_of(point, one)
    pt = normalize_point(*pt)
    if _preperiodic(fmap, pt):
        return _ZERO_HEIGHT
    if fmap.base == "Q":
        x0, x1 = _coprime_int_pair(pt)
        xpt = (Fraction(x0), Fraction(x1))
        places = bad_places(fmap)
        per_tol = tol / (len(places) + 2)
        value = 0.0
        err = 0.0
        for v in places:
            g = local_green(fmap.lift, xpt, v, per_tol, fmap.budget)
            gv, ge = g.to_float()
            value += gv
            err += ge
        g_arch = _arch_green(fmap.lift, xpt, per_tol)
        gv, ge = g_arch.to_float()
        norm = 0.5 * math.log(float(x0) ** 2 + float(x1) ** 2)
        value += gv + norm
        err += ge + 5e-15 * (1 + abs(norm))
        return HeightValue(value, err)
    # function field
    polys = _coprime_poly_coords(
        [c if isinstance(c, RatFunc) else RatFunc.const(c) for c in pt]
    )
    xpt = (RatFunc(polys[0], Poly((Fraction(1),)), _normalized=True),
           RatFunc(polys[1], Poly((Fraction(1),)), _normalized=True))
    places = bad_places(fmap) + [Place.ff_infinity()]
    per_tol = tol / (len(places) + 1)
    exact_total = Fraction(max(p.degree for p in polys if not p.is_zero()))
    float_total = 0.0
    err = 0.0
    all_exact = True
    for v in places:
        g = local_green(fmap.lift, xpt, v, per_tol, fmap.budget)
        if g.is_exact():
            exact_total += g.q
        else:
            all_exact = False
            gv, ge = g.to_float()
            float_total += gv
            err += ge
    if all_exact:
        return HeightValue.from_exact(exact_total)
    return HeightValue(float(exact_total) + float_total, err)


def critical_height_direct(fmap: RationalMap, tol: float = 1e-9) -> HeightValue:
    """Sum of canonical heights over Crit(f), multiplicities included.

    Requires every critical point to lie in P^1 over the base field;
    IrrationalCriticalPoint otherwise (callers fall back to the multiplier
    estimator).
    """
    cd = critical_divisor(fmap.lift)
    one = field_one(fmap.resultant)
    points: list[tuple] = []
    poly = cd.affine_poly
    if fmap.base == "Q":
        roots, cofactor = rational_roots(poly)
        if cofactor.degree > 0:
            raise IrrationalCriticalPoint(
                f"critical polynomial has an irreducible factor of degree {cofactor.degree}"
            )
        for r, mult in roots:
            points.append(((one * r, one), mult))
    else:
        zeros = 0
        while poly.coeffs and not poly.coeffs[0]:
            poly = Poly(poly.coeffs[1:])
            zeros += 1
        if poly.degree > 0:
            raise IrrationalCriticalPoint(
                "non-split critical polynomial over Q(t) is unsupported"
            )
        if zeros:
            points.append(((one * 0, one), zeros))
    if cd.mult_infinity:
        points.append(((one, one * 0), cd.mult_infinity))
    total_mult = sum(m for _, m in points)
    per_tol = tol / max(1, total_mult)
    total = _ZERO_HEIGHT
    for pt, mult in points:
        h = canonical_height(fmap, pt, per_tol)
        total = total.plus(h.scaled(mult))
    return total
