"""Dynatomic divisors, multiplier polynomials and multiplier-map points.

The formal n-periodic divisor is cut out by the dynatomic polynomial
Phi*_n = prod_{m|n} P_m^{mu(n/m)} together with a multiplicity at infinity.
The multiplier data over it is extracted without ever locating periodic
points: the first d_n/n power sums of the multiplier multiset are traces
of powers of (f^n)' in the quotient ring k[z]/(Phi*_n), Newton's identities
convert them into the monic cycle polynomial p_{d,n}, and its n-th power
recovers the full symmetric functions sigma*_{j,n}.  Everything is exact
over the base field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _gcd, isqrt as _isqrt

from .algebra import (
    Poly,
    RatFunc,
    _int_mul,
    divisors,
    field_one,
    mobius,
    next_prime,
    period_count,
    poly_exact_div,
    poly_gcd,
    poly_nth_root,
)
from .errors import NonExactDivision, ResourceLimit
from .maps import (
    RationalMap,
    cycle_multiplier,
    fixed_point_divisor,
    normalize_point,
    orbit,
)


@dataclass(frozen=True)
class DynatomicDivisor:
    n: int
    star_poly: Poly
    star_mult_infinity: int

    def total_degree(self) -> int:
        return (len(self.star_poly.coeffs) - 1 if self.star_poly else 0) + self.star_mult_infinity


@dataclass(frozen=True)
class MultiplierSpectrum:
    n: int
    d_n: int
    chi_full: Poly          # monic, prod over Fix(f^n) of (T - (f^n)'(z))
    p_dn: Poly              # monic, degree d_n / n
    sigma_star: tuple       # (sigma*_0 = 1, ..., sigma*_{d_n})


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple

    def __str__(self):
        return "[" + " : ".join(str(c) for c in self.coords) + "]"


def dynatomic_divisor(fmap: RationalMap, n: int) -> DynatomicDivisor:
    """Phi*_n as an exact Moebius quotient of the fixed-point divisors."""
    key = ("dynatomic", n)
    cached = fmap._iterates.get(key)
    if cached is not None:
        return cached
    num = None
    den = None
    inf_mult = 0
    for m in divisors(n):
        mu = mobius(n // m)
        if mu == 0:
            continue
        fd = fixed_point_divisor(fmap, m)
        inf_mult += mu * fd.mult_infinity
        if mu == 1:
            num = fd.affine_poly if num is None else num * fd.affine_poly
        else:
            den = fd.affine_poly if den is None else den * fd.affine_poly
    star = num if den is None else poly_exact_div(num, den)
    if inf_mult < 0:
        raise NonExactDivision("negative multiplicity at infinity in dynatomic divisor")
    div = DynatomicDivisor(n, star, inf_mult)
    if div.total_degree() != period_count(fmap.d, n):
        raise NonExactDivision(
            f"dynatomic degree {div.total_degree()} != d_n = {period_count(fmap.d, n)}"
        )
    fmap._iterates[key] = div
    return div


# ---------------------------------------------------------------------------
# Newton's identities
# ---------------------------------------------------------------------------

def power_sums_from_monic(p: Poly, count: int):
    """First ``count`` power sums of the root multiset of a monic polynomial."""
    deg = len(p.coeffs) - 1
    one = field_one(p.lc())
    elem = []
    for j in range(1, deg + 1):
        elem.append(p.coeffs[deg - j] * (-1 if j % 2 else 1))
    out = []
    for k in range(1, count + 1):
        acc = one * 0
        for i in range(1, min(k, deg) + 1):
            sign = 1 if (i - 1) % 2 == 0 else -1
            term = elem[i - 1] * (out[k - i - 1] if k - i >= 1 else k)
            acc = acc + (term if sign == 1 else -term)
        out.append(acc)
    return out


def monic_from_power_sums(psums, degree: int, one) -> Poly:
    """Monic polynomial of the given degree with the given first power sums."""
    elem = [one]
    for k in range(1, degree + 1):
        acc = one * 0
        for i in range(1, k):
            sign = 1 if (i - 1) % 2 == 0 else -1
            term = elem[k - i] * psums[i - 1]
            acc = acc + (term if sign == 1 else -term)
        tail = psums[k - 1] if (k - 1) % 2 == 0 else -psums[k - 1]
        elem.append((acc + tail) / k)
    coeffs = [one * 0] * (degree + 1)
    for j in range(degree + 1):
        coeffs[degree - j] = elem[j] * (-1 if j % 2 else 1)
    return Poly(coeffs)


def power_roots_poly(p: Poly, s: int) -> Poly:
    """Monic polynomial whose roots are the s-th powers of the roots of p."""
    if s == 1:
        return p
    deg = len(p.coeffs) - 1
    one = field_one(p.lc())
    if deg == 0:
        return p
    ps = power_sums_from_monic(p, s * deg)
    return monic_from_power_sums([ps[s * k - 1] for k in range(1, deg + 1)], deg, one)


# ---------------------------------------------------------------------------
# trace engine over k[z]/(Phi*_n)
# ---------------------------------------------------------------------------

def _rat_reconstruct(residue: int, modulus: int):
    """Fraction n/d = residue mod modulus with |n|, d <= sqrt(modulus/2)."""
    bound = _isqrt(modulus // 2)
    r0, r1 = modulus, residue % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or _gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(-r1, -s1) if s1 < 0 else Fraction(r1, s1)


def _fp_poly_inv(b: list, phi: list, p: int):
    """Inverse of b modulo (phi, p) in F_p[z]; None if not coprime."""
    r0, r1 = phi[:], b[:]
    s0, s1 = [0], [1]

    def strip(c):
        while c and c[-1] % p == 0:
            c.pop()
        return c

    strip(r0)
    strip(r1)
    while r1:
        inv_lc = pow(r1[-1], p - 2, p)
        q = [0] * (len(r0) - len(r1) + 1)
        r = r0[:]
        for k in range(len(r0) - len(r1), -1, -1):
            c = r[k + len(r1) - 1] * inv_lc % p
            q[k] = c
            if c:
                for j, bc in enumerate(r1):
                    r[k + j] = (r[k + j] - c * bc) % p
        r = strip(r[: len(r1) - 1])
        # s_new = s0 - q*s1 mod p
        qs = [0] * (len(q) + len(s1) - 1)
        for i, qi in enumerate(q):
            if qi:
                for j, sj in enumerate(s1):
                    qs[i + j] = (qs[i + j] + qi * sj) % p
        new_s = [( (s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0) ) % p
                 for i in range(max(len(s0), len(qs)))]
        r0, r1 = (r1, r)
        s0, s1 = s1, strip(new_s)
    if len(r0) != 1:
        return None
    inv_lc = pow(r0[0], p - 2, p)
    return [c * inv_lc % p for c in s0]


def _coeffs_mod(poly: Poly, modulus: int) -> list:
    out = []
    for c in poly.coeffs:
        out.append(c.numerator * pow(c.denominator, -1, modulus) % modulus)
    return out


def _reduce_mod(c: list, phi: list, modulus: int) -> list:
    """c mod (phi, modulus); phi monic modulo ``modulus``."""
    c = [x % modulus for x in c]
    deg = len(phi) - 1
    for k in range(len(c) - 1, deg - 1, -1):
        top = c[k]
        if top:
            off = k - deg
            for j in range(deg):
                c[off + j] = (c[off + j] - top * phi[j]) % modulus
        c.pop()
    while c and not c[-1]:
        c.pop()
    return c


def _mod_div(a: Poly, b: Poly, phi: Poly, budget_bits: int = 1 << 22) -> Poly:
    """lambda with b*lambda = a mod phi, exactly over Q.

    Solved modulo a machine prime, Hensel-lifted, rationally reconstructed
    and then verified exactly; the verification step makes the randomness
    harmless.  Far cheaper than any fraction-field elimination because the
    true answer has small height.
    """
    dens = {c.denominator for c in phi.coeffs}
    dens |= {c.denominator for c in a.coeffs}
    dens |= {c.denominator for c in b.coeffs}
    p = 1 << 30
    u0 = None
    for _ in range(32):
        p = next_prime(p)
        if any(d % p == 0 for d in dens):
            continue
        phi_p = _coeffs_mod(phi, p)
        if len(phi_p) != len(phi.coeffs) or phi_p[-1] % p == 0:
            continue
        inv_lc = pow(phi_p[-1], p - 2, p)
        phi_p = [c * inv_lc % p for c in phi_p]
        b_p = _reduce_mod(_coeffs_mod(b, p), phi_p, p)
        u0 = _fp_poly_inv(b_p, phi_p, p)
        if u0 is not None:
            break
    if u0 is None:
        raise NonExactDivision(
            "derivative denominator shares a root with the dynatomic polynomial"
        )
    e = 1
    u = [c % p for c in u0]
    while e * p.bit_length() <= budget_bits:
        e *= 2
        modulus = p**e
        phi_m = _coeffs_mod(phi, modulus)
        inv_lc = pow(phi_m[-1], -1, modulus)
        phi_m = [c * inv_lc % modulus for c in phi_m]
        b_m = _reduce_mod(_coeffs_mod(b, modulus), phi_m, modulus)
        # Newton step u <- u(2 - b u) lifts the inverse to the new modulus
        bu = _reduce_mod(_int_mul_lists(b_m, u, modulus), phi_m, modulus)
        two_minus = [(-x) % modulus for x in bu]
        if two_minus:
            two_minus[0] = (two_minus[0] + 2) % modulus
        else:
            two_minus = [2 % modulus]
        u = _reduce_mod(_int_mul_lists(u, two_minus, modulus), phi_m, modulus)
        a_m = _reduce_mod(_coeffs_mod(a, modulus), phi_m, modulus)
        lam_m = _reduce_mod(_int_mul_lists(a_m, u, modulus), phi_m, modulus)
        coeffs = []
        for r in lam_m:
            f = _rat_reconstruct(r, modulus)
            if f is None:
                coeffs = None
                break
            coeffs.append(f)
        if coeffs is not None:
            lam = Poly(coeffs)
            if ((b * lam - a) % phi).is_zero():
                return lam
    raise ResourceLimit("Hensel lifting exceeded the coefficient budget")


def _int_mul_lists(a: list, b: list, modulus: int) -> list:
    if not a or not b:
        return []
    return [c % modulus for c in _int_mul(a, b)]


def _field_mod_div(a: Poly, b: Poly, phi: Poly) -> Poly:
    """Generic extended-Euclid division in k[z]/(phi); small inputs only."""
    one = field_one(phi.lc())
    r0, r1 = phi, b % phi
    u0, u1 = Poly(), Poly.const(one)
    while not r1.is_zero() and r1.degree > 0:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
    if r1.is_zero():
        raise NonExactDivision(
            "derivative denominator shares a root with the dynatomic polynomial"
        )
    inv = u1.scale(1 / r1.coeffs[0])
    return (a * inv) % phi


def _multiplier_power_sums(fmap: RationalMap, n: int, phi: Poly, count: int, one):
    """Power sums sum_{Phi(beta)=0} lambda(beta)^k, k = 1..count, lambda = (f^n)'."""
    if count == 0:
        return []
    if phi.degree <= 0:
        return [one * 0] * count
    phi = phi.monic()
    deg = len(phi.coeffs) - 1
    lift_n = fmap.iterate_lift_cached(n)
    num = lift_n.poly0()
    den = lift_n.poly1()
    a = (num.derivative() * den - num * den.derivative()) % phi
    b = (den * den) % phi
    if b.is_zero():
        raise NonExactDivision("vanishing denominator in multiplier computation")
    if b.degree <= 0:
        lam = a.scale(1 / b.coeffs[0])
    elif all(type(c) is Fraction for c in phi.coeffs + a.coeffs + b.coeffs):
        lam = _mod_div(a, b, phi)
    else:
        lam = _field_mod_div(a, b, phi)
    traces = [one * deg] + power_sums_from_monic(phi, deg - 1)  # trace of z^i
    out = []
    cur = lam
    for k in range(1, count + 1):
        s = one * 0
        for i, ci in enumerate(cur.coeffs):
            if ci:
                s = s + ci * traces[i]
        out.append(s)
        if k < count:
            cur = (cur * lam) % phi
    return out


def _infinity_cycle_data(fmap: RationalMap, n: int):
    """(exact period q, multiplier of f^q at infinity) if infinity is n-periodic."""
    one = field_one(fmap.resultant)
    inf_pt = normalize_point(one, one * 0)
    pts = orbit(fmap, inf_pt, n)
    for q in range(1, n + 1):
        if pts[q] == inf_pt:
            return q, cycle_multiplier(fmap, inf_pt, q)
    return None, None


def fixstar_multiplier_charpoly(fmap: RationalMap, n: int) -> Poly:
    """Monic prod over Fix*(f^n) of (T - (f^n)'(z)), via power-sum traces."""
    key = ("fixstar_charpoly", n)
    cached = fmap._iterates.get(key)
    if cached is not None:
        return cached
    div = dynatomic_divisor(fmap, n)
    d_n = period_count(fmap.d, n)
    if d_n % n:
        raise NonExactDivision(f"d_n = {d_n} not divisible by n = {n}")
    k_cycles = d_n // n
    one = field_one(fmap.resultant)
    sums = _multiplier_power_sums(fmap, n, div.star_poly, k_cycles, one)
    if div.star_mult_infinity:
        q, lam_q = _infinity_cycle_data(fmap, n)
        if q is None or n % q:
            raise NonExactDivision("infinity multiplicity without a periodic infinity")
        lam_inf = lam_q ** (n // q)
        power = lam_inf
        for k in range(k_cycles):
            sums[k] = sums[k] + div.star_mult_infinity * power
            power = power * lam_inf
    cycle_sums = [s / n for s in sums]
    p_dn = monic_from_power_sums(cycle_sums, k_cycles, one)
    q_n = p_dn**n
    if len(q_n.coeffs) - 1 != d_n:
        raise NonExactDivision("multiplier charpoly has wrong degree")
    fmap._iterates[key] = q_n
    return q_n


# ---------------------------------------------------------------------------
# public spectrum operations
# ---------------------------------------------------------------------------

def multiplier_polynomial(fmap: RationalMap, n: int) -> MultiplierSpectrum:
    """Exact multiplier spectrum at period n: p_{d,n}, sigma*, chi_n."""
    q_n = fixstar_multiplier_charpoly(fmap, n)
    d_n = period_count(fmap.d, n)
    p_dn = poly_nth_root(q_n, n)
    one = field_one(fmap.resultant)
    sigma = []
    for j in range(d_n + 1):
        c = q_n[d_n - j] * one
        sigma.append(c if j % 2 == 0 else -c)
    chi = charpoly_multipliers_full(fmap, n)
    return MultiplierSpectrum(n, d_n, chi, p_dn, tuple(sigma))


def charpoly_multipliers_full(fmap: RationalMap, n: int) -> Poly:
    """Monic chi_n(T) = prod over Fix(f^n) of (T - (f^n)'(z)), degree d^n + 1.

    Assembled from the formal-period charpolys: a point of exact formal
    period m contributes its f^m-multiplier raised to the n/m power.
    """
    chi = None
    for m in divisors(n):
        q_m = fixstar_multiplier_charpoly(fmap, m)
        factor = power_roots_poly(q_m, n // m)
        chi = factor if chi is None else chi * factor
    if len(chi.coeffs) - 1 != fmap.d**n + 1:
        raise NonExactDivision("full multiplier charpoly has wrong degree")
    return chi


def sigma_display_poly(spectrum: MultiplierSpectrum) -> Poly:
    """sum_j sigma*_j (-T)^(d_n - j): the sign-flipped product over Fix*."""
    d_n = spectrum.d_n
    coeffs = [spectrum.sigma_star[d_n - k] * (-1 if k % 2 else 1) for k in range(d_n + 1)]
    return Poly(coeffs)


# ---------------------------------------------------------------------------
# multiplier-map points
# ---------------------------------------------------------------------------

def _normalize_proj(coords) -> tuple:
    vals = list(coords)
    if all(isinstance(c, (int, Fraction)) for c in vals):
        vals = [Fraction(c) for c in vals]
        den = 1
        for c in vals:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [c.numerator * (den // c.denominator) for c in vals]
        g = 0
        for c in ints:
            g = _gcd(g, abs(c))
        ints = [c // g for c in ints]
        last = next(c for c in reversed(ints) if c)
        if last < 0:
            ints = [-c for c in ints]
        return tuple(Fraction(c) for c in ints)
    vals = [c if isinstance(c, RatFunc) else RatFunc.const(c) for c in vals]
    den = Poly((Fraction(1),))
    for c in vals:
        if c.den.degree > 0:
            g = poly_gcd(den, c.den)
            den = poly_exact_div(den * c.den, g) if g.degree > 0 else den * c.den
    cleared = [(c * RatFunc(den, Poly((Fraction(1),)))).num for c in vals]
    g = None
    for p in cleared:
        if not p.is_zero():
            g = p if g is None else poly_gcd(g, p)
            if g.degree == 0:
                break
    if g is not None and g.degree > 0:
        cleared = [poly_exact_div(p, g) if not p.is_zero() else p for p in cleared]
    # integer content normalization across all coefficients
    den_i = 1
    for p in cleared:
        for c in p.coeffs:
            den_i = den_i * c.denominator // _gcd(den_i, c.denominator)
    num_g = 0
    for p in cleared:
        for c in p.coeffs:
            num_g = _gcd(num_g, abs(c.numerator * (den_i // c.denominator)))
    scale = Fraction(den_i, num_g if num_g else 1)
    cleared = [p.scale(scale) for p in cleared]
    last = next(p for p in reversed(cleared) if not p.is_zero())
    if last.lc() < 0:
        cleared = [p.scale(-1) for p in cleared]
    return tuple(RatFunc(p, Poly((Fraction(1),)), _normalized=True) for p in cleared)


def lambda_tilde_point(fmap: RationalMap, n: int) -> ProjPoint:
    """[sigma*_{d_n} : ... : sigma*_1 : 1], normalized coordinates."""
    spectrum = multiplier_polynomial(fmap, n)
    coords = list(reversed(spectrum.sigma_star))
    return ProjPoint(_normalize_proj(coords))


def lambda_point(fmap: RationalMap, n: int) -> ProjPoint:
    """[sigma_{d^n+1} : ... : sigma_1 : 1] over the full Fix(f^n)."""
    chi = charpoly_multipliers_full(fmap, n)
    deg = len(chi.coeffs) - 1
    one = field_one(fmap.resultant)
    sigma = []
    for j in range(deg + 1):
        c = chi[deg - j] * one
        sigma.append(c if j % 2 == 0 else -c)
    return ProjPoint(_normalize_proj(list(reversed(sigma))))
