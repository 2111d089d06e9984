"""Truncated Lyapunov approximants and Lyapunov exponents per place.

Non-archimedean approximants are exact: by the Gauss lemma the truncated
average over the formal n-periodic multipliers is
(1/(n d_n)) max_j [ log|sigma*_j|_v + (d_n - j) log r ], a rational
multiple of log p.  Their distance to the limit is controlled by the
explicit self-consistency bound
8(d-1)^2 (|L| + (4d^2-2d-1)/(d(2d-2)) * (-log|Res f|_v) + |log r|) sigma_2(n)/d_n,
evaluated here with the best available |L| surrogate and labeled as such.
The archimedean exponent comes from the critical-point formula
L = -log d + sum_j g_F(c_j) + correction terms, with the Green values
iterated to a certified tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import period_count, sigma2
from .errors import ArchimedeanPlace, ResourceLimit
from .heights import _arch_green, _to_complex
from .maps import RationalMap, abs_resultant, critical_divisor
from .multipliers import multiplier_polynomial
from .places import Place, LocalLogValue, local_abs, log_max
from .roots import aberth_roots


@dataclass(frozen=True)
class TruncationRadius:
    place: Place
    n: int
    log_eps: LocalLogValue  # <= 0; exact


@dataclass(frozen=True)
class LyapunovEstimate:
    place: Place
    n: int
    log_r: LocalLogValue
    value: LocalLogValue
    bound: Optional[LocalLogValue] = None


@dataclass(frozen=True)
class LipschitzData:
    place: Place
    log_m1: LocalLogValue


def epsilon_radius(v: Place, d: int, n: int) -> TruncationRadius:
    """log of eps_{d^n} = min over 1 <= m <= d^n of |m|_v^(d^n)."""
    if v.kind == "prime":
        power = d**n
        k = 0
        q = v.p
        while q <= power:
            k += 1
            q *= v.p
        if k:
            return TruncationRadius(v, n, LocalLogValue.exact(Fraction(-power * k), v.p))
    return TruncationRadius(v, n, LocalLogValue.exact(0))


def L_n_local(fmap: RationalMap, n: int, log_r: LocalLogValue, v: Place) -> LyapunovEstimate:
    """Truncated multiplier average L_n(f, r) at the place v."""
    spectrum = multiplier_polynomial(fmap, n)
    d_n = spectrum.d_n
    if v.is_archimedean():
        r_val, _ = log_r.to_float()
        r = math.exp(r_val)
        if r > 1.0 + 1e-12:
            raise ValueError("archimedean truncation radius must satisfy r <= 1")
        roots, errs = aberth_roots(list(spectrum.p_dn.coeffs))
        total = 0.0
        err = 0.0
        for root, rerr in zip(roots, errs):
            total += math.log(max(r, abs(root)))
            err += rerr / max(r, abs(root)) + 1e-15
        return LyapunovEstimate(v, n, log_r, LocalLogValue.from_float(total / d_n, err / d_n + 1e-14))
    terms = []
    for j, s in enumerate(spectrum.sigma_star):
        if s:
            terms.append(local_abs(s, v) + log_r.scaled(d_n - j))
    value = log_max(terms).scaled(Fraction(1, n * d_n))
    return LyapunovEstimate(v, n, log_r, value)


def approximation_bound(fmap: RationalMap, v: Place, n: int, log_r: LocalLogValue,
                    l_abs_surrogate: LocalLogValue) -> LocalLogValue:
    """Self-consistency radius for |L_n(f, r) - L(f)| at a finite place.

    8(d-1)^2 (|L| + (4d^2-2d-1)/(d(2d-2)) (-log|Res f|_v) + |log r|) sigma2(n)/d_n,
    with the caller-supplied surrogate standing in for the unknown |L|.
    """
    if v.is_archimedean():
        raise ArchimedeanPlace("explicit approximation bounds are non-archimedean only")
    d = fmap.d
    res_term = (-abs_resultant(fmap, v)).scaled(
        Fraction(4 * d * d - 2 * d - 1, d * (2 * d - 2))
    )
    inner = l_abs_surrogate.abs_value() + res_term + log_r.abs_value()
    return inner.scaled(Fraction(8 * (d - 1) ** 2 * sigma2(n), period_count(d, n)))


def lyapunov_nonarch_sequence(fmap: RationalMap, v: Place, n_max: int) -> list[LyapunovEstimate]:
    """L_n(f, eps_{d^n})_v for n = 1..n_max, with surrogate-based bounds."""
    if v.is_archimedean():
        raise ArchimedeanPlace("use lyapunov_arch at the archimedean place")
    d = fmap.d
    raw = []
    for n in range(1, n_max + 1):
        log_eps = epsilon_radius(v, d, n).log_eps
        raw.append(L_n_local(fmap, n, log_eps, v))
    surrogate = raw[-1].value.abs_value()
    out = []
    for est in raw:
        bnd = approximation_bound(fmap, v, est.n, est.log_r, surrogate)
        out.append(LyapunovEstimate(v, est.n, est.log_r, est.value, bnd))
    return out


def lipschitz_data(fmap: RationalMap, v: Place) -> LipschitzData:
    """log M_1(f): 1/|Res(f)|_v at finite places, sup of the chordal
    derivative at the archimedean one."""
    if not v.is_archimedean():
        return LipschitzData(v, -abs_resultant(fmap, v))
    sup, err = _sup_chordal_derivative(fmap)
    return LipschitzData(v, LocalLogValue.from_float(math.log(sup), err / sup + 1e-12))


def _sup_chordal_derivative(fmap: RationalMap, grid: int = 384):
    """Numeric sup of f^# over P^1(C) on a chordal grid with refinement."""
    d = fmap.d
    a = [_to_complex(c) for c in fmap.lift.a]
    b = [_to_complex(c) for c in fmap.lift.b]

    def fsharp(x, y):
        # |det DF(p)| / (|d| ||F(p)||^2) * ||p||^2, on representatives
        da0 = sum((d - j) * a[j] * x ** (d - j - 1) * y**j for j in range(d))
        da1 = sum(j * a[j] * x ** (d - j) * y ** (j - 1) for j in range(1, d + 1))
        db0 = sum((d - j) * b[j] * x ** (d - j - 1) * y**j for j in range(d))
        db1 = sum(j * b[j] * x ** (d - j) * y ** (j - 1) for j in range(1, d + 1))
        det = da0 * db1 - da1 * db0
        f0 = sum(a[j] * x ** (d - j) * y**j for j in range(d + 1))
        f1 = sum(b[j] * x ** (d - j) * y**j for j in range(d + 1))
        np2 = abs(x) ** 2 + abs(y) ** 2
        nf2 = abs(f0) ** 2 + abs(f1) ** 2
        if nf2 == 0:
            return 0.0
        return abs(det) * np2 / (d * nf2)

    def at(phi, theta):
        x = math.cos(phi) * complex(math.cos(theta), math.sin(theta))
        return fsharp(x, math.sin(phi))

    best = 0.0
    best_par = (0.0, 0.0)
    for i in range(grid + 1):
        phi = math.pi / 2 * i / grid
        for k in range(grid):
            theta = 2 * math.pi * k / grid
            val = at(phi, theta)
            if val > best:
                best = val
                best_par = (phi, theta)
    phi, theta = best_par
    step = math.pi / grid
    for _ in range(60):
        improved = False
        for dphi in (-step, 0.0, step):
            for dtheta in (-step, 0.0, step):
                cand = at(phi + dphi, theta + dtheta)
                if cand > best:
                    best = cand
                    phi, theta = phi + dphi, theta + dtheta
                    improved = True
        if not improved:
            step /= 2
            if step < 1e-10:
                break
    err = best * (2.0 * math.pi / grid) * (d + 1)  # heuristic mesh allowance
    return best, err


def lyapunov_arch(fmap: RationalMap, tol: float = 1e-8) -> LyapunovEstimate:
    """Archimedean Lyapunov exponent via the critical-point formula.

    Scales implicitly to a |Res F| = 1 lift: the resultant and Hermitian
    norm corrections appear as closed-form terms, so only the 2d-2 Green
    values are iterated numerically.
    """
    if fmap.base != "Q":
        raise ValueError("archimedean Lyapunov exponents require a map over Q")
    d = fmap.d
    cd = critical_divisor(fmap.lift)
    roots, rerrs = aberth_roots(list(cd.affine_poly.coeffs))
    per_tol = tol / (2 * d - 2 + 1)
    total = -math.log(d)
    err = 0.0
    for root, rerr in zip(roots, rerrs):
        g = _arch_green(fmap.lift, (root, 1.0 + 0j), per_tol)
        gv, ge = g.to_float()
        total += gv + 0.5 * math.log(1.0 + abs(root) ** 2)
        err += ge + 4.0 * rerr  # local sensitivity allowance
    if cd.mult_infinity:
        g = _arch_green(fmap.lift, (1.0 + 0j, 0j), per_tol)
        gv, ge = g.to_float()
        total += cd.mult_infinity * gv
        err += cd.mult_infinity * ge
    total += math.log(abs(_to_complex(cd.leading_coeff)))
    res = abs(_to_complex(fmap.resultant))
    total -= (2.0 / d) * math.log(res)
    value = LocalLogValue.from_float(total, err + 1e-12)
    return LyapunovEstimate(Place.arch(), 0, LocalLogValue.exact(0), value)