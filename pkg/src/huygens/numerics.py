"""Quadrature, root finding and the cosine integral.

Everything here is scalar-in / scalar-out except the integrands handed to
:func:`integrate_1d`, which are called with a numpy array of 21 nodes and
must return an array of the same shape.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError

EULER_GAMMA = 0.57721566490153286060651209008240243

# Gauss-Kronrod 21-point nodes on [0, 1] (symmetric); odd indices are the
# 10-point Gauss nodes.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208067559539,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# full 21-node layout: -x0..-x9, 0, x9..x0
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GAUSS_W = np.zeros(21)
_GAUSS_W[1:10:2] = _WG
_GAUSS_W[19:10:-2] = _WG

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 10_000

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be a positive integer")

    def tightened(self, factor: float = 10.0) -> "QuadratureSpec":
        """Same spec with both tolerances divided by ``factor``."""
        return QuadratureSpec(self.rel_tol / factor, self.abs_tol / factor, self.max_subdivisions)


DEFAULT_QUAD = QuadratureSpec()


def _gk21(f, a: float, b: float) -> tuple[float, float, float]:
    """One Gauss-Kronrod 21 panel: (value, error, integral of |f|); error as in QUADPACK qk21."""
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    fx = np.asarray(f(center + half * _NODES), dtype=float)
    if fx.shape != _NODES.shape:
        raise ValueError("integrand must map an array of nodes to an array of the same shape")
    if not np.all(np.isfinite(fx)):
        raise DomainError(f"integrand is not finite on [{a!r}, {b!r}]")
    result_k = float(np.dot(_KRONROD_W, fx))
    result_g = float(np.dot(_GAUSS_W, fx))
    resabs = float(np.dot(_KRONROD_W, np.abs(fx)))
    mean = 0.5 * result_k
    resasc = float(np.dot(_KRONROD_W, np.abs(fx - mean)))
    err = abs((result_k - result_g) * half)
    resasc *= abs(half)
    resabs *= abs(half)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50.0 * _EPS):
        err = max(50.0 * _EPS * resabs, err)
    return result_k * half, err, resabs


def integrate_1d(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUAD,
    points: Iterable[float] = (),
) -> tuple[float, float]:
    """Globally adaptive Gauss-Kronrod (7-10/21) quadrature of ``f`` on ``[a, b]``.

    ``points`` are interior breakpoints (kinks, period boundaries) used as
    the initial partition; anything outside ``(a, b)`` is ignored.

    Stops early when every panel's error is at the roundoff floor
    (integrals that cancel to ~0).  Returns ``(value, err_est)``.  Raises :class:`ConvergenceError` with the
    best estimate attached when ``spec.max_subdivisions`` is exhausted.
    """
    a = float(a)
    b = float(b)
    if b < a:
        raise ValueError(f"integrate_1d needs a <= b, got [{a}, {b}]")
    if a == b:
        return 0.0, 0.0

    edges = [a] + sorted({float(p) for p in points if a < p < b}) + [b]
    heap: list[tuple[float, float, float, float, float]] = []
    total = 0.0
    total_err = 0.0
    total_abs = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err, mag = _gk21(f, lo, hi)
        total += val
        total_err += err
        total_abs += mag
        heapq.heappush(heap, (-err, lo, hi, val, mag))

    n_intervals = len(heap)
    # the per-panel error floor is 50 eps |f|; twice its sum means every panel is at roundoff
    while total_err > max(spec.abs_tol, spec.rel_tol * abs(total), 100.0 * _EPS * total_abs):
        if n_intervals >= spec.max_subdivisions:
            raise ConvergenceError(
                f"quadrature on [{a!r}, {b!r}] did not converge in {n_intervals} subdivisions",
                value=total,
                error=total_err,
            )
        neg_err, lo, hi, val, mag = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # interval cannot be split further in floating point
            raise ConvergenceError(
                f"quadrature hit floating-point resolution near {mid!r}",
                value=total,
                error=total_err,
            )
        v1, e1, m1 = _gk21(f, lo, mid)
        v2, e2, m2 = _gk21(f, mid, hi)
        total += v1 + v2 - val
        total_err += e1 + e2 + neg_err
        total_abs += m1 + m2 - mag
        heapq.heappush(heap, (-e1, lo, mid, v1, m1))
        heapq.heappush(heap, (-e2, mid, hi, v2, m2))
        n_intervals += 1

    # recompute sums to shed accumulated rounding from the running updates
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    return total, total_err


def integrate_2d_clipped(
    f: Callable[[np.ndarray, float], np.ndarray],
    outer: tuple[float, float],
    inner_hi: Callable[[float], float],
    inner_lo: float | Callable[[float], float],
    spec: QuadratureSpec = DEFAULT_QUAD,
    outer_points: Iterable[float] = (),
    inner_points: Callable[[float, float, float], Sequence[float]] | None = None,
) -> tuple[float, float]:
    """Iterated quadrature of ``f(x, y)`` over ``{y in outer, lo(y) <= x <= hi(y)}``.

    ``f`` receives an array of inner nodes ``x`` and a scalar outer value
    ``y``.  Where ``inner_hi(y) <= inner_lo(y)`` the inner integral is zero.
    Kinks of the clip (where ``inner_hi`` switches branch) must be passed in
    ``outer_points``; adaptive rules converge very slowly across them.
    ``inner_points(y, lo, hi)`` may supply breakpoints for each inner integral.
    """
    lo_fn = inner_lo if callable(inner_lo) else (lambda _y, _c=float(inner_lo): _c)
    inner_spec = spec.tightened(10.0)
    inner_errs: list[float] = []

    def outer_integrand(ys: np.ndarray) -> np.ndarray:
        out = np.empty_like(ys)
        for i, y in enumerate(ys):
            lo = lo_fn(y)
            hi = inner_hi(y)
            if not hi > lo:
                out[i] = 0.0
                continue
            pts = inner_points(y, lo, hi) if inner_points is not None else ()
            val, err = integrate_1d(lambda xs, _y=y: f(xs, _y), lo, hi, inner_spec, pts)
            out[i] = val
            inner_errs.append(err)
        return out

    a, b = outer
    value, err = integrate_1d(outer_integrand, a, b, spec, outer_points)
    inner_bound = max(inner_errs, default=0.0) * (b - a)
    return value, err + inner_bound


def period_points(a: float, b: float, omega: float) -> list[float]:
    """Breakpoints every ``2*pi/omega`` from ``a`` when ``[a, b]`` spans more than a period."""
    if omega <= 0 or omega * (b - a) <= 2 * math.pi:
        return []
    period = 2 * math.pi / omega
    n = int((b - a) / period)
    return [a + k * period for k in range(1, n + 1) if a + k * period < b]


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 1e-12,
    maxiter: int = 500,
) -> float:
    """Root of ``f`` in the sign-change bracket ``[lo, hi]``.

    Regula falsi steps with the Illinois weight fix, falling back to
    bisection whenever a secant step fails to halve the bracket.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise DomainError(f"no sign change on [{lo!r}, {hi!r}]")

    side = 0
    for _ in range(maxiter):
        width = hi - lo
        if width <= xtol:
            break
        x = (lo * fhi - hi * flo) / (fhi - flo)
        if not lo < x < hi:
            x = 0.5 * (lo + hi)
        fx = f(x)
        if fx == 0.0:
            return x
        if math.copysign(1.0, fx) == math.copysign(1.0, flo):
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
        if hi - lo > 0.5 * width:
            mid = 0.5 * (lo + hi)
            fmid = f(mid)
            if fmid == 0.0:
                return mid
            if math.copysign(1.0, fmid) == math.copysign(1.0, flo):
                lo, flo = mid, fmid
            else:
                hi, fhi = mid, fmid
            side = 0
    else:
        raise ConvergenceError(f"root bracket [{lo!r}, {hi!r}] did not shrink below {xtol}", value=0.5 * (lo + hi))
    return 0.5 * (lo + hi)


def expand_bracket(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    factor: float = 2.0,
    maxiter: int = 200,
) -> tuple[float, float]:
    """Grow ``hi`` geometrically away from ``lo`` until ``f`` changes sign."""
    flo = f(lo)
    if flo == 0.0:
        return lo, lo
    step = hi - lo
    for _ in range(maxiter):
        fhi = f(hi)
        if fhi == 0.0 or math.copysign(1.0, fhi) != math.copysign(1.0, flo):
            return lo, hi
        step *= factor
        hi = lo + step
        if not math.isfinite(hi):
            break
    raise DomainError("no sign change found while expanding the bracket")


def _ci_series(z: float) -> float:
    total = 0.0
    term = 1.0
    k = 0
    z2 = z * z
    while True:
        k += 1
        term *= -z2 / ((2 * k - 1) * (2 * k))
        contrib = term / (2 * k)
        total += contrib
        if abs(contrib) < 1e-18 * max(1.0, abs(total)) and k > 2:
            break
    return EULER_GAMMA + math.log(z) + total


def _ci_continued_fraction(z: float) -> float:
    # E1(iz) by modified Lentz; Ci(z) = -Re E1(iz)
    tiny = 1e-300
    b = complex(1.0, z)
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < 1e-16:
            break
    else:
        raise ConvergenceError(f"Ci continued fraction did not converge at z={z!r}")
    h *= complex(math.cos(z), -math.sin(z))
    return -h.real


def cosine_integral(z: float) -> float:
    """Ci(z) = -integral_z^inf cos(t)/t dt for z > 0.

    Power series up to z = 4, continued fraction for E1(iz) beyond.
    """
    z = float(z)
    if not z > 0.0:
        raise DomainError(f"Ci(z) needs z > 0, got {z!r}")
    if math.isinf(z):
        return 0.0
    if z <= 4.0:
        return _ci_series(z)
    return _ci_continued_fraction(z)
