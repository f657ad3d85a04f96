"""Self-test suite run by ``huygens verify``: each closed form against an independent route."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import signaling
from .causality import (
    CausalClass,
    Comoving,
    CommPair,
    DetectorConfig,
    classify,
    min_timelike_switch_on_comoving,
    min_timelike_switch_on_proper,
)
from .commutator import (
    GreenFunctionProblem,
    SpacetimeEvent,
    commutator_theta_coefficient,
    reconstruct_theta_part,
    solve_mode_ode,
)
from .cosmology import CosmologyModel, conformal_time, normalized_pair, scale_factor
from .numerics import EULER_GAMMA, cosine_integral, integrate_1d

ANCHOR = 2.0 / 3.0
OMEGAS = (0.0, 1.0, 5.0, 10.0, 20.0)
DELTAS = (0.005, 0.01, 0.05)
BOB_TIMES = (1.5, 2.0, 5.0, 20.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def ci_power_series(z: float, terms: int = 40) -> float:
    """Plain truncated power series; accurate for moderate z only."""
    total = EULER_GAMMA + math.log(z)
    term = 1.0
    for k in range(1, terms + 1):
        term *= -z * z / ((2 * k - 1) * (2 * k))
        total += term / (2 * k)
    return total


def bisect(f: Callable[[float], float], lo: float, hi: float, iterations: int = 200) -> float:
    flo = f(lo)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def strict_timelike_pair(omega: float, delta: float, t_ib: float, R: float = 0.1) -> CommPair:
    return CommPair(
        DetectorConfig(omega, 1.0, ANCHOR, delta), DetectorConfig(omega, 1.0, t_ib, delta), Comoving(R)
    )


def check_ci() -> CheckResult:
    worst = 0.0
    for z in (0.1, 0.5, 1.0, 2.0, 3.0, 4.0):
        worst = max(worst, abs(cosine_integral(z) - ci_power_series(z)))
    # beyond the series range: differences against direct quadrature
    for a, b in ((4.0, 9.0), (7.5, 30.0), (20.0, 60.0)):
        ref, _ = integrate_1d(lambda t: np.cos(t) / t, a, b, points=np.arange(a, b, math.pi))
        worst = max(worst, abs((cosine_integral(b) - cosine_integral(a)) - ref))
    return CheckResult("cosine-integral", worst <= 1e-13, f"max abs deviation {worst:.2e}")


def check_closed_vs_quadrature(model: CosmologyModel, label: str, tol: float = 1e-7) -> CheckResult:
    worst = 0.0
    for omega, delta, t_ib in itertools.product(OMEGAS, DELTAS, BOB_TIMES):
        pair = strict_timelike_pair(omega, delta, t_ib)
        if classify(model, pair) is not CausalClass.B5_STRICT_TIMELIKE:
            return CheckResult(f"closed-vs-quadrature-{label}", False, f"grid point {pair} not strictly timelike")
        closed = signaling.i_theta_closed(model, pair)
        quad = signaling.i_theta(model, pair)
        worst = max(worst, abs(closed - quad) / abs(closed))
    return CheckResult(f"closed-vs-quadrature-{label}", worst <= tol, f"max rel deviation {worst:.2e}")


def random_spacelike_pairs(n: int, seed: int = 1234):
    rng = random.Random(seed)
    matter, de_sitter = normalized_pair(ANCHOR)
    out = []
    while len(out) < n:
        model = matter if rng.random() < 0.5 else de_sitter
        t_ia = rng.uniform(0.3, 3.0)
        t_ib = rng.uniform(0.3, 3.0)
        d_a = rng.uniform(1e-3, 0.2)
        d_b = rng.uniform(1e-3, 0.2)
        gap_a = rng.choice([0.0, rng.uniform(0.0, 30.0)])
        gap_b = rng.choice([0.0, rng.uniform(0.0, 30.0)])
        reach = conformal_time(model, t_ib + d_b) - conformal_time(model, t_ia)
        R = max(reach, 0.0) + rng.uniform(1e-3, 0.5)
        pair = CommPair(DetectorConfig(gap_a, 1.0, t_ia, d_a), DetectorConfig(gap_b, 1.0, t_ib, d_b), Comoving(R))
        phase_a, phase_b = rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi)
        theta_a, theta_b = rng.uniform(0, math.pi), rng.uniform(0, math.pi)
        state_a = signaling.DetectorState(complex(math.cos(theta_a)), math.sin(theta_a) * np.exp(1j * phase_a))
        state_b = signaling.DetectorState(complex(math.cos(theta_b)), math.sin(theta_b) * np.exp(1j * phase_b))
        out.append((model, pair, state_a, state_b))
    return out


def check_no_signaling(n: int = 50) -> CheckResult:
    worst = 0.0
    for model, pair, sa, sb in random_spacelike_pairs(n):
        if classify(model, pair) is not CausalClass.B1_SPACELIKE:
            return CheckResult("no-signaling", False, "generated configuration is not spacelike")
        worst = max(worst, abs(signaling.s2(model, pair, sa, sb, method="quadrature").s2))
    return CheckResult("no-signaling", worst <= 1e-10, f"max |S2| {worst:.2e} over {n} spacelike pairs")


def check_gapless_limits() -> CheckResult:
    matter, de_sitter = normalized_pair(ANCHOR)
    pair = strict_timelike_pair(1e-8, 0.01, 2.0)
    gapless = strict_timelike_pair(0.0, 0.01, 2.0)
    rel_m = abs(signaling.i_theta_closed(matter, pair) / signaling.i_theta_closed(matter, gapless) - 1.0)
    lam = signaling.i_theta_closed(de_sitter, strict_timelike_pair(1e-6, 0.01, 2.0))
    rel_l = abs(lam / (de_sitter.lambda_abs * 0.01 ** 2) - 1.0)
    ok = rel_m <= 1e-5 and rel_l <= 1e-6
    return CheckResult("gapless-limits", ok, f"matter {rel_m:.2e}, lambda {rel_l:.2e}")


def check_timing() -> CheckResult:
    worst = 0.0
    t_fa = ANCHOR + 0.01
    for model in normalized_pair(ANCHOR):
        eta_fa = conformal_time(model, t_fa)
        ref_r = bisect(lambda t: conformal_time(model, t) - eta_fa - 0.5, t_fa, 50.0)
        ref_p = bisect(lambda t: conformal_time(model, t) - eta_fa - 0.5 / scale_factor(model, t), t_fa, 50.0)
        worst = max(
            worst,
            abs(min_timelike_switch_on_comoving(model, ANCHOR, 0.01, 0.5) - ref_r),
            abs(min_timelike_switch_on_proper(model, ANCHOR, 0.01, 0.5) - ref_p),
        )
    return CheckResult("signal-timing", worst <= 1e-10, f"max deviation from bisection {worst:.2e}")


def check_conformal_mode() -> CheckResult:
    worst = 0.0
    for k, src in ((1.0, 2.0), (5.0, -1.0), (20.0, 2.5)):
        prob = GreenFunctionProblem(w=0.0, xi=1.0 / 6.0, k=k, eta_source=src)
        span = 2 * math.pi / k
        lo, hi = (src, src + span) if src > 0 else (src - span, src)
        eta, g, _ = solve_mode_ode(prob, (lo, hi), 200)
        worst = max(worst, float(np.max(np.abs(g - 4 * math.pi / k * np.sin(k * (eta - src))))))
    return CheckResult("conformal-mode", worst <= 1e-8, f"max abs deviation {worst:.2e}")


RECONSTRUCTION_PAIRS = (
    (ANCHOR, 2.0, 0.1),
    (ANCHOR, 2.0, 0.0),
    (0.7, 1.5, 0.3),
    (1.0, 3.0, 0.2),
    (2.0, ANCHOR, 0.1),
)


def check_reconstruction() -> CheckResult:
    worst = 0.0
    for model in normalized_pair(ANCHOR):
        for t_a, t_b, R in RECONSTRUCTION_PAIRS:
            ev_a, ev_b = SpacetimeEvent(t_a), SpacetimeEvent(t_b, (R, 0.0, 0.0))
            exact = commutator_theta_coefficient(model, ev_a, ev_b)
            worst = max(worst, abs(reconstruct_theta_part(model, ev_a, ev_b) / exact - 1.0))
    return CheckResult("commutator-reconstruction", worst <= 1e-3, f"max rel deviation {worst:.2e}")


def run_checks(fast: bool = False) -> list[CheckResult]:
    matter, de_sitter = normalized_pair(ANCHOR)
    checks: list[Callable[[], CheckResult]] = [
        check_ci,
        lambda: check_closed_vs_quadrature(matter, "matter"),
        lambda: check_closed_vs_quadrature(de_sitter, "lambda"),
        check_no_signaling,
        check_gapless_limits,
        check_timing,
        check_conformal_mode,
    ]
    if not fast:
        checks.append(check_reconstruction)
    results = []
    for check in checks:
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failing check
            name = getattr(check, "__name__", "check")
            results.append(CheckResult(name, False, f"raised {type(exc).__name__}: {exc}"))
    return results
