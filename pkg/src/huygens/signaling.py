"""Leading-order signaling estimator S2 between two comoving point-like detectors.

All integrals run in comoving time.  The conformal-time measure
d eta / |eta| becomes dt / (a |eta|), which is 1/(3t) for matter and
sqrt|Lambda| for the de Sitter background.

Only Alice-to-Bob (retarded) contributions are kept: when Bob's window lies
in Alice's past, Alice's coupling cannot change Bob's reduced state.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .causality import (
    CausalClass,
    CommPair,
    DetectorConfig,
    classify_windows,
    conformal_windows,
)
from .cosmology import CosmologyModel, comoving_time, conformal_time, horizon_scale, scale_factor
from .errors import DomainError
from .numerics import DEFAULT_QUAD, QuadratureSpec, cosine_integral, integrate_1d, integrate_2d_clipped, period_points

# absolute accuracy of one cosine-integral evaluation
CI_ABS_ERROR = 1e-14


@dataclass(frozen=True)
class DetectorState:
    """alpha |e> + beta |g>."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"detector state is not normalized (|alpha|^2+|beta|^2 = {norm!r})")

    @property
    def coherence(self) -> complex:
        """alpha* beta."""
        return self.alpha.conjugate() * self.beta

    def with_phase(self, phi: float) -> "DetectorState":
        p = cmath.exp(1j * phi)
        return DetectorState(p * self.alpha, p * self.beta)

    def close_to(self, other: "DetectorState", tol: float = 1e-12) -> bool:
        return abs(self.alpha - other.alpha) <= tol and abs(self.beta - other.beta) <= tol


def sender_state() -> DetectorState:
    """(|e> - |g>)/sqrt 2, Alice's default preparation."""
    s = 1.0 / math.sqrt(2.0)
    return DetectorState(complex(s), complex(-s))


def receiver_state() -> DetectorState:
    """(|e> + i|g>)/sqrt 2, Bob's default preparation."""
    s = 1.0 / math.sqrt(2.0)
    return DetectorState(complex(s), complex(0.0, s))


class Method(enum.Enum):
    CLOSED_FORM = "ClosedForm"
    QUADRATURE = "Quadrature"


@dataclass(frozen=True)
class SignalingResult:
    """S2 = (i_delta + i_theta) / (4 pi).

    For the default preparations i_delta and i_theta are the light-cone and
    timelike integrals themselves; for other states they are the same
    integrals with the state-dependent weights, scaled so the relation holds.
    """

    i_delta: float
    i_theta: float
    s2: float
    causal_class: CausalClass
    err_est: float
    method: Method


# --- closed forms ----------------------------------------------------------


def _matter_factor(omega: float, t: float, delta: float, approximate: bool) -> float:
    if t <= 0:
        raise DomainError(f"matter closed form needs positive switch-on times, got {t!r}")
    if approximate:
        return delta * math.cos(omega * t) / t
    if omega == 0:
        return math.log1p(delta / t)
    return cosine_integral(omega * (t + delta)) - cosine_integral(omega * t)


def i_theta_closed_matter(alice: DetectorConfig, bob: DetectorConfig, approximate: bool = False) -> float:
    """Timelike integral for dust, valid only for strict timelike contact.

    (1/9) [Ci(W_A (T_A + D_A)) - Ci(W_A T_A)] [Ci(W_B (T_B + D_B)) - Ci(W_B T_B)],
    with each bracket replaced by log((T + D)/T) for a gapless detector.
    ``approximate`` gives the short-window form D^2 cos(W_A T_A) cos(W_B T_B) / (9 T_A T_B).
    """
    fa = _matter_factor(alice.gap, alice.switch_on, alice.duration, approximate)
    fb = _matter_factor(bob.gap, bob.switch_on, bob.duration, approximate)
    return fa * fb / 9.0


def _lambda_factor(omega: float, t: float, delta: float, sqrt_lambda: float) -> float:
    if omega == 0:
        return sqrt_lambda * delta
    return 2.0 * sqrt_lambda / omega * math.sin(0.5 * omega * delta) * math.cos(omega * (t + 0.5 * delta))


def i_theta_closed_lambda(alice: DetectorConfig, bob: DetectorConfig, sqrt_lambda: float) -> float:
    """Timelike integral for the de Sitter background (strict timelike contact only).

    4|Lambda| / (W_A W_B) sin(W_A D/2) sin(W_B D/2) cos(W_A (T_A + D/2)) cos(W_B (T_B + D/2));
    gapless detectors contribute sqrt|Lambda| * D in place of their factor.
    """
    if not sqrt_lambda > 0:
        raise DomainError("sqrt_lambda must be positive")
    fa = _lambda_factor(alice.gap, alice.switch_on, alice.duration, sqrt_lambda)
    fb = _lambda_factor(bob.gap, bob.switch_on, bob.duration, sqrt_lambda)
    return fa * fb


def i_theta_closed(model: CosmologyModel, pair: CommPair) -> float:
    if model.is_matter:
        return i_theta_closed_matter(pair.alice, pair.bob)
    return i_theta_closed_lambda(pair.alice, pair.bob, model.sqrt_lambda)


def _closed_error(model: CosmologyModel, pair: CommPair) -> float:
    if not model.is_matter:
        return 0.0
    fa = abs(_matter_factor(pair.alice.gap, pair.alice.switch_on, pair.alice.duration, False))
    fb = abs(_matter_factor(pair.bob.gap, pair.bob.switch_on, pair.bob.duration, False))
    err_a = 0.0 if pair.alice.gap == 0 else 2 * CI_ABS_ERROR
    err_b = 0.0 if pair.bob.gap == 0 else 2 * CI_ABS_ERROR
    return (fa * err_b + fb * err_a + err_a * err_b) / 9.0


# --- quadrature ------------------------------------------------------------

Weight = Callable[[np.ndarray], np.ndarray]


def _cos_weight(omega: float) -> Weight:
    return lambda t: np.cos(omega * t)


def _measure(model: CosmologyModel, t):
    """1 / (a |eta|) in comoving time."""
    return 1.0 / horizon_scale(model, t)


def _timelike_1d(model, det: DetectorConfig, weight: Weight, quad: QuadratureSpec):
    lo, hi = det.switch_on, det.switch_off
    return integrate_1d(
        lambda t: weight(t) * _measure(model, t), lo, hi, quad, period_points(lo, hi, det.gap)
    )


def _light_band_times(model, w, bob: DetectorConfig):
    """Bob's comoving sub-window lying on Alice's future light band, or None."""
    lo_eta = max(w.eta_ib, w.eta_ia + w.R)
    hi_eta = min(w.eta_fb, w.eta_fa + w.R)
    if hi_eta <= lo_eta:
        return None
    if not model.is_matter and hi_eta >= 0:
        raise DomainError("light band beyond the de Sitter future boundary")
    lo = bob.switch_on if lo_eta == w.eta_ib else comoving_time(model, lo_eta)
    hi = bob.switch_off if hi_eta == w.eta_fb else comoving_time(model, hi_eta)
    return lo, hi


def _delta_integral(model, pair, w, weight_a: Weight, weight_b: Weight, quad):
    """(1/R) int d(eta_B) wA(t(eta_B - R)) wB(t(eta_B)) over the light band."""
    span = _light_band_times(model, w, pair.bob)
    if span is None:
        return 0.0, 0.0
    if w.R == 0:
        raise DomainError("coincident worldlines with lightlike overlap: the light-cone term is singular")
    R = w.R
    t_lo, t_hi = span

    def integrand(t2):
        t1 = comoving_time(model, conformal_time(model, t2) - R)
        return weight_a(t1) * weight_b(t2) / scale_factor(model, t2)

    val, err = integrate_1d(integrand, t_lo, t_hi, quad, period_points(t_lo, t_hi, max(pair.alice.gap, pair.bob.gap)))
    return val / R, err / R


def _retarded_alice_limit(model, w, t_fa: float):
    """Latest Alice time causally preceding Bob's time t2: min(T_fA, t(eta(t2) - R))."""

    def limit(t2: float) -> float:
        eta = conformal_time(model, t2) - w.R
        if model.is_matter and eta <= 0:
            return -math.inf
        return min(t_fa, comoving_time(model, eta))

    return limit


def _theta_integral(model, pair, w, weight_a: Weight, weight_b: Weight, quad, factorize: bool):
    alice, bob = pair.alice, pair.bob
    cls = classify_windows(w)
    if cls is CausalClass.B1_SPACELIKE:
        return 0.0, 0.0
    if factorize and cls is CausalClass.B5_STRICT_TIMELIKE:
        va, ea = _timelike_1d(model, alice, weight_a, quad.tightened())
        vb, eb = _timelike_1d(model, bob, weight_b, quad.tightened())
        return va * vb, abs(va) * eb + abs(vb) * ea + ea * eb

    def f(t1, t2):
        return weight_a(t1) * _measure(model, t1) * (weight_b(t2) * _measure(model, t2))

    # clip kinks: where Bob's past light cone enters and leaves Alice's window
    kinks = []
    for eta in (w.eta_ia + w.R, w.eta_fa + w.R):
        if (model.is_matter and eta > 0) or (not model.is_matter and eta < 0):
            kinks.append(comoving_time(model, eta))
    outer_pts = kinks + period_points(bob.switch_on, bob.switch_off, bob.gap)
    return integrate_2d_clipped(
        f,
        (bob.switch_on, bob.switch_off),
        _retarded_alice_limit(model, w, alice.switch_off),
        alice.switch_on,
        quad,
        outer_points=outer_pts,
        inner_points=lambda _y, lo, hi: period_points(lo, hi, alice.gap),
    )


def i_delta(model: CosmologyModel, pair: CommPair, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Light-cone integral; zero unless Bob's window meets Alice's light band."""
    w = conformal_windows(model, pair)
    return _delta_integral(model, pair, w, _cos_weight(pair.alice.gap), _cos_weight(pair.bob.gap), quad)[0]


def i_theta(
    model: CosmologyModel, pair: CommPair, quad: QuadratureSpec = DEFAULT_QUAD, factorize: bool = True
) -> float:
    """Timelike-interior integral by quadrature.

    For strict timelike contact it factorizes into two 1-D integrals; pass
    ``factorize=False`` to force the clipped 2-D route.
    """
    w = conformal_windows(model, pair)
    weights = _cos_weight(pair.alice.gap), _cos_weight(pair.bob.gap)
    return _theta_integral(model, pair, w, *weights, quad, factorize)[0]


def s2(
    model: CosmologyModel,
    pair: CommPair,
    state_a: DetectorState | None = None,
    state_b: DetectorState | None = None,
    method: str = "auto",
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> SignalingResult:
    """Signaling estimator for arbitrary initial detector states.

    ``method`` is ``"auto"`` (closed form when the states are the default
    preparations and contact is strictly timelike), ``"closed"`` (same, but
    falls back to quadrature outside that regime) or ``"quadrature"`` (the
    full clipped double integral plus the light-cone integral).
    """
    if method not in ("auto", "closed", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    state_a = state_a or sender_state()
    state_b = state_b or receiver_state()
    w = conformal_windows(model, pair)
    cls = classify_windows(w)
    default_states = state_a.close_to(sender_state()) and state_b.close_to(receiver_state())

    if method != "quadrature" and default_states and cls is CausalClass.B5_STRICT_TIMELIKE:
        theta = i_theta_closed(model, pair)
        return SignalingResult(
            0.0, theta, theta / (4.0 * math.pi), cls, _closed_error(model, pair) / (4.0 * math.pi), Method.CLOSED_FORM
        )

    # S2 = (1/pi) [delta part + theta part] with weights
    # Re(zA e^{i W_A t}) and -Im(zB e^{i W_B t}), z = alpha* beta.
    za, zb = state_a.coherence, state_b.coherence
    wa_gap, wb_gap = pair.alice.gap, pair.bob.gap

    def weight_a(t):
        return za.real * np.cos(wa_gap * t) - za.imag * np.sin(wa_gap * t)

    def weight_b(t):
        return -(zb.imag * np.cos(wb_gap * t) + zb.real * np.sin(wb_gap * t))

    d_val, d_err = _delta_integral(model, pair, w, weight_a, weight_b, quad)
    t_val, t_err = _theta_integral(model, pair, w, weight_a, weight_b, quad, factorize=False)
    value = (d_val + t_val) / math.pi
    return SignalingResult(4.0 * d_val, 4.0 * t_val, value, cls, (d_err + t_err) / math.pi, Method.QUADRATURE)
