"""Leading-order Shannon capacity of the detector channel.

Every specialised capacity is composed from :func:`channel_capacity` and a
timelike-integral closed form, so the prefactors are consistent by
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .causality import CausalClass, CommPair, DetectorConfig, classify, proper_validity_warnings
from .cosmology import CosmologyModel
from .errors import DomainError
from .signaling import (
    DetectorState,
    Method,
    SignalingResult,
    i_theta_closed_lambda,
    i_theta_closed_matter,
    receiver_state,
    s2 as signaling_s2,
)
from .numerics import DEFAULT_QUAD, QuadratureSpec

# above this the O(lambda^6) remainder can no longer be trusted
PERTURBATIVE_LIMIT = 0.1


@dataclass(frozen=True)
class CapacityResult:
    capacity_bits: float
    s2_used: float
    prefactor: float
    method: Method
    err_est: float
    warnings: tuple[str, ...] = field(default=())


def channel_capacity(
    s2: float,
    state_b: DetectorState,
    lambda_a: float,
    lambda_b: float,
    s2_err: float = 0.0,
    method: Method = Method.CLOSED_FORM,
) -> CapacityResult:
    """C = (lA^2 lB^2 / (8 ln 2)) (S2 / (|alpha_B| |beta_B|))^2 bits per use."""
    coherence = abs(state_b.alpha) * abs(state_b.beta)
    if coherence == 0:
        raise DomainError("receiver state has no coherence; capacity undefined at this order")
    prefactor = (lambda_a * lambda_b) ** 2 / (8.0 * math.log(2.0) * coherence * coherence)
    cap = prefactor * s2 * s2
    err = prefactor * (2.0 * abs(s2) * s2_err + s2_err * s2_err)
    warnings = ()
    if cap > PERTURBATIVE_LIMIT:
        warnings = (f"capacity {cap:.3g} exceeds {PERTURBATIVE_LIMIT}: leading-order expression unreliable",)
    return CapacityResult(cap, s2, prefactor, method, err, warnings)


def _closed_capacity(theta: float, alice: DetectorConfig, bob: DetectorConfig) -> CapacityResult:
    return channel_capacity(theta / (4.0 * math.pi), receiver_state(), alice.coupling, bob.coupling)


def capacity_matter_closed(
    alice: DetectorConfig, bob: DetectorConfig, approximate: bool = False
) -> CapacityResult:
    """Dust-background capacity for strict timelike contact.

    Equals lA^2 lB^2 / (2592 pi^2 ln 2) (dCi_A)^2 (dCi_B)^2; gapless detectors
    use squared logarithms, ``approximate`` the short-window form.
    """
    return _closed_capacity(i_theta_closed_matter(alice, bob, approximate), alice, bob)


def capacity_lambda_closed(alice: DetectorConfig, bob: DetectorConfig, sqrt_lambda: float) -> CapacityResult:
    """de Sitter capacity for strict timelike contact; grows as Lambda^2, no decay in T_iB."""
    return _closed_capacity(i_theta_closed_lambda(alice, bob, sqrt_lambda), alice, bob)


@dataclass(frozen=True)
class Evaluation:
    """Everything a single-point run reports."""

    signal: SignalingResult
    capacity: CapacityResult
    warnings: tuple[str, ...]


def evaluate(
    model: CosmologyModel,
    pair: CommPair,
    state_a: DetectorState | None = None,
    state_b: DetectorState | None = None,
    method: str = "auto",
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> Evaluation:
    """Classify, compute S2 by the appropriate route, and turn it into a capacity."""
    state_b = state_b or receiver_state()
    sig = signaling_s2(model, pair, state_a, state_b, method=method, quad=quad)
    cap = channel_capacity(sig.s2, state_b, pair.alice.coupling, pair.bob.coupling, sig.err_est, sig.method)
    warnings = list(proper_validity_warnings(pair)) + list(cap.warnings)
    if method == "closed" and sig.method is Method.QUADRATURE:
        warnings.append(
            f"closed form requested but contact is {sig.causal_class.value}; evaluated by quadrature"
        )
    return Evaluation(sig, cap, tuple(warnings))


def require_strict_timelike(model: CosmologyModel, pair: CommPair) -> None:
    cls = classify(model, pair)
    if cls is not CausalClass.B5_STRICT_TIMELIKE:
        raise DomainError(f"closed forms need strict timelike contact, got {cls.value}")
