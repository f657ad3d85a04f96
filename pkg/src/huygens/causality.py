"""Detector windows, their causal relationship, and signal-timing problems."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .cosmology import CosmologyModel, comoving_time, conformal_time, scale_factor
from .errors import DomainError, UnreachableError
from .numerics import expand_bracket, find_root

# Relative size of the switching window, compared with the emission-reception
# gap, above which the constant-proper-separation approximation is flagged.
PROPER_VALIDITY_RATIO = 0.01


@dataclass(frozen=True)
class DetectorConfig:
    """Point-like detector with sudden switching on ``[switch_on, switch_on + duration]``."""

    gap: float
    coupling: float = 1.0
    switch_on: float = 2.0 / 3.0
    duration: float = 0.01

    def __post_init__(self):
        if not self.gap >= 0:
            raise ValueError(f"detector gap must be non-negative, got {self.gap!r}")
        if not self.duration > 0:
            raise ValueError(f"switching duration must be positive, got {self.duration!r}")
        if not math.isfinite(self.switch_on):
            raise ValueError("switch-on time must be finite")

    @property
    def switch_off(self) -> float:
        return self.switch_on + self.duration

    def switching(self, t: float) -> float:
        """Characteristic function of the closed switching window."""
        return 1.0 if self.switch_on <= t <= self.switch_off else 0.0


@dataclass(frozen=True)
class Comoving:
    R: float

    def __post_init__(self):
        if not self.R >= 0:
            raise ValueError("comoving separation must be non-negative")


@dataclass(frozen=True)
class Proper:
    """Proper separation P, held at Bob's switch-on time."""

    P: float

    def __post_init__(self):
        if not self.P >= 0:
            raise ValueError("proper separation must be non-negative")


@dataclass(frozen=True)
class CommPair:
    alice: DetectorConfig
    bob: DetectorConfig
    separation: Comoving | Proper


class CausalClass(enum.Enum):
    B1_SPACELIKE = "B1_Spacelike"
    B2_ENTER_LIGHTCONE = "B2_EnterLightcone"
    B3_STRADDLE_LIGHTCONE = "B3_StraddleLightcone"
    B4_LIGHT_AND_TIMELIKE = "B4_LightAndTimelike"
    B5_STRICT_TIMELIKE = "B5_StrictTimelike"


@dataclass(frozen=True)
class ConformalWindows:
    eta_ia: float
    eta_fa: float
    eta_ib: float
    eta_fb: float
    R: float


def check_window(model: CosmologyModel, det: DetectorConfig) -> None:
    if model.is_matter and det.switch_on <= 0:
        raise DomainError(f"switch-on time {det.switch_on!r} precedes the Big Bang")


def comoving_separation(model: CosmologyModel, pair: CommPair) -> float:
    sep = pair.separation
    if isinstance(sep, Comoving):
        return float(sep.R)
    return comoving_from_proper(model, sep.P, pair.bob.switch_on)


def conformal_windows(model: CosmologyModel, pair: CommPair) -> ConformalWindows:
    check_window(model, pair.alice)
    check_window(model, pair.bob)
    return ConformalWindows(
        conformal_time(model, pair.alice.switch_on),
        conformal_time(model, pair.alice.switch_off),
        conformal_time(model, pair.bob.switch_on),
        conformal_time(model, pair.bob.switch_off),
        comoving_separation(model, pair),
    )


def classify_windows(w: ConformalWindows) -> CausalClass:
    """Place Bob's conformal window relative to Alice's future light band.

    The band is ``[eta_ia + R, eta_fa + R]``.  Both ends of Bob's window are
    labelled below / inside / above the band (inside is closed, so exact
    lightlike touching never yields B1 or B5).
    """
    band_lo = w.eta_ia + w.R
    band_hi = w.eta_fa + w.R

    def where(eta):
        if eta < band_lo:
            return 0
        if eta > band_hi:
            return 2
        return 1

    start, end = where(w.eta_ib), where(w.eta_fb)
    if start == 2:
        return CausalClass.B5_STRICT_TIMELIKE
    if end == 0:
        return CausalClass.B1_SPACELIKE
    if start == 0:
        return CausalClass.B2_ENTER_LIGHTCONE if end == 1 else CausalClass.B3_STRADDLE_LIGHTCONE
    # Bob starts inside the band
    return CausalClass.B4_LIGHT_AND_TIMELIKE if end == 2 else CausalClass.B3_STRADDLE_LIGHTCONE


def classify(model: CosmologyModel, pair: CommPair) -> CausalClass:
    return classify_windows(conformal_windows(model, pair))


def min_timelike_switch_on_comoving(model: CosmologyModel, t_ia: float, delta: float, R: float) -> float:
    """Earliest Bob switch-on with strict timelike contact at fixed comoving R."""
    if R < 0:
        raise DomainError("comoving separation must be non-negative")
    eta = conformal_time(model, t_ia + delta) + R
    if not model.is_matter and eta >= 0:
        raise UnreachableError(
            f"R={R!r} exceeds the event horizon of Alice's switch-off; no timelike contact is possible"
        )
    return comoving_time(model, eta)


def max_timelike_comoving_separation(model: CosmologyModel, t_ia: float, delta: float, t_ib: float) -> float:
    """Largest comoving R keeping Bob's switch-on strictly inside Alice's future."""
    t_fa = t_ia + delta
    if not t_ib > t_fa:
        raise DomainError(f"Bob's switch-on {t_ib!r} must follow Alice's switch-off {t_fa!r}")
    return conformal_time(model, t_ib) - conformal_time(model, t_fa)


def min_timelike_switch_on_proper(
    model: CosmologyModel, t_ia: float, delta: float, P: float, xtol: float = 1e-12
) -> float:
    """Earliest Bob switch-on with strict timelike contact at proper separation P.

    Solves eta(T) = eta(T_fA) + P / a(T).  The residual is increasing in T for
    both backgrounds, so the root is unique and found by bracketing.
    """
    if P < 0:
        raise DomainError("proper separation must be non-negative")
    t_fa = t_ia + delta
    eta_fa = conformal_time(model, t_fa)
    if P == 0:
        return t_fa

    def residual(t):
        return conformal_time(model, t) - eta_fa - P / scale_factor(model, t)

    rate = 1.0 if model.is_matter else 1.0 + 1.0 / model.sqrt_lambda
    lo = t_fa
    hi = t_fa + 10.0 * (1.0 + P) * rate
    try:
        lo, hi = expand_bracket(residual, lo, hi)
    except DomainError as exc:
        raise UnreachableError(f"no timelike contact reachable at P={P!r}") from exc
    return find_root(residual, lo, hi, xtol=xtol)


def comoving_from_proper(model: CosmologyModel, P: float, t_ib: float) -> float:
    """R = P / a(T_iB): the comoving stand-in for a constant proper separation."""
    if P < 0:
        raise DomainError("proper separation must be non-negative")
    return P / scale_factor(model, t_ib)


def proper_validity_warnings(pair: CommPair) -> list[str]:
    """Warnings for the constant-proper-separation approximation, if it applies."""
    if not isinstance(pair.separation, Proper):
        return []
    gap = pair.bob.switch_on - pair.alice.switch_off
    window = max(pair.alice.duration, pair.bob.duration)
    if gap <= 0 or window > PROPER_VALIDITY_RATIO * gap:
        return [
            "constant proper separation approximation: switching duration "
            f"{window:.6g} is not small against the emission-reception gap {gap:.6g}"
        ]
    return []
