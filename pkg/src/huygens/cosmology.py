"""Spatially flat FRW backgrounds: dust (w=0) and cosmological constant (w=-1).

Times are comoving (cosmological) times; conformal time is always derived
on demand from the closed forms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


class Kind(enum.Enum):
    MATTER = "matter"
    LAMBDA = "lambda"

    @property
    def w(self) -> float:
        """Equation-of-state parameter p = w * rho."""
        return 0.0 if self is Kind.MATTER else -1.0


@dataclass(frozen=True)
class CosmologyModel:
    """One of the two supported backgrounds plus its integration constants.

    Matter: a(t) = (9 kappa1 t^2)^(1/3), eta(t) = (3 t / kappa1)^(1/3), t > 0.
    Lambda: a(t) = kappa2 exp(H t), eta(t) = -exp(-H t) / (H kappa2), H = sqrt|Lambda|.
    """

    kind: Kind
    kappa1: float | None = None
    kappa2: float | None = None
    sqrt_lambda: float | None = None

    def __post_init__(self):
        if self.kind is Kind.MATTER:
            if self.kappa1 is None or not self.kappa1 > 0:
                raise ValueError("matter model needs kappa1 > 0")
        else:
            if self.kappa2 is None or not self.kappa2 > 0:
                raise ValueError("lambda model needs kappa2 > 0")
            if self.sqrt_lambda is None or not self.sqrt_lambda > 0:
                raise ValueError("lambda model needs sqrt_lambda > 0")

    @classmethod
    def matter(cls, kappa1: float) -> "CosmologyModel":
        return cls(Kind.MATTER, kappa1=float(kappa1))

    @classmethod
    def de_sitter(cls, kappa2: float, sqrt_lambda: float) -> "CosmologyModel":
        return cls(Kind.LAMBDA, kappa2=float(kappa2), sqrt_lambda=float(sqrt_lambda))

    @property
    def is_matter(self) -> bool:
        return self.kind is Kind.MATTER

    @property
    def lambda_abs(self) -> float:
        """|Lambda| for the de Sitter model."""
        if self.is_matter:
            raise DomainError("matter model has no cosmological constant")
        return self.sqrt_lambda * self.sqrt_lambda

    def with_sqrt_lambda(self, sqrt_lambda: float) -> "CosmologyModel":
        """Same kappa2, different expansion rate."""
        if self.is_matter:
            raise DomainError("sqrt_lambda only applies to the lambda model")
        return CosmologyModel.de_sitter(self.kappa2, sqrt_lambda)


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def _check_time(model: CosmologyModel, t):
    t = np.asarray(t, dtype=float)
    if model.is_matter and np.any(t <= 0):
        raise DomainError("matter cosmology is only defined for t > 0")
    if not np.all(np.isfinite(t)):
        raise DomainError("time must be finite")
    return t


def scale_factor(model: CosmologyModel, t):
    t = _check_time(model, t)
    if model.is_matter:
        a = np.cbrt(9.0 * model.kappa1 * t * t)
    else:
        a = model.kappa2 * np.exp(model.sqrt_lambda * t)
    return _scalar_or_array(a)


def hubble_rate(model: CosmologyModel, t):
    """adot / a."""
    t = _check_time(model, t)
    if model.is_matter:
        h = 2.0 / (3.0 * t)
    else:
        h = np.full_like(t, model.sqrt_lambda)
    return _scalar_or_array(h)


def conformal_time(model: CosmologyModel, t):
    t = _check_time(model, t)
    if model.is_matter:
        eta = np.cbrt(3.0 * t / model.kappa1)
    else:
        h = model.sqrt_lambda
        eta = -np.exp(-h * t) / (h * model.kappa2)
    return _scalar_or_array(eta)


def comoving_time(model: CosmologyModel, eta):
    """Inverse of :func:`conformal_time`."""
    eta = np.asarray(eta, dtype=float)
    if model.is_matter:
        if np.any(eta <= 0):
            raise DomainError("matter conformal time must be positive")
        t = model.kappa1 * eta ** 3 / 3.0
    else:
        if np.any(eta >= 0):
            raise DomainError("lambda conformal time must be negative")
        h = model.sqrt_lambda
        t = -np.log(-h * model.kappa2 * eta) / h
    return _scalar_or_array(t)


def conformal_range(model: CosmologyModel) -> tuple[float, float]:
    """Open interval of attainable conformal times."""
    return (0.0, math.inf) if model.is_matter else (-math.inf, 0.0)


def horizon_scale(model: CosmologyModel, t):
    """a(t) |eta(t)|: particle horizon 3t for matter, Hubble radius 1/H for Lambda."""
    t = _check_time(model, t)
    if model.is_matter:
        return _scalar_or_array(3.0 * t)
    return _scalar_or_array(np.full_like(t, 1.0 / model.sqrt_lambda))


def proper_distance(model: CosmologyModel, R, t):
    if np.any(np.asarray(R) < 0):
        raise DomainError("comoving separation must be non-negative")
    return _scalar_or_array(np.asarray(R, dtype=float) * scale_factor(model, t))


def normalized_pair(t_anchor: float = 2.0 / 3.0) -> tuple[CosmologyModel, CosmologyModel]:
    """Matter and Lambda models with equal scale factor (=1) and expansion rate at ``t_anchor``.

    The matter expansion rate at the anchor is fixed to 2/(3 t_anchor); the
    Lambda model copies it, so both adot(t_anchor) equal 1 exactly when
    t_anchor = 2/3 (kappa1 = 1/4, kappa2 = e^{-2/3}, sqrt|Lambda| = 1).
    """
    t_anchor = float(t_anchor)
    if not t_anchor > 0:
        raise DomainError("normalization anchor must be positive")
    kappa1 = 1.0 / (9.0 * t_anchor * t_anchor)
    h = 2.0 / (3.0 * t_anchor)
    kappa2 = math.exp(-h * t_anchor)
    return CosmologyModel.matter(kappa1), CosmologyModel.de_sitter(kappa2, h)
