"""RBF-correlated Gaussian measurement field and its entropies.

Covariance entries decay as beta * exp(-d^2 / (2 lambda^2)) in the
pairwise sensor distance d. Joint entropy of a subset uses the Gaussian
log-determinant form; conditional entropy of one sensor given a set uses
the Schur complement of the local covariance, which is algebraically the
joint-entropy difference but numerically stabler and local.

Degeneracy policy (co-located or near-duplicate sensors): a failed
factorization gets one diagonal jitter of `variance_floor`; if it still
fails, pivots are clamped at `variance_floor`. Whenever the plain
factorization did not succeed cleanly, or the subset determinant
underflows float64, the returned joint entropy carries floored=True.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .errors import ConfigError
from .kernels import LN_2PI, active as _kernels
from .topology import Deployment

# log|Sigma| below this makes the determinant underflow a float64
_LOG_TINY = math.log(np.finfo(np.float64).tiny)


@dataclass(frozen=True)
class CorrelationParams:
    """RBF field parameters.

    beta is the per-sensor variance, lam the correlation length in meters
    (config files may spell it "lambda"). Entropies are reported in nats
    for entropy_log_base="natural" and in bits for "base-2"; the choice
    applies to every entropy in a run. The mean vector is stored only for
    completeness; entropies are mean-invariant.
    """

    beta: float = 1.0
    lam: float = 1.0
    variance_floor: float = 1e-12
    entropy_log_base: str = "natural"
    mean: np.ndarray | None = None

    def __post_init__(self):
        if self.beta <= 0:
            raise ConfigError(f"beta must be > 0, got {self.beta}")
        if self.lam <= 0:
            raise ConfigError(f"lambda must be > 0, got {self.lam}")
        if not 0 < self.variance_floor < self.beta:
            raise ConfigError("variance_floor must satisfy 0 < floor < beta")
        if self.entropy_log_base not in ("natural", "base-2"):
            raise ConfigError(
                f"entropy_log_base must be 'natural' or 'base-2', got {self.entropy_log_base!r}"
            )

    @property
    def inv_two_lam_sq(self) -> float:
        return 1.0 / (2.0 * self.lam * self.lam)

    @property
    def entropy_scale(self) -> float:
        """Factor converting nats to the configured unit."""
        return 1.0 if self.entropy_log_base == "natural" else 1.0 / math.log(2.0)


class EntropyValue(NamedTuple):
    value: float
    floored: bool


@dataclass(frozen=True)
class CovarianceModel:
    """RBF covariance over a deployment's sensor positions."""

    positions: np.ndarray  # (m, 2)
    params: CorrelationParams

    @property
    def m(self) -> int:
        return int(self.positions.shape[0])

    def submatrix(self, ids: np.ndarray) -> np.ndarray:
        pos = self.positions[ids]
        dx = pos[:, 0][:, None] - pos[:, 0][None, :]
        dy = pos[:, 1][:, None] - pos[:, 1][None, :]
        return self.params.beta * np.exp(-(dx * dx + dy * dy) * self.params.inv_two_lam_sq)

    @cached_property
    def sigma(self) -> np.ndarray:
        """Full m-by-m covariance; built on first access only."""
        s = self.submatrix(np.arange(self.m))
        return (s + s.T) / 2.0


def covariance(deployment: Deployment, params: CorrelationParams) -> CovarianceModel:
    return CovarianceModel(positions=deployment.sensor_positions, params=params)


def _as_id_array(model: CovarianceModel, ids: Iterable[int]) -> np.ndarray:
    arr = np.unique(np.asarray(list(ids), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= model.m):
        raise IndexError(f"sensor ids out of range 0..{model.m - 1}")
    return arr


def _chol_clamped_logdet(s: np.ndarray, floor: float) -> float:
    """Right-looking Cholesky with pivots clamped at `floor`; returns log-det."""
    a = s.copy()
    n = a.shape[0]
    logdet = 0.0
    for j in range(n):
        p = a[j, j]
        if p < floor:
            p = floor
        logdet += math.log(p)
        root = math.sqrt(p)
        col = a[j + 1 :, j] / root
        a[j + 1 :, j] = col
        a[j + 1 :, j + 1 :] -= col[:, None] * col[None, :]
    return logdet


def joint_entropy(model: CovarianceModel, subset: Iterable[int]) -> EntropyValue:
    """Joint differential entropy of the given sensors' measurements.

    K/2 + (K/2) log(2 pi) + (1/2) log|Sigma_subset| in the configured log
    base; the empty subset has entropy 0. floored=True marks values where
    the degeneracy policy engaged (see module docstring).
    """
    ids = _as_id_array(model, subset)
    k = ids.size
    if k == 0:
        return EntropyValue(0.0, False)
    floor = model.params.variance_floor
    s = model.submatrix(ids)
    floored = False
    logdet = None
    try:
        chol = np.linalg.cholesky(s)
    except np.linalg.LinAlgError:
        floored = True
        try:
            chol = np.linalg.cholesky(s + floor * np.eye(k))
        except np.linalg.LinAlgError:
            chol = None
            logdet = _chol_clamped_logdet(s + floor * np.eye(k), floor)
    if chol is not None:
        diag = np.diag(chol)
        raw = 2.0 * float(np.sum(np.log(diag)))
        if raw < _LOG_TINY:
            floored = True
            logdet = float(np.sum(np.log(np.maximum(diag * diag, floor))))
        else:
            logdet = raw
    nats = 0.5 * k * (1.0 + LN_2PI) + 0.5 * logdet
    return EntropyValue(nats * model.params.entropy_scale, floored)


def conditional_entropy(model: CovarianceModel, i: int, cond: Iterable[int]) -> float:
    """Entropy of sensor i's measurement given the `cond` sensors' ones.

    Schur-complement form with the conditional variance clamped below at
    `variance_floor`; an empty cond set gives the marginal entropy.
    """
    ids = _as_id_array(model, cond)
    if not 0 <= i < model.m:
        raise IndexError(f"unknown sensor id {i}")
    if np.any(ids == i):
        raise ValueError(f"sensor {i} cannot condition on itself")
    var = _kernels.cond_var(
        np.ascontiguousarray(model.positions[:, 0]),
        np.ascontiguousarray(model.positions[:, 1]),
        ids,
        ids.size,
        i,
        model.params.beta,
        model.params.inv_two_lam_sq,
        model.params.variance_floor,
    )
    nats = 0.5 * (1.0 + LN_2PI + math.log(var))
    return nats * model.params.entropy_scale
