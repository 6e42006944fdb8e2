"""Monte Carlo quadrature sampling as an independent check on analytic variances.

Draws mimic homodyne records: zero-mean Gaussian outcomes with the state's
covariance.  Sampling is deterministic per seed (PCG64); callers running
batches in parallel must hand out distinct seeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianState, qnl_variance

__all__ = [
    "SampleBatch",
    "VarianceEstimate",
    "sample_quadratures",
    "estimate_variance",
    "estimate_db",
]


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Quadrature outcomes, one row per draw, columns (x_1..x_n, p_1..p_n)."""

    seed: int
    samples: np.ndarray

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]


def sample_quadratures(state: GaussianState, n: int, seed: int) -> SampleBatch:
    """Draw ``n`` outcomes from the state via a triangular factor of the covariance."""
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    try:
        factor = np.linalg.cholesky(state.cov)
    except np.linalg.LinAlgError as exc:
        raise ValueError("covariance must be positive definite for sampling") from exc
    rng = np.random.Generator(np.random.PCG64(seed))
    z = rng.standard_normal(size=(n, state.cov.shape[0]))
    return SampleBatch(seed=seed, samples=z @ factor.T)


@dataclass(frozen=True)
class VarianceEstimate:
    estimate: float
    std_error: float


def estimate_variance(batch: SampleBatch, coeffs: np.ndarray) -> VarianceEstimate:
    """Unbiased sample variance of the projected outcomes.

    The standard error uses the Gaussian identity
    ``se = estimate * sqrt(2 / (n - 1))``.
    """
    if batch.n_samples < 2:
        raise ValueError("variance estimation needs at least two samples")
    projected = batch.samples @ np.asarray(coeffs, dtype=float)
    estimate = float(np.var(projected, ddof=1))
    std_error = estimate * np.sqrt(2.0 / (batch.n_samples - 1))
    return VarianceEstimate(estimate=estimate, std_error=float(std_error))


def estimate_db(batch: SampleBatch, coeffs: np.ndarray) -> float:
    """Estimated noise power relative to the vacuum reference, in dB."""
    estimate = estimate_variance(batch, coeffs).estimate
    qnl = qnl_variance(coeffs)
    if estimate <= 0 or qnl <= 0:
        raise ValueError("dB estimate needs positive variance and reference")
    return float(10.0 * np.log10(estimate / qnl))
