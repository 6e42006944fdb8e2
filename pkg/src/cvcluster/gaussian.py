"""Covariance-matrix simulation of squeezed light through passive networks.

Quadratures are x = (a + a^dag)/2 and p = (a - a^dag)/2i, so the vacuum
variance of every quadrature is 1/4.  Covariance matrices are ordered
(x_1..x_n, p_1..p_n) and means are fixed at zero.  States are immutable
values; every function returns a new state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import is_unitary

__all__ = [
    "VACUUM_VARIANCE",
    "SqueezePattern",
    "GaussianState",
    "LossModel",
    "ExcessNoiseTerm",
    "NullifierNoise",
    "vacuum_state",
    "input_covariance",
    "omega",
    "symplectic_from_unitary",
    "evolve",
    "apply_loss",
    "combination_vector",
    "quadrature_variance",
    "qnl_variance",
    "variance_db",
    "excess_noise_decomposition",
]

VACUUM_VARIANCE = 0.25

_ORIENTATIONS = ("x", "p")


@dataclass(frozen=True)
class SqueezePattern:
    """Per-mode squeezing orientation ('x' or 'p') and magnitude r >= 0."""

    orientations: tuple[str, ...]
    rs: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.orientations) != len(self.rs):
            raise ValueError("orientation and r lists must have equal length")
        for o in self.orientations:
            if o not in _ORIENTATIONS:
                raise ValueError(f"orientation must be 'x' or 'p', got {o!r}")
        for r in self.rs:
            if not np.isfinite(r) or r < 0:
                raise ValueError(f"squeezing parameter must be finite and >= 0, got {r}")

    @property
    def n(self) -> int:
        return len(self.orientations)

    @classmethod
    def alternating(cls, n: int, r: float, first: str = "x") -> "SqueezePattern":
        """x,p,x,p,... pattern (or p,x,... with first='p'), equal r throughout."""
        second = "p" if first == "x" else "x"
        orientations = tuple(first if j % 2 == 0 else second for j in range(n))
        return cls(orientations=orientations, rs=(float(r),) * n)

    @classmethod
    def uniform(cls, n: int, r: float, orientation: str = "p") -> "SqueezePattern":
        return cls(orientations=(orientation,) * n, rs=(float(r),) * n)

    def with_r(self, r: float) -> "SqueezePattern":
        """Same orientations with every magnitude replaced by ``r``."""
        return SqueezePattern(orientations=self.orientations, rs=(float(r),) * self.n)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Zero-mean Gaussian state given by its 2n x 2n quadrature covariance."""

    cov: np.ndarray

    def __post_init__(self) -> None:
        cov = np.asarray(self.cov, dtype=float)
        object.__setattr__(self, "cov", cov)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ValueError(f"covariance must be 2n x 2n, got shape {cov.shape}")
        if not np.allclose(cov, cov.T, atol=1e-10):
            raise ValueError("covariance must be symmetric")
        n = cov.shape[0] // 2
        # Uncertainty bound: cov + (i/4) Omega must be positive semidefinite.
        bound = cov + 0.25j * omega(n)
        if np.min(np.linalg.eigvalsh(bound)) < -1e-10:
            raise ValueError("covariance violates the uncertainty bound")

    @property
    def n(self) -> int:
        return self.cov.shape[0] // 2


def vacuum_state(n: int) -> GaussianState:
    return GaussianState(cov=np.eye(2 * n) * VACUUM_VARIANCE)


def input_covariance(pattern: SqueezePattern) -> GaussianState:
    """Diagonal covariance of independent squeezed inputs.

    An x-squeezed mode has Var x = exp(-2r)/4 and Var p = exp(+2r)/4; a
    p-squeezed mode the reverse.
    """
    n = pattern.n
    diag = np.empty(2 * n)
    for j, (orientation, r) in enumerate(zip(pattern.orientations, pattern.rs)):
        squeezed = VACUUM_VARIANCE * np.exp(-2.0 * r)
        anti = VACUUM_VARIANCE * np.exp(2.0 * r)
        if orientation == "x":
            diag[j], diag[n + j] = squeezed, anti
        else:
            diag[j], diag[n + j] = anti, squeezed
    return GaussianState(cov=np.diag(diag))


def omega(n: int) -> np.ndarray:
    """Antisymmetric form [[0, I], [-I, 0]] in (x.., p..) ordering."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_from_unitary(u: np.ndarray) -> np.ndarray:
    """2n x 2n quadrature action [[X, -Y], [Y, X]] of a mode unitary X + iY."""
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, atol=1e-10):
        raise ValueError("mode transformation must be unitary")
    x, y = u.real, u.imag
    return np.block([[x, -y], [y, x]])


def evolve(state: GaussianState, s: np.ndarray) -> GaussianState:
    """Apply a symplectic quadrature map: cov -> s @ cov @ s.T."""
    s = np.asarray(s, dtype=float)
    if s.shape != state.cov.shape:
        raise ValueError(
            f"transformation shape {s.shape} does not match state shape {state.cov.shape}"
        )
    n = state.n
    form = omega(n)
    if np.max(np.abs(s @ form @ s.T - form)) > 1e-10:
        raise ValueError("transformation is not symplectic")
    cov = s @ state.cov @ s.T
    return GaussianState(cov=(cov + cov.T) / 2.0)


@dataclass(frozen=True)
class LossModel:
    """Per-mode power efficiency in [0, 1] (transmission times detection)."""

    etas: tuple[float, ...]

    def __post_init__(self) -> None:
        for eta in self.etas:
            if not 0.0 <= eta <= 1.0:
                raise ValueError(f"efficiency {eta} outside [0, 1]")

    @classmethod
    def uniform(cls, n: int, eta: float) -> "LossModel":
        return cls(etas=(float(eta),) * n)


def apply_loss(state: GaussianState, loss: LossModel) -> GaussianState:
    """Pure-loss channel: cov -> D cov D + (I - D^2)/4 with D = diag(sqrt(eta))."""
    if len(loss.etas) != state.n:
        raise ValueError("loss model and state mode counts differ")
    d = np.sqrt(np.concatenate([loss.etas, loss.etas]))
    cov = state.cov * np.outer(d, d) + np.diag((1.0 - d * d) * VACUUM_VARIANCE)
    return GaussianState(cov=cov)


def combination_vector(n: int, terms) -> np.ndarray:
    """Coefficient vector over (x_1..x_n, p_1..p_n) from (mode, quad, coeff) triples."""
    c = np.zeros(2 * n)
    for mode, quadrature, coeff in terms:
        if not 1 <= mode <= n:
            raise ValueError(f"mode {mode} out of range 1..{n}")
        if quadrature == "x":
            c[mode - 1] += coeff
        elif quadrature == "p":
            c[n + mode - 1] += coeff
        else:
            raise ValueError(f"quadrature must be 'x' or 'p', got {quadrature!r}")
    return c


def quadrature_variance(state: GaussianState, coeffs: np.ndarray) -> float:
    """Variance of the linear combination c . (x.., p..)."""
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (state.cov.shape[0],):
        raise ValueError(f"coefficient length {c.shape} does not match state")
    return float(c @ state.cov @ c)


def qnl_variance(coeffs: np.ndarray) -> float:
    """Vacuum-level variance of a combination; the shot-noise reference."""
    c = np.asarray(coeffs, dtype=float)
    return float(c @ c) * VACUUM_VARIANCE


def variance_db(v: float, qnl: float) -> float:
    """Noise power 10*log10(v / qnl) relative to the vacuum reference."""
    if v <= 0 or qnl <= 0:
        raise ValueError("variances must be positive for a dB ratio")
    return 10.0 * np.log10(v / qnl)


@dataclass(frozen=True)
class ExcessNoiseTerm:
    mode: int
    quadrature: str
    coefficient: float


@dataclass(frozen=True)
class NullifierNoise:
    """One output combination expressed in scaled input vacuum operators.

    ``squeezed`` terms multiply exp(-r) factors, ``anti`` terms exp(+r); for a
    correctly compiled cluster network the anti side vanishes.  ``variance``
    is reconstructed from the full coefficient set and matches the covariance
    route to better than 1e-10.
    """

    squeezed: tuple[ExcessNoiseTerm, ...]
    anti: tuple[ExcessNoiseTerm, ...]
    variance: float
    max_anti_coefficient: float


def excess_noise_decomposition(
    u: np.ndarray, pattern: SqueezePattern, combinations
) -> list[NullifierNoise]:
    """Rewrite output combinations in terms of scaled input vacuum operators.

    Each combination is a coefficient vector over the output quadratures.
    Pulling it back through the network gives input-side coefficients; each
    input quadrature is a vacuum operator scaled by exp(-r) (the squeezed
    quadrature of its mode) or exp(+r) (the conjugate one).
    """
    s = symplectic_from_unitary(u)
    n = pattern.n
    report_tol = 1e-12
    out = []
    for c in combinations:
        w = s.T @ np.asarray(c, dtype=float)
        squeezed: list[ExcessNoiseTerm] = []
        anti: list[ExcessNoiseTerm] = []
        variance = 0.0
        max_anti = 0.0
        for j in range(n):
            r = pattern.rs[j]
            if pattern.orientations[j] == "x":
                sq_quad, sq_coeff = "x", w[j]
                anti_quad, anti_coeff = "p", w[n + j]
            else:
                sq_quad, sq_coeff = "p", w[n + j]
                anti_quad, anti_coeff = "x", w[j]
            variance += sq_coeff**2 * np.exp(-2.0 * r) * VACUUM_VARIANCE
            variance += anti_coeff**2 * np.exp(2.0 * r) * VACUUM_VARIANCE
            max_anti = max(max_anti, abs(anti_coeff))
            if abs(sq_coeff) > report_tol:
                squeezed.append(ExcessNoiseTerm(j + 1, sq_quad, float(sq_coeff)))
            if abs(anti_coeff) > report_tol:
                anti.append(ExcessNoiseTerm(j + 1, anti_quad, float(anti_coeff)))
        out.append(
            NullifierNoise(
                squeezed=tuple(squeezed),
                anti=tuple(anti),
                variance=float(variance),
                max_anti_coefficient=float(max_anti),
            )
        )
    return out
