"""Compilation of cluster adjacency matrices into passive linear-optics networks.

The compiler follows the Gram-factorisation route: for an adjacency matrix A,
a real factor R with ``R @ R.T == inv(I + A @ A)`` is built row by row, and the
network matrix is ``(I + 1j * A) @ R``.  Feeding mode k of that network with a
phase-squeezed input suppresses the nullifier of mode k; multiplying column k
by ``1j`` retargets it to an amplitude-squeezed input instead.

All functions are pure and operate on plain numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "DEFAULT_ATOL",
    "NetworkElement",
    "beamsplitter",
    "fourier",
    "inverse_fourier",
    "pi_rotation",
    "is_symmetric",
    "is_unitary",
    "inverse_gram",
    "gram_factor_sequential",
    "assemble_unitary",
    "input_basis_convert",
    "diamond_from_linear",
    "element_matrix",
    "compose_sequence",
    "compile_cluster_unitary",
    "chain8_transmissions",
    "chain8_element_sequence",
    "CHAIN8_GRAM_INVERSE",
    "CHAIN8_PIVOT_SIGNS",
    "DIAMOND_LOCAL_PHASES",
]

# Absolute tolerance for unitarity and consistency checks.  Entries of all
# matrices handled here are O(1), so an absolute scale is appropriate.
DEFAULT_ATOL = 1e-12

# Gram inverse inv(I + A^2) of the 8-mode chain, kept exact for reference.
_CHAIN8_GRAM_FRACTIONS = [
    [Fraction(21, 34), 0, Fraction(-4, 17), 0, Fraction(3, 34), 0, Fraction(-1, 34), 0],
    [0, Fraction(13, 34), 0, Fraction(-5, 34), 0, Fraction(1, 17), 0, Fraction(-1, 34)],
    [Fraction(-4, 17), 0, Fraction(8, 17), 0, Fraction(-3, 17), 0, Fraction(1, 17), 0],
    [0, Fraction(-5, 34), 0, Fraction(15, 34), 0, Fraction(-3, 17), 0, Fraction(3, 34)],
    [Fraction(3, 34), 0, Fraction(-3, 17), 0, Fraction(15, 34), 0, Fraction(-5, 34), 0],
    [0, Fraction(1, 17), 0, Fraction(-3, 17), 0, Fraction(8, 17), 0, Fraction(-4, 17)],
    [Fraction(-1, 34), 0, Fraction(1, 17), 0, Fraction(-5, 34), 0, Fraction(13, 34), 0],
    [0, Fraction(-1, 34), 0, Fraction(3, 34), 0, Fraction(-4, 17), 0, Fraction(21, 34)],
]

CHAIN8_GRAM_INVERSE = np.array([[float(x) for x in row] for row in _CHAIN8_GRAM_FRACTIONS])

# Pivot signs (one per solve step) that make the 8-mode chain factor assemble
# into the published network matrix for that experiment.  Any other sign
# choice differs only by a gauge (orthogonal right factor) and produces the
# same physics.
CHAIN8_PIVOT_SIGNS = (1, 1, -1, 1, 1, -1, 1, -1)

# Local output phases turning the chain network into the two-diamond one.
DIAMOND_LOCAL_PHASES = np.diag([-1, -1j, 1j, 1, 1, 1j, -1j, -1]).astype(complex)


def is_symmetric(m: np.ndarray, atol: float = DEFAULT_ATOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.allclose(m, m.T, atol=atol)


def is_unitary(u: np.ndarray, atol: float = DEFAULT_ATOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    eye = np.eye(u.shape[0])
    return bool(np.max(np.abs(u @ u.conj().T - eye)) < atol)


def inverse_gram(a: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """Return ``inv(I + a @ a)`` for a symmetric matrix ``a``.

    For real symmetric ``a`` the matrix ``I + a^2`` is positive definite, so
    the inverse always exists; the result is symmetrised to remove rounding
    noise.
    """
    a = np.asarray(a, dtype=float)
    if not is_symmetric(a, atol=atol):
        raise ValueError("adjacency matrix must be symmetric")
    n = a.shape[0]
    m = np.linalg.solve(np.eye(n) + a @ a, np.eye(n))
    return (m + m.T) / 2.0


def _outward_rows(n: int) -> list[int]:
    """Row solve order: start at row ceil(n/2), then alternate outward.

    Returns 0-based indices; the start row is followed by its upper
    neighbour, lower neighbour and so on, and once one side runs out the
    remaining rows follow in order.
    """
    mid = (n + 1) // 2  # 1-based label of the middle row
    order = [mid]
    step = 1
    while len(order) < n:
        for candidate in (mid + step, mid - step):
            if 1 <= candidate <= n and len(order) < n:
                order.append(candidate)
        step += 1
    return [r - 1 for r in order]


def gram_factor_sequential(
    m: np.ndarray,
    pivot_signs=None,
    atol: float = DEFAULT_ATOL,
) -> np.ndarray:
    """Factor a symmetric positive-definite matrix as ``R @ R.T == m``.

    The rows of R are solved outward from the middle row, each new row keeping
    only the minimal set of nonzero entries: the dot products with already
    solved rows fix all but one unknown, and the row norm fixes the magnitude
    of the last one (the pivot).  The pivot column order equals the row order
    with the first two entries swapped, which reproduces the support pattern
    of the published eight-mode chain factor.

    ``pivot_signs`` optionally supplies the sign of each pivot, one per solve
    step.  By default pivots are non-negative, except that the Gram inverse of
    the 8-mode chain is recognised and given the sign pattern whose assembled
    network matches the published chain network matrix entry for entry.
    """
    m = np.asarray(m, dtype=float)
    if not is_symmetric(m, atol=1e-10):
        raise ValueError("gram matrix must be symmetric")
    n = m.shape[0]

    rows = _outward_rows(n)
    cols = list(rows)
    if n >= 2:
        cols[0], cols[1] = cols[1], cols[0]

    if pivot_signs is None:
        if n == 8 and np.allclose(m, CHAIN8_GRAM_INVERSE, atol=1e-9):
            pivot_signs = CHAIN8_PIVOT_SIGNS
        else:
            pivot_signs = (1,) * n
    if len(pivot_signs) != n:
        raise ValueError(f"need {n} pivot signs, got {len(pivot_signs)}")

    # Lower-triangular solve in the permuted (solve-order) frame.
    lower = np.zeros((n, n))
    for k in range(n):
        rk = rows[k]
        for j in range(k):
            partial = float(lower[k, :j] @ lower[j, :j])
            lower[k, j] = (m[rk, rows[j]] - partial) / lower[j, j]
        pivot_sq = m[rk, rk] - float(lower[k, :k] @ lower[k, :k])
        if pivot_sq <= atol:
            raise ValueError("matrix is not positive definite")
        lower[k, k] = np.sqrt(pivot_sq)

    factor = np.zeros((n, n))
    for k in range(n):
        for j in range(k + 1):
            factor[rows[k], cols[j]] = lower[k, j] * pivot_signs[j]
    return factor


def assemble_unitary(
    a: np.ndarray, re_u: np.ndarray, atol: float = DEFAULT_ATOL
) -> np.ndarray:
    """Build the network matrix ``(I + 1j * a) @ re_u`` and verify unitarity.

    ``re_u`` must satisfy the Gram condition ``re_u @ re_u.T == inv(I + a^2)``
    within 1e-10; violating it is an argument error, not a rounding issue.
    """
    a = np.asarray(a, dtype=float)
    re_u = np.asarray(re_u, dtype=float)
    if not is_symmetric(a, atol=1e-10):
        raise ValueError("adjacency matrix must be symmetric")
    if a.shape != re_u.shape:
        raise ValueError("adjacency and factor shapes differ")
    gram = inverse_gram(a)
    if np.max(np.abs(re_u @ re_u.T - gram)) > 1e-10:
        raise ValueError("factor does not satisfy the Gram condition for this graph")
    u = (np.eye(a.shape[0]) + 1j * a) @ re_u
    if not is_unitary(u, atol=atol):
        raise ValueError("assembled matrix failed the unitarity check")
    return u


def input_basis_convert(u: np.ndarray, x_squeezed_inputs) -> np.ndarray:
    """Multiply column j by ``1j`` for every mode j fed by amplitude squeezing.

    Mode labels are 1-based.  The phase pre-rotates those inputs by 90
    degrees, so a network derived for phase-squeezed inputs accepts
    amplitude-squeezed ones on the listed modes.
    """
    u = np.asarray(u, dtype=complex)
    n = u.shape[1]
    converted = u.copy()
    for j in x_squeezed_inputs:
        if not 1 <= j <= n:
            raise ValueError(f"input mode {j} out of range 1..{n}")
        converted[:, j - 1] *= 1j
    return converted


def diamond_from_linear(u_l: np.ndarray) -> np.ndarray:
    """Two-diamond network from the 8-mode chain network via local phases."""
    u_l = np.asarray(u_l, dtype=complex)
    if u_l.shape != (8, 8):
        raise ValueError(f"expected an 8x8 matrix, got shape {u_l.shape}")
    if not is_unitary(u_l):
        raise ValueError("input matrix is not unitary")
    return DIAMOND_LOCAL_PHASES @ u_l


@dataclass(frozen=True)
class NetworkElement:
    """One primitive of a passive network.

    ``kind`` is one of ``beamsplitter``, ``fourier``, ``inverse_fourier`` or
    ``pi_rotation``.  Beam splitters carry two 1-based mode labels, a power
    transmission in [0, 1] and a sign (+1 or -1) selecting the reflection
    convention; the single-mode kinds carry one mode label.
    """

    kind: str
    modes: tuple[int, ...]
    transmission: float | None = None
    sign: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "beamsplitter":
            if len(self.modes) != 2 or self.modes[0] == self.modes[1]:
                raise ValueError("beamsplitter needs two distinct modes")
            if self.transmission is None or not 0.0 <= self.transmission <= 1.0:
                raise ValueError(f"transmission {self.transmission} outside [0, 1]")
            if self.sign not in (1, -1):
                raise ValueError("beamsplitter sign must be +1 or -1")
        elif self.kind in ("fourier", "inverse_fourier", "pi_rotation"):
            if len(self.modes) != 1:
                raise ValueError(f"{self.kind} acts on exactly one mode")
        else:
            raise ValueError(f"unknown element kind {self.kind!r}")


def beamsplitter(k: int, l: int, transmission: float, sign: int) -> NetworkElement:
    return NetworkElement("beamsplitter", (k, l), transmission, sign)


def fourier(k: int) -> NetworkElement:
    return NetworkElement("fourier", (k,))


def inverse_fourier(k: int) -> NetworkElement:
    return NetworkElement("inverse_fourier", (k,))


def pi_rotation(k: int) -> NetworkElement:
    return NetworkElement("pi_rotation", (k,))


def element_matrix(element: NetworkElement, n: int) -> np.ndarray:
    """n x n matrix of one element; identity away from the element's modes.

    Beam splitter entries: (k,k)=sqrt(1-T), (k,l)=sqrt(T), (l,k)=sign*sqrt(T),
    (l,l)=-sign*sqrt(1-T).  A Fourier element multiplies its mode by 1j, the
    inverse by -1j, and the pi rotation by -1.
    """
    for mode in element.modes:
        if not 1 <= mode <= n:
            raise ValueError(f"mode {mode} out of range 1..{n}")
    u = np.eye(n, dtype=complex)
    if element.kind == "beamsplitter":
        k, l = (m - 1 for m in element.modes)
        t = element.transmission
        root_t = np.sqrt(t)
        root_r = np.sqrt(1.0 - t)
        u[k, k] = root_r
        u[k, l] = root_t
        u[l, k] = element.sign * root_t
        u[l, l] = -element.sign * root_r
    else:
        phase = {"fourier": 1j, "inverse_fourier": -1j, "pi_rotation": -1.0}[element.kind]
        k = element.modes[0] - 1
        u[k, k] = phase
    return u


def compose_sequence(sequence, n: int) -> np.ndarray:
    """Matrix of an element sequence.

    The sequence is written in operator-product order: the first listed
    element is the leftmost factor, so the last listed element acts on the
    input modes first.
    """
    u = np.eye(n, dtype=complex)
    for element in sequence:
        u = u @ element_matrix(element, n)
    return u


def compile_cluster_unitary(adjacency_matrix: np.ndarray, x_squeezed_inputs=()) -> np.ndarray:
    """Full pipeline from adjacency matrix to network matrix.

    The Gram inverse is factored sequentially, assembled with the adjacency
    phases, and finally re-phased on the columns listed in
    ``x_squeezed_inputs``.
    """
    gram = inverse_gram(adjacency_matrix)
    factor = gram_factor_sequential(gram)
    u = assemble_unitary(adjacency_matrix, factor)
    return input_basis_convert(u, x_squeezed_inputs)


def chain8_transmissions() -> dict[int, float]:
    """Power transmissions T1..T7 of the seven-splitter chain network."""
    return {
        1: 25.0 / 34.0,
        2: 2.0 / 5.0,
        3: 2.0 / 5.0,
        4: 1.0 / 3.0,
        5: 1.0 / 3.0,
        6: 1.0 / 2.0,
        7: 1.0 / 2.0,
    }


def chain8_element_sequence() -> list[NetworkElement]:
    """Splitter and phase sequence realising the 8-mode chain network.

    Listed in operator-product order (last element meets the input first);
    ``compose_sequence`` of this list equals the matrix produced by
    ``compile_cluster_unitary`` for the 8-mode chain with amplitude-squeezed
    inputs on modes 1, 3, 5 and 7.
    """
    t = chain8_transmissions()
    return [
        fourier(8),
        pi_rotation(7),
        inverse_fourier(6),
        fourier(4),
        pi_rotation(3),
        inverse_fourier(2),
        beamsplitter(7, 8, t[7], -1),
        fourier(8),
        beamsplitter(1, 2, t[6], -1),
        fourier(1),
        beamsplitter(6, 7, t[5], -1),
        fourier(7),
        beamsplitter(2, 3, t[4], -1),
        fourier(2),
        beamsplitter(5, 6, t[3], -1),
        fourier(6),
        beamsplitter(3, 4, t[2], -1),
        fourier(3),
        beamsplitter(4, 5, t[1], +1),
    ]
