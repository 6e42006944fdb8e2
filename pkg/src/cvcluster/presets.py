"""Wiring for the two benchmark eight-mode experiments.

Both networks take amplitude-squeezed inputs on modes 1, 3, 5, 7 and
phase-squeezed inputs on modes 2, 4, 6, 8.  The chain network comes out of
the Gram pipeline directly; the two-diamond network is the chain network
followed by local output phases.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import graphs
from .gaussian import (
    GaussianState,
    LossModel,
    SqueezePattern,
    apply_loss,
    combination_vector,
    evolve,
    input_covariance,
    symplectic_from_unitary,
)
from .criteria import Criterion, diamond_criteria, linear_criteria
from .network import compile_cluster_unitary, diamond_from_linear

__all__ = [
    "X_SQUEEZED_INPUTS",
    "chain8_unitary",
    "diamond8_unitary",
    "experiment_pattern",
    "builtin_graph",
    "builtin_unitary",
    "builtin_criteria",
    "nullifier_vectors",
    "cluster_state",
]

X_SQUEEZED_INPUTS = (1, 3, 5, 7)


@lru_cache(maxsize=None)
def chain8_unitary() -> np.ndarray:
    """Network matrix of the 8-mode chain cluster experiment."""
    a = graphs.adjacency(graphs.linear_chain(8))
    u = compile_cluster_unitary(a, x_squeezed_inputs=X_SQUEEZED_INPUTS)
    u.setflags(write=False)
    return u


@lru_cache(maxsize=None)
def diamond8_unitary() -> np.ndarray:
    """Network matrix of the two-diamond cluster experiment."""
    u = diamond_from_linear(chain8_unitary())
    u.setflags(write=False)
    return u


def experiment_pattern(r: float, n: int = 8) -> SqueezePattern:
    """Amplitude squeezing on the odd modes, phase squeezing on the even ones."""
    return SqueezePattern.alternating(n, r, first="x")


def builtin_graph(name: str) -> graphs.Graph:
    if name == "linear8":
        return graphs.linear_chain(8)
    if name == "diamond8":
        return graphs.two_diamond()
    raise ValueError(f"unknown builtin graph {name!r}")


def builtin_unitary(name: str) -> np.ndarray:
    if name == "linear8":
        return chain8_unitary()
    if name == "diamond8":
        return diamond8_unitary()
    raise ValueError(f"unknown builtin graph {name!r}")


def builtin_criteria(name: str) -> list[Criterion]:
    if name == "linear8":
        return linear_criteria()
    if name == "diamond8":
        return diamond_criteria()
    raise ValueError(f"unknown builtin graph {name!r}")


def nullifier_vectors(graph: graphs.Graph) -> list[np.ndarray]:
    """Output-quadrature coefficient vectors of the graph's nullifiers."""
    return [combination_vector(graph.n, nf.terms()) for nf in graphs.nullifiers(graph)]


def cluster_state(
    unitary: np.ndarray,
    pattern: SqueezePattern,
    loss: LossModel | None = None,
) -> GaussianState:
    """Squeezed inputs propagated through the network, with optional loss."""
    state = evolve(input_covariance(pattern), symplectic_from_unitary(unitary))
    if loss is not None:
        state = apply_loss(state, loss)
    return state
