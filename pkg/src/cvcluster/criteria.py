"""Variance-sum inseparability tests with tunable gain factors.

Each criterion pairs two quadrature combinations u and v whose variance sum,
below a separability bound, refutes every split of the mode set that places
the criterion's distinguished mode pair on opposite sides.  Gains are named
slots scaling selected coefficients; setting every gain to 1 reduces u and v
to two graph nullifiers.

Evaluation is pure; sweeps over the squeezing parameter may run grid points
concurrently as long as output ordering is imposed by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Mapping

import numpy as np

from .gaussian import (
    GaussianState,
    combination_vector,
    qnl_variance,
    quadrature_variance,
    variance_db,
)

__all__ = [
    "Term",
    "Criterion",
    "CriterionResult",
    "InseparabilityReport",
    "linear_criteria",
    "diamond_criteria",
    "unit_gains",
    "realize",
    "vlf_bound",
    "evaluate",
    "linear_optimal_gains",
    "diamond_optimal_gains",
    "optimal_gains_analytic",
    "optimal_gains_numeric",
    "resolve_gains",
    "threshold_r",
    "full_inseparability_report",
]

GainSet = Mapping[str, float]


@dataclass(frozen=True)
class Term:
    """One coefficient of a combination; ``gain`` names an optional scale slot."""

    mode: int
    quadrature: str
    coefficient: float
    gain: str | None = None


@dataclass(frozen=True)
class Criterion:
    """One inseparability inequality.

    ``bipartition`` is the mode pair whose separation the inequality refutes.
    """

    cid: str
    u: tuple[Term, ...]
    v: tuple[Term, ...]
    bipartition: tuple[int, int]
    n: int = 8

    @property
    def gain_names(self) -> tuple[str, ...]:
        names = {t.gain for t in self.u + self.v if t.gain is not None}
        return tuple(sorted(names))


@dataclass(frozen=True)
class CriterionResult:
    cid: str
    lhs: float
    bound: float
    satisfied: bool
    u_variance: float
    v_variance: float
    u_db: float
    v_db: float
    gains: dict[str, float]


@dataclass(frozen=True)
class InseparabilityReport:
    results: tuple[CriterionResult, ...]
    all_satisfied: bool


def _p(mode: int) -> Term:
    return Term(mode, "p", 1.0)


def _x(mode: int, gain: str | None = None) -> Term:
    return Term(mode, "x", -1.0, gain)


def linear_criteria() -> list[Criterion]:
    """The seven inequalities certifying the 8-mode chain cluster state."""
    return [
        Criterion("3a", (_p(1), _x(2)), (_p(2), _x(1), _x(3, "g_L3")), (1, 2)),
        Criterion("3b", (_p(2), _x(1, "g_L1"), _x(3)), (_p(3), _x(2), _x(4, "g_L4")), (2, 3)),
        Criterion("3c", (_p(3), _x(2, "g_L2"), _x(4)), (_p(4), _x(3), _x(5, "g_L5")), (3, 4)),
        Criterion("3d", (_p(4), _x(3, "g_L3"), _x(5)), (_p(5), _x(4), _x(6, "g_L6")), (4, 5)),
        Criterion("3e", (_p(5), _x(4, "g_L4"), _x(6)), (_p(6), _x(5), _x(7, "g_L7")), (5, 6)),
        Criterion("3f", (_p(6), _x(5, "g_L5"), _x(7)), (_p(7), _x(6), _x(8, "g_L8")), (6, 7)),
        Criterion("3g", (_p(7), _x(6, "g_L6"), _x(8)), (_p(8), _x(7)), (7, 8)),
    ]


def diamond_criteria() -> list[Criterion]:
    """The nine inequalities certifying the two-diamond cluster state."""
    return [
        Criterion("4a", (_p(1), _x(3), _x(4, "g_D1")), (_p(3), _x(1), _x(2, "g_D2")), (1, 3)),
        Criterion("4b", (_p(2), _x(3), _x(4, "g_D1")), (_p(3), _x(2), _x(1, "g_D2")), (2, 3)),
        Criterion(
            "4c",
            (_p(1), _x(3, "g_D3"), _x(4)),
            (_p(4), _x(1), _x(2, "g_D4"), _x(5, "g_D5")),
            (1, 4),
        ),
        Criterion(
            "4d",
            (_p(2), _x(3, "g_D3"), _x(4)),
            (_p(4), _x(1, "g_D4"), _x(2), _x(5, "g_D5")),
            (2, 4),
        ),
        Criterion(
            "4e",
            (_p(4), _x(1, "g_D6"), _x(2, "g_D6"), _x(5)),
            (_p(5), _x(4), _x(7, "g_D6"), _x(8, "g_D6")),
            (4, 5),
        ),
        Criterion(
            "4f",
            (_p(5), _x(4, "g_D5"), _x(7), _x(8, "g_D4")),
            (_p(7), _x(5), _x(6, "g_D3")),
            (5, 7),
        ),
        Criterion(
            "4g",
            (_p(5), _x(4, "g_D5"), _x(7, "g_D4"), _x(8)),
            (_p(8), _x(5), _x(6, "g_D3")),
            (5, 8),
        ),
        Criterion("4h", (_p(6), _x(7), _x(8, "g_D2")), (_p(7), _x(5, "g_D1"), _x(6)), (6, 7)),
        Criterion("4i", (_p(6), _x(7, "g_D2"), _x(8)), (_p(8), _x(5, "g_D1"), _x(6)), (6, 8)),
    ]


def unit_gains(criteria: Iterable[Criterion] | Criterion) -> dict[str, float]:
    """All gain slots of one or several criteria set to 1."""
    if isinstance(criteria, Criterion):
        criteria = [criteria]
    gains: dict[str, float] = {}
    for c in criteria:
        gains.update({name: 1.0 for name in c.gain_names})
    return gains


def _realized_terms(terms: tuple[Term, ...], gains: GainSet):
    for t in terms:
        scale = 1.0
        if t.gain is not None:
            if t.gain not in gains:
                raise ValueError(f"missing gain value for slot {t.gain!r}")
            scale = gains[t.gain]
        yield t.mode, t.quadrature, t.coefficient * scale


def realize(terms: tuple[Term, ...], n: int, gains: GainSet) -> np.ndarray:
    """Concrete coefficient vector of a template under the given gains."""
    return combination_vector(n, _realized_terms(terms, gains))


def vlf_bound(criterion: Criterion, gains: GainSet) -> float:
    """Separability bound for the criterion's bipartition.

    Every mode contributes the symplectic product of its u and v coefficients
    (u_x v_p - u_p v_x).  The bound is half the sum of the absolute group
    totals, the distinguished modes anchoring the two groups and any other
    contributing mode assigned to whichever group gives the smaller bound.
    """
    def collect(terms):
        x: dict[int, float] = {}
        p: dict[int, float] = {}
        for mode, quad, coeff in _realized_terms(terms, gains):
            target = x if quad == "x" else p
            target[mode] = target.get(mode, 0.0) + coeff
        return x, p

    ux, up = collect(criterion.u)
    vx, vp = collect(criterion.v)
    modes = set(ux) | set(up) | set(vx) | set(vp)
    products = {
        mode: ux.get(mode, 0.0) * vp.get(mode, 0.0) - up.get(mode, 0.0) * vx.get(mode, 0.0)
        for mode in modes
    }
    m, k = criterion.bipartition
    floating = [products[j] for j in modes if j not in (m, k) and products[j] != 0.0]
    best = np.inf
    for assignment in product((0, 1), repeat=len(floating)):
        side_m = products.get(m, 0.0) + sum(c for c, s in zip(floating, assignment) if s == 0)
        side_k = products.get(k, 0.0) + sum(c for c, s in zip(floating, assignment) if s == 1)
        best = min(best, 0.5 * (abs(side_m) + abs(side_k)))
    return float(best)


def evaluate(criterion: Criterion, state: GaussianState, gains: GainSet) -> CriterionResult:
    """Variance sum, bound and verdict of one criterion on a state."""
    if state.n != criterion.n:
        raise ValueError(f"state has {state.n} modes, criterion expects {criterion.n}")
    u_vec = realize(criterion.u, criterion.n, gains)
    v_vec = realize(criterion.v, criterion.n, gains)
    u_var = quadrature_variance(state, u_vec)
    v_var = quadrature_variance(state, v_vec)
    lhs = u_var + v_var
    bound = vlf_bound(criterion, gains)
    return CriterionResult(
        cid=criterion.cid,
        lhs=lhs,
        bound=bound,
        satisfied=bool(lhs < bound),
        u_variance=u_var,
        v_variance=v_var,
        u_db=variance_db(u_var, qnl_variance(u_vec)),
        v_db=variance_db(v_var, qnl_variance(v_vec)),
        gains={name: float(gains[name]) for name in criterion.gain_names},
    )


def linear_optimal_gains(r: float) -> dict[str, float]:
    """Closed-form variance-minimising gains for the chain criteria."""
    e4 = np.exp(4.0 * r)
    g1 = 21.0 * (e4 - 1.0) / (13.0 + 21.0 * e4)
    g2 = 13.0 * (e4 - 1.0) / (21.0 + 13.0 * e4)
    g3 = 8.0 * (e4 - 1.0) / (9.0 + 8.0 * e4)
    g4 = 15.0 * (e4 - 1.0) / (19.0 + 15.0 * e4)
    return {
        "g_L1": g1,
        "g_L2": g2,
        "g_L3": g3,
        "g_L4": g4,
        "g_L5": g4,
        "g_L6": g3,
        "g_L7": g2,
        "g_L8": g1,
    }


def diamond_optimal_gains(r: float) -> dict[str, float]:
    """Closed-form variance-minimising gains for the two-diamond criteria."""
    e4 = np.exp(4.0 * r)
    e8 = np.exp(8.0 * r)
    coupled_denom = 7.0 + 18.0 * e4 + 9.0 * e8
    return {
        "g_D1": 15.0 * (e4 - 1.0) / (19.0 + 15.0 * e4),
        "g_D2": 21.0 * (e4 - 1.0) / (13.0 + 21.0 * e4),
        "g_D3": 9.0 * (e4 - 1.0) / (8.0 + 9.0 * e4),
        "g_D4": 9.0 * (e8 - 1.0) / coupled_denom,
        "g_D5": 3.0 * (3.0 * e8 - 2.0 * e4 - 1.0) / coupled_denom,
        "g_D6": 4.0 * (e4 - 1.0) / (13.0 + 4.0 * e4),
    }


def optimal_gains_analytic(r: float) -> dict[str, float]:
    """Chain and diamond gain tables merged (the slot names are disjoint)."""
    gains = linear_optimal_gains(r)
    gains.update(diamond_optimal_gains(r))
    return gains


def optimal_gains_numeric(
    criterion: Criterion,
    state: GaussianState,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> dict[str, float]:
    """Minimise the criterion's variance sum over its gain slots.

    The variance sum is an exact quadratic in each slot, so each coordinate
    update lands on the slot's conditional minimum using three function
    values; the slots are cycled until the joint update is below ``tol``.
    """
    names = criterion.gain_names
    gains = {name: 1.0 for name in names}

    def lhs(g: Mapping[str, float]) -> float:
        u = quadrature_variance(state, realize(criterion.u, criterion.n, g))
        v = quadrature_variance(state, realize(criterion.v, criterion.n, g))
        total = u + v
        if not np.isfinite(total):
            raise RuntimeError("variance sum is not finite")
        return total

    for _ in range(max_iter):
        largest_move = 0.0
        for name in names:
            g0 = gains[name]
            lo = lhs({**gains, name: g0 - 1.0})
            mid = lhs(gains)
            hi = lhs({**gains, name: g0 + 1.0})
            curvature = hi - 2.0 * mid + lo
            if curvature <= 0.0:
                if abs(curvature) < 1e-12 and abs(hi - lo) < 1e-12:
                    continue  # slot has no effect on this state
                raise RuntimeError(f"variance sum is not convex in slot {name!r}")
            new = g0 - 0.5 * (hi - lo) / curvature
            gains[name] = new
            largest_move = max(largest_move, abs(new - g0))
        if largest_move < tol:
            break
    return gains


def resolve_gains(
    criteria: Iterable[Criterion],
    spec,
    state: GaussianState | None = None,
) -> dict[str, float]:
    """Turn a gain request into a concrete slot table.

    ``spec`` may be "unit", "optimal" (requires ``state``; numeric optimum of
    each criterion, merged) or a mapping of slot overrides on top of unit
    gains.
    """
    criteria = list(criteria)
    gains = unit_gains(criteria)
    if spec == "unit":
        return gains
    if spec == "optimal":
        if state is None:
            raise ValueError("optimal gains need a state to optimise against")
        for c in criteria:
            gains.update(optimal_gains_numeric(c, state))
        return gains
    if isinstance(spec, Mapping):
        unknown = set(spec) - set(gains)
        if unknown:
            raise ValueError(f"unknown gain slots: {sorted(unknown)}")
        gains.update({k: float(v) for k, v in spec.items()})
        return gains
    raise ValueError(f"gain spec must be 'unit', 'optimal' or a mapping, got {spec!r}")


def threshold_r(
    criterion: Criterion,
    state_builder: Callable[[float], GaussianState],
    gain_mode: str = "unit",
    r_max: float = 3.0,
    tol: float = 1e-6,
    grid_points: int = 61,
) -> float | None:
    """Squeezing value where the variance sum crosses its bound.

    Scans r over (0, r_max] and bisects the first sign change of
    ``lhs(r) - bound`` to within ``tol``.  Returns None when the criterion is
    satisfied on the whole grid, which is the optimal-gain behaviour.
    """
    if gain_mode not in ("unit", "optimal"):
        raise ValueError(f"gain_mode must be 'unit' or 'optimal', got {gain_mode!r}")

    def margin(r: float) -> float:
        state = state_builder(r)
        if gain_mode == "unit":
            gains = unit_gains(criterion)
        else:
            gains = optimal_gains_numeric(criterion, state)
        result = evaluate(criterion, state, gains)
        return result.lhs - result.bound

    grid = np.linspace(0.0, r_max, grid_points)[1:]
    margins = [margin(r) for r in grid]
    if all(m < 0 for m in margins):
        return None
    if all(m > 0 for m in margins):
        raise RuntimeError(f"criterion {criterion.cid} is never satisfied on (0, {r_max}]")

    lo, hi = 0.0, r_max
    for r, m in zip(grid, margins):
        if m <= 0:
            hi = r
            break
        lo = r
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if margin(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def full_inseparability_report(
    criteria: Iterable[Criterion],
    state: GaussianState,
    gains: GainSet,
) -> InseparabilityReport:
    """Evaluate a whole criteria set; the verdict requires every inequality."""
    results = tuple(evaluate(c, state, gains) for c in criteria)
    return InseparabilityReport(
        results=results,
        all_satisfied=all(r.satisfied for r in results),
    )
