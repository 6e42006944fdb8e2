"""Experiment configuration: JSON schema, validation and state assembly.

A config names a graph, the input squeezing, a noise model and a gain
request.  The noise model is either per-mode efficiencies or the effective-r
shortcut (replace every squeezing magnitude by an effective value and skip
the loss channel); exactly one of the two must be given.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from . import graphs, presets
from .criteria import Criterion
from .gaussian import GaussianState, LossModel, SqueezePattern
from .network import compile_cluster_unitary

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "BUILTIN_CONFIGS",
    "load_config",
    "parse_config",
]

BUILTIN_CONFIGS = ("linear8", "diamond8", "linear8_physical", "diamond8_physical")


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description.

    ``effective_r`` and ``loss`` are mutually exclusive; ``pattern`` always
    holds the nominal squeezing, and :meth:`simulation_pattern` applies the
    effective-r substitution when active.
    """

    graph: graphs.Graph
    graph_name: str | None
    pattern: SqueezePattern
    loss: LossModel | None
    effective_r: float | None
    gains_spec: object
    sweep: tuple[float, float, int] | None

    def simulation_pattern(self, r: float | None = None) -> SqueezePattern:
        """Pattern actually simulated; ``r`` overrides the swept magnitude."""
        if r is not None:
            return self.pattern.with_r(r)
        if self.effective_r is not None:
            return self.pattern.with_r(self.effective_r)
        return self.pattern

    def simulation_loss(self) -> LossModel | None:
        return None if self.effective_r is not None else self.loss

    @property
    def x_squeezed_inputs(self) -> tuple[int, ...]:
        return tuple(
            j + 1 for j, o in enumerate(self.pattern.orientations) if o == "x"
        )

    def build_unitary(self) -> np.ndarray:
        if self.graph_name is not None:
            return presets.builtin_unitary(self.graph_name)
        return compile_cluster_unitary(
            graphs.adjacency(self.graph), x_squeezed_inputs=self.x_squeezed_inputs
        )

    def build_state(self, r: float | None = None) -> GaussianState:
        return presets.cluster_state(
            self.build_unitary(),
            self.simulation_pattern(r),
            loss=self.simulation_loss(),
        )

    def criteria(self) -> list[Criterion]:
        if self.graph_name is None:
            raise ConfigError(
                "inseparability criteria are defined for the builtin graphs only"
            )
        return presets.builtin_criteria(self.graph_name)


def _parse_graph(raw) -> tuple[graphs.Graph, str | None]:
    if isinstance(raw, str):
        try:
            return presets.builtin_graph(raw), raw
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if isinstance(raw, Mapping):
        if "n" not in raw or "edges" not in raw:
            raise ConfigError("explicit graph needs 'n' and 'edges'")
        try:
            graph = graphs.Graph.from_edges(int(raw["n"]), [tuple(e) for e in raw["edges"]])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid graph: {exc}") from exc
        return graph, None
    raise ConfigError("graph must be a builtin name or an object with n and edges")


def _parse_pattern(raw, n: int) -> SqueezePattern:
    if not isinstance(raw, Mapping) or "r" not in raw:
        raise ConfigError("squeeze section must be an object with an 'r' entry")
    r = raw["r"]
    rs = tuple(float(v) for v in r) if isinstance(r, (list, tuple)) else (float(r),) * n
    if len(rs) != n:
        raise ConfigError(f"need {n} squeezing values, got {len(rs)}")
    orientations = raw.get("orientations")
    if orientations is None:
        pattern = SqueezePattern.alternating(n, 0.0, first="x")
        orientations = pattern.orientations
    else:
        orientations = tuple(orientations)
    if len(orientations) != n:
        raise ConfigError(f"need {n} orientations, got {len(orientations)}")
    try:
        return SqueezePattern(orientations=orientations, rs=rs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_loss(raw, n: int) -> tuple[LossModel | None, float | None]:
    if not isinstance(raw, Mapping):
        raise ConfigError("loss section must be an object")
    keys = set(raw)
    if keys == {"effective_r"}:
        value = float(raw["effective_r"])
        if value < 0:
            raise ConfigError("effective_r must be >= 0")
        return None, value
    if keys == {"eta"}:
        eta = raw["eta"]
        etas = tuple(float(v) for v in eta) if isinstance(eta, (list, tuple)) else (float(eta),) * n
        if len(etas) != n:
            raise ConfigError(f"need {n} efficiencies, got {len(etas)}")
        try:
            return LossModel(etas=etas), None
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError("loss section must contain exactly one of 'eta' or 'effective_r'")


def _parse_gains(raw):
    if raw is None:
        return "unit"
    if raw in ("unit", "optimal"):
        return raw
    if isinstance(raw, Mapping):
        return {str(k): float(v) for k, v in raw.items()}
    raise ConfigError("gains must be 'unit', 'optimal' or a slot-to-value mapping")


def _parse_sweep(raw) -> tuple[float, float, int] | None:
    if raw is None:
        return None
    if not isinstance(raw, Mapping):
        raise ConfigError("sweep section must be an object")
    try:
        r_min = float(raw["r_min"])
        r_max = float(raw["r_max"])
        steps = int(raw["steps"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"sweep needs numeric r_min, r_max and steps: {exc}") from exc
    if steps < 1 or r_max < r_min or r_min < 0:
        raise ConfigError("sweep needs 0 <= r_min <= r_max and steps >= 1")
    return r_min, r_max, steps


def parse_config(raw: Mapping) -> ExperimentConfig:
    """Validate a decoded JSON object into an :class:`ExperimentConfig`."""
    if not isinstance(raw, Mapping):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - {"graph", "squeeze", "loss", "gains", "sweep"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    if "graph" not in raw:
        raise ConfigError("config needs a 'graph' section")
    graph, name = _parse_graph(raw["graph"])
    if "squeeze" not in raw:
        raise ConfigError("config needs a 'squeeze' section")
    pattern = _parse_pattern(raw["squeeze"], graph.n)
    if "loss" not in raw:
        raise ConfigError("config needs a 'loss' section ('eta' or 'effective_r')")
    loss, effective_r = _parse_loss(raw["loss"], graph.n)
    gains_spec = _parse_gains(raw.get("gains"))
    sweep = _parse_sweep(raw.get("sweep"))
    return ExperimentConfig(
        graph=graph,
        graph_name=name,
        pattern=pattern,
        loss=loss,
        effective_r=effective_r,
        gains_spec=gains_spec,
        sweep=sweep,
    )


def load_config(source: str | Path) -> ExperimentConfig:
    """Load a config from a JSON file path or a builtin config name."""
    path = Path(source)
    if path.exists():
        text = path.read_text()
    elif str(source) in BUILTIN_CONFIGS:
        text = (
            resources.files("cvcluster").joinpath(f"configs/{source}.json").read_text()
        )
    else:
        raise ConfigError(
            f"{source!r} is neither a readable file nor one of {BUILTIN_CONFIGS}"
        )
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {source}: {exc}") from exc
    return parse_config(raw)
