"""Run configuration: one YAML file per run, mandatory seed, documented defaults.

A sweep config expands to the full cross product of strategies, distances,
and team sizes; each cell becomes one scenario with a seed derived from the
master seed and the cell's position, so adding a strategy never perturbs
the cells before it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import yaml

from .engine import Scenario, UniformAtDistance
from .geometry import GridPoint
from .stats import adversarial_place
from .strategies import (
    Harmonic,
    KnownK,
    ParameterError,
    RhoUniformKnownK,
    UniformDyadic,
    stock_growth,
)
from .streams import derive_scenario_seed

__all__ = ["ConfigError", "SweepCell", "SweepPlan", "AdversaryPlan",
           "load_config", "build_sweep", "build_adversary"]

DEFAULTS = {
    "n_trials": 100,
    "time_cap_multiplier": 1000,
    "distances": [8, 16, 32, 64],
    "team_sizes": [1, 4, 16],
    "treasure": {"mode": "uniform_at_distance"},
    "strategies": [{"kind": "known_k"}],
    "output": "results.csv",
    "threads": 1,
}


class ConfigError(Exception):
    """The config file is missing, malformed, or structurally invalid."""


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path!r} is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path!r} must be a mapping at top level")
    return raw


def _require_int(cfg: dict, key: str, minimum: int | None = None) -> int:
    if key not in cfg:
        raise ConfigError(f"missing required config key {key!r}")
    value = cfg[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"config key {key!r} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ParameterError(f"config key {key!r} must be >= {minimum}, got {value}")
    return value


def _int_list(cfg: dict, key: str, minimum: int) -> list[int]:
    value = cfg.get(key, DEFAULTS[key])
    if not isinstance(value, list) or not value:
        raise ConfigError(f"config key {key!r} must be a non-empty list")
    out = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"config key {key!r} holds a non-integer {v!r}")
        if v < minimum:
            raise ParameterError(f"values in {key!r} must be >= {minimum}, got {v}")
        out.append(v)
    return out


# --- strategy construction -----------------------------------------------------

def _build_strategy(entry: Any, k: int):
    """One strategy spec for a sweep cell of team size k.

    known_k resolves its estimate per cell: the exact k by default, a fixed
    shared ``k_est``, an explicit per-agent ``k_est_list``, or rho-uniform
    per-agent draws when ``rho`` is given.
    """
    if not isinstance(entry, dict) or "kind" not in entry:
        raise ConfigError(f"strategy entries need a 'kind', got {entry!r}")
    kind = entry["kind"]
    if kind == "known_k":
        if "rho" in entry:
            return RhoUniformKnownK(k=k, rho=float(entry["rho"]))
        if "k_est_list" in entry:
            lst = entry["k_est_list"]
            if not isinstance(lst, list) or len(lst) != k:
                raise ConfigError(
                    f"k_est_list must hold exactly k={k} entries, got {lst!r}")
            return tuple(KnownK(float(v)) for v in lst)
        if "k_est" in entry:
            return KnownK(float(entry["k_est"]))
        return KnownK(float(k))
    if kind == "uniform":
        epsilon = float(entry.get("epsilon", 1.0))
        return UniformDyadic(stock_growth(epsilon))
    if kind == "harmonic":
        if "delta" not in entry:
            raise ConfigError("harmonic strategy needs a 'delta'")
        return Harmonic(float(entry["delta"]))
    raise ConfigError(f"unknown strategy kind {kind!r}")


def _strategy_slug(entry: dict) -> str:
    kind = entry["kind"]
    if kind == "known_k":
        if "rho" in entry:
            return f"known_k_rho{entry['rho']:g}"
        if "k_est_list" in entry:
            return "known_k_list"
        if "k_est" in entry:
            return f"known_k_est{entry['k_est']:g}"
        return "known_k"
    if kind == "uniform":
        return f"uniform_eps{float(entry.get('epsilon', 1.0)):g}"
    return f"harmonic_d{entry['delta']:g}"


def _strategy_params(entry: dict, k: int) -> str:
    spec = _build_strategy(entry, k)
    if isinstance(spec, tuple):
        return "k_est_list=" + "|".join(f"{s.k_est:g}" for s in spec)
    return spec.params()


def _benchmark_cap(entry: dict, distance: int, k: int, multiplier: int) -> int:
    """Scenario-relative cap: multiplier times the strategy's own yardstick.

    The harmonic strategy is measured against D + D^(2+delta)/k; the other
    two against D + D^2/k. Rounded up so the cap never undercuts the rule.
    """
    if entry["kind"] == "harmonic":
        power = 2.0 + float(entry["delta"])
        bench = distance + distance ** power / k
        return math.ceil(multiplier * bench)
    return multiplier * (distance + -(-distance * distance // k))


# --- sweep plans -----------------------------------------------------------------

@dataclass(frozen=True)
class SweepCell:
    scenario_id: str
    strategy_label: str
    params: str
    distance: int
    k: int
    scenario: Scenario
    n_trials: int


@dataclass(frozen=True)
class SweepPlan:
    cells: tuple[SweepCell, ...]
    output: str
    threads: int
    master_seed: int


def build_sweep(cfg: dict) -> SweepPlan:
    """Expand a config mapping into concrete scenario cells, validating hard."""
    known = {"master_seed", "n_trials", "time_cap", "time_cap_multiplier",
             "distances", "team_sizes", "treasure", "strategies", "output", "threads"}
    unknown = set(cfg) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    master_seed = _require_int(cfg, "master_seed", minimum=0)
    n_trials = cfg.get("n_trials", DEFAULTS["n_trials"])
    if not isinstance(n_trials, int) or n_trials < 2:
        raise ParameterError(f"n_trials must be an integer >= 2, got {n_trials!r}")
    multiplier = cfg.get("time_cap_multiplier", DEFAULTS["time_cap_multiplier"])
    if not isinstance(multiplier, int) or multiplier < 1:
        raise ParameterError(f"time_cap_multiplier must be >= 1, got {multiplier!r}")
    explicit_cap = cfg.get("time_cap")
    if explicit_cap is not None and (not isinstance(explicit_cap, int) or explicit_cap < 1):
        raise ParameterError(f"time_cap must be >= 1, got {explicit_cap!r}")
    distances = _int_list(cfg, "distances", minimum=1)
    team_sizes = _int_list(cfg, "team_sizes", minimum=1)
    treasure_cfg = cfg.get("treasure", DEFAULTS["treasure"])
    strategies = cfg.get("strategies", DEFAULTS["strategies"])
    if not isinstance(strategies, list) or not strategies:
        raise ConfigError("config key 'strategies' must be a non-empty list")
    slugs = [_strategy_slug(_checked_entry(e)) for e in strategies]
    if len(set(slugs)) != len(slugs):
        raise ConfigError(f"strategy list produces duplicate labels: {slugs}")
    output = cfg.get("output", DEFAULTS["output"])
    threads = cfg.get("threads", DEFAULTS["threads"])
    if not isinstance(threads, int) or threads < 1:
        raise ParameterError(f"threads must be >= 1, got {threads!r}")

    cells = []
    index = 0
    for entry, slug in zip(strategies, slugs):
        for distance in distances:
            for k in team_sizes:
                cap = explicit_cap if explicit_cap is not None else _benchmark_cap(
                    entry, distance, k, multiplier)
                scenario = Scenario(
                    strategy=_build_strategy(entry, k),
                    k=k,
                    treasure=_resolve_treasure(treasure_cfg, entry, k, distance,
                                               master_seed, index),
                    time_cap=cap,
                    master_seed=derive_scenario_seed(master_seed, index),
                )
                cells.append(SweepCell(
                    scenario_id=f"{slug}-D{distance}-k{k}",
                    strategy_label=slug,
                    params=_strategy_params(entry, k),
                    distance=distance,
                    k=k,
                    scenario=scenario,
                    n_trials=n_trials,
                ))
                index += 1
    return SweepPlan(tuple(cells), output, threads, master_seed)


def _checked_entry(entry: Any) -> dict:
    if not isinstance(entry, dict) or "kind" not in entry:
        raise ConfigError(f"strategy entries need a 'kind', got {entry!r}")
    if entry["kind"] not in ("known_k", "uniform", "harmonic"):
        raise ConfigError(f"unknown strategy kind {entry['kind']!r}")
    if entry["kind"] == "harmonic" and "delta" not in entry:
        raise ConfigError("harmonic strategy needs a 'delta'")
    return entry


def _resolve_treasure(treasure_cfg: Any, entry: dict, k: int, distance: int,
                      master_seed: int, cell_index: int):
    if not isinstance(treasure_cfg, dict) or "mode" not in treasure_cfg:
        raise ConfigError(f"treasure config needs a 'mode', got {treasure_cfg!r}")
    mode = treasure_cfg["mode"]
    if mode == "uniform_at_distance":
        return UniformAtDistance(distance)
    if mode == "fixed":
        try:
            x, y = int(treasure_cfg["x"]), int(treasure_cfg["y"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("fixed treasure needs integer 'x' and 'y'") from exc
        return GridPoint(x, y)
    if mode == "adversarial":
        budget = treasure_cfg.get("budget")
        if budget is None:
            # Default probe budget: the midpoint scale of the counting bound.
            budget = max(distance, distance * distance // (4 * k))
        probe_trials = treasure_cfg.get("probe_trials", 200)
        placement = adversarial_place(
            _build_strategy(entry, k), k, distance, int(budget),
            int(probe_trials), derive_scenario_seed(master_seed, (1 << 20) + cell_index))
        return placement.cell
    raise ConfigError(f"unknown treasure mode {mode!r}")


# --- adversary command plans --------------------------------------------------------

@dataclass(frozen=True)
class AdversaryPlan:
    strategy: object
    strategy_label: str
    k: int
    distance: int
    budget: int
    probe_trials: int
    master_seed: int
    output: str


def build_adversary(cfg: dict) -> AdversaryPlan:
    known = {"master_seed", "strategy", "k", "distance", "budget",
             "probe_trials", "output"}
    unknown = set(cfg) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    master_seed = _require_int(cfg, "master_seed", minimum=0)
    k = _require_int(cfg, "k", minimum=1)
    distance = _require_int(cfg, "distance", minimum=1)
    budget = _require_int(cfg, "budget", minimum=0)
    probe_trials = cfg.get("probe_trials", 200)
    if not isinstance(probe_trials, int) or probe_trials < 1:
        raise ParameterError(f"probe_trials must be >= 1, got {probe_trials!r}")
    entry = _checked_entry(cfg.get("strategy", {"kind": "known_k"}))
    return AdversaryPlan(
        strategy=_build_strategy(entry, k),
        strategy_label=_strategy_slug(entry),
        k=k,
        distance=distance,
        budget=budget,
        probe_trials=probe_trials,
        master_seed=master_seed,
        output=cfg.get("output", "adversary.csv"),
    )
