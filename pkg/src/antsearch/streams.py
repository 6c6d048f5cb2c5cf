"""Deterministic random-stream derivation.

Every source of randomness in a run is a counter-based Philox generator
keyed by (master_seed, trial_index, stream_id) through numpy's SeedSequence
entropy mixing. Streams for distinct keys are statistically independent, the
derivation is pure, and no stream is ever shared between agents or trials,
so execution order and worker count cannot change what any agent draws.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "agent_stream",
    "treasure_stream",
    "derive_scenario_seed",
    "TREASURE_STREAM_ID",
]

# Domain tags keep the entropy tuples of unrelated derivations disjoint.
_DOMAIN_TRIAL = 0x5EA6C4
_DOMAIN_SCENARIO = 0x5C3A41

# Reserved stream id for per-trial treasure placement; agents use 0..k-1.
TREASURE_STREAM_ID = 1 << 48


def _stream(master_seed: int, trial_index: int, stream_id: int) -> np.random.Generator:
    seq = np.random.SeedSequence([_DOMAIN_TRIAL, master_seed, trial_index, stream_id])
    return np.random.Generator(np.random.Philox(seq))


def agent_stream(master_seed: int, trial_index: int, agent_index: int) -> np.random.Generator:
    """The private generator of one agent in one trial."""
    if agent_index < 0:
        raise ValueError(f"agent index must be >= 0, got {agent_index}")
    return _stream(master_seed, trial_index, agent_index)


def treasure_stream(master_seed: int, trial_index: int) -> np.random.Generator:
    """Generator used to resolve per-trial random treasure placement."""
    return _stream(master_seed, trial_index, TREASURE_STREAM_ID)


def derive_scenario_seed(master_seed: int, scenario_index: int) -> int:
    """A 64-bit per-scenario seed, so sweep cells get unrelated trial streams."""
    seq = np.random.SeedSequence([_DOMAIN_SCENARIO, master_seed, scenario_index])
    lo, hi = (int(w) for w in seq.generate_state(2))
    return (hi << 32) | lo
