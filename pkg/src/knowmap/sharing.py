"""Iterated neighbor sharing until the embeddings settle into a Knowledge Map."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .embedding import Activation, Layer, embedding_round
from .errors import EmptyInputError
from .graph import KnowledgeGraph

DEFAULT_MAX_ROUNDS = 50
DEFAULT_TOLERANCE = 1e-6


@dataclass(frozen=True)
class SharingConfig:
    """Stopping rule for the sharing loop.

    A tolerance of zero disables the convergence check, so exactly
    max_rounds rounds run.
    """

    max_rounds: int = DEFAULT_MAX_ROUNDS
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        if self.max_rounds < 0:
            raise ValueError(f"max_rounds must be >= 0, got {self.max_rounds}")
        if self.tolerance < 0.0:
            raise ValueError(f"tolerance must be >= 0, got {self.tolerance}")


@dataclass(frozen=True)
class KnowledgeMap:
    """Settled embeddings for every node plus how the loop ended."""

    entries: dict[str, np.ndarray]
    rounds_used: int
    converged: bool
    final_delta: float


def states_delta(
    before: Mapping[str, np.ndarray], after: Mapping[str, np.ndarray]
) -> float:
    """Largest per-node movement between two embedding snapshots."""
    if not before:
        raise EmptyInputError("cannot compare empty embedding snapshots")
    return max(float(np.linalg.norm(after[v] - before[v])) for v in before)


def run_sharing(
    graph: KnowledgeGraph,
    states: Mapping[str, np.ndarray],
    layer: Layer,
    activation: Activation = Activation.SIGMOID,
    config: SharingConfig = SharingConfig(),
) -> KnowledgeMap:
    """Repeat sharing rounds until movement drops below tolerance.

    Rounds are synchronous: all nodes update from the same pre-round
    snapshot, so the result is independent of node iteration order.
    """
    current = {v: np.asarray(x, dtype=float) for v, x in states.items()}
    final_delta = float("inf")
    for round_index in range(1, config.max_rounds + 1):
        updated = embedding_round(graph, current, layer, activation)
        final_delta = states_delta(current, updated)
        current = updated
        if config.tolerance > 0.0 and final_delta < config.tolerance:
            return KnowledgeMap(
                entries=current,
                rounds_used=round_index,
                converged=True,
                final_delta=final_delta,
            )
    return KnowledgeMap(
        entries=current,
        rounds_used=config.max_rounds,
        converged=False,
        final_delta=final_delta if config.max_rounds > 0 else 0.0,
    )


def knowledge_map_to_dict(knowledge_map: KnowledgeMap) -> dict:
    """JSON-ready form with node entries in sorted order."""
    return {
        "round": knowledge_map.rounds_used,
        "converged": knowledge_map.converged,
        "final_delta": knowledge_map.final_delta,
        "entries": {
            node_id: [float(x) for x in knowledge_map.entries[node_id]]
            for node_id in sorted(knowledge_map.entries)
        },
    }


def write_knowledge_map_json(path: str | Path, knowledge_map: KnowledgeMap) -> None:
    """Serialize the map deterministically: sorted keys, repr-exact floats."""
    with open(path, "w") as handle:
        json.dump(knowledge_map_to_dict(knowledge_map), handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_knowledge_map_csv(path: str | Path, knowledge_map: KnowledgeMap) -> None:
    """Write the settled embeddings as CSV: node_id,round,e0..e{k-1}.

    The round column repeats rounds_used, marking which round the snapshot
    belongs to.  Floats use repr-exact formatting.
    """
    if not knowledge_map.entries:
        raise EmptyInputError("knowledge map has no entries to write")
    dimension = len(next(iter(knowledge_map.entries.values())))
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["node_id", "round"] + [f"e{i}" for i in range(dimension)])
        for node_id in sorted(knowledge_map.entries):
            row = [node_id, knowledge_map.rounds_used]
            row += [format(x, ".17g") for x in knowledge_map.entries[node_id]]
            writer.writerow(row)
