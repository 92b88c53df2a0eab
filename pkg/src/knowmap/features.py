"""Node operational metrics: workload assignment, fluctuation, feature vectors."""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import MagnitudeOutOfRangeError

DEFAULT_MEM_TOTAL = 8192.0  # MiB, homogeneous across nodes
DEFAULT_MAGNITUDE = 0.02
WORKLOAD_STEP = 10

# Stream tag separating fluctuation draws from any other seeded stream.
_FLUCTUATION_STREAM = 0xF1


@dataclass(frozen=True)
class NodeFeatures:
    """Operational metrics of one node: CPU load fraction and memory in MiB."""

    cpu_usage: float
    mem_available: float
    mem_total: float = DEFAULT_MEM_TOTAL

    def __post_init__(self) -> None:
        if not 0.0 <= self.cpu_usage <= 1.0:
            raise ValueError(f"cpu_usage must be in [0, 1], got {self.cpu_usage}")
        if self.mem_total <= 0.0:
            raise ValueError(f"mem_total must be positive, got {self.mem_total}")
        if not 0.0 <= self.mem_available <= self.mem_total:
            raise ValueError(
                f"mem_available must be in [0, mem_total], got {self.mem_available}"
            )


def check_workload(value: int) -> int:
    """Validate a workload percent: a multiple of 10 within [0, 100]."""
    if value % WORKLOAD_STEP != 0 or not 0 <= value <= 100:
        raise ValueError(f"workload must be a multiple of 10 in [0, 100], got {value}")
    return value


def set_workload(features: NodeFeatures, workload: int) -> NodeFeatures:
    """Pin a node to a workload percent.

    CPU load equals the workload fraction and available memory shrinks
    linearly with it, so the whole sweep stays one-dimensional.
    """
    check_workload(workload)
    fraction = workload / 100.0
    return NodeFeatures(
        cpu_usage=fraction,
        mem_available=features.mem_total * (1.0 - fraction),
        mem_total=features.mem_total,
    )


def features_at(workload: int, mem_total: float = DEFAULT_MEM_TOTAL) -> NodeFeatures:
    """Fresh metrics for a node pinned at the given workload percent."""
    return set_workload(NodeFeatures(0.0, mem_total, mem_total), workload)


def _node_key(node_id: str) -> int:
    digest = hashlib.blake2b(node_id.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def apply_fluctuation(
    features: NodeFeatures,
    seed: int,
    magnitude: float,
    *,
    node_id: str,
    step: int,
) -> NodeFeatures:
    """Perturb CPU and memory multiplicatively by uniform draws in ±magnitude.

    The generator is seeded by (seed, node_id, step), so the same inputs
    always produce the same perturbed metrics.  Results are clamped back
    into the metric invariants.
    """
    if not 0.0 <= magnitude < 0.1:
        raise MagnitudeOutOfRangeError(
            f"fluctuation magnitude must be in [0, 0.1), got {magnitude}"
        )
    seq = np.random.SeedSequence([seed, _FLUCTUATION_STREAM, _node_key(node_id), step])
    rng = np.random.default_rng(seq)
    u_cpu, u_mem = rng.uniform(-magnitude, magnitude, size=2)
    cpu = min(max(features.cpu_usage * (1.0 + u_cpu), 0.0), 1.0)
    mem = min(max(features.mem_available * (1.0 + u_mem), 0.0), features.mem_total)
    return NodeFeatures(cpu_usage=cpu, mem_available=mem, mem_total=features.mem_total)


def feature_vector(features: NodeFeatures) -> np.ndarray:
    """Initial feature vector: [cpu load, free-memory fraction, 1.0].

    The constant bias component keeps a uniformly loaded network from
    feeding the zero vector into the embedding layers.
    """
    return np.array(
        [features.cpu_usage, features.mem_available / features.mem_total, 1.0]
    )


def fluctuation_trace(
    node_ids: Sequence[str],
    workload: int,
    steps: int,
    seed: int,
    magnitude: float = DEFAULT_MAGNITUDE,
    mem_total: float = DEFAULT_MEM_TOTAL,
) -> Iterable[tuple[int, str, float, float]]:
    """Yield (step, node_id, cpu_usage, mem_available) rows for a flat workload."""
    base = features_at(workload, mem_total)
    for step in range(steps):
        for node_id in sorted(node_ids):
            f = apply_fluctuation(base, seed, magnitude, node_id=node_id, step=step)
            yield step, node_id, f.cpu_usage, f.mem_available


def write_fluctuation_trace(
    path: str | Path,
    node_ids: Sequence[str],
    workload: int,
    steps: int,
    seed: int,
    magnitude: float = DEFAULT_MAGNITUDE,
    mem_total: float = DEFAULT_MEM_TOTAL,
) -> None:
    """Write the fluctuation trace as CSV: step,node_id,cpu_usage,mem_available."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["step", "node_id", "cpu_usage", "mem_available"])
        for step, node_id, cpu, mem in fluctuation_trace(
            node_ids, workload, steps, seed, magnitude, mem_total
        ):
            writer.writerow([step, node_id, format(cpu, ".17g"), format(mem, ".17g")])
