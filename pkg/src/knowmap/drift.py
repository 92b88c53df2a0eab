"""Semantic-drift experiment: sweep one node's workload and trace its embedding.

The harness settles a uniformly loaded network into a baseline Knowledge Map,
then re-runs the pipeline with a single target node pinned at each workload
step.  The target's distance from the rest of the network, plus a planar
projection of its trajectory, quantify how far the shared representation
drifts as the target diverges from its peers.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .embedding import (
    DEFAULT_DIMENSION,
    DEFAULT_ROUNDS,
    Activation,
    EmbeddingConfig,
    aggregate,
    embedding_round,
    init_layers,
)
from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    MagnitudeOutOfRangeError,
    TooFewStepsError,
    UnknownNodeError,
)
from .features import (
    DEFAULT_MAGNITUDE,
    DEFAULT_MEM_TOTAL,
    apply_fluctuation,
    check_workload,
    feature_vector,
    features_at,
    set_workload,
)
from .graph import KnowledgeGraph, TopologyKind, build_topology, node_name
from .pca import fit_pca, transform
from .sharing import (
    DEFAULT_TOLERANCE,
    KnowledgeMap,
    SharingConfig,
    run_sharing,
    write_knowledge_map_csv,
    write_knowledge_map_json,
)

DEFAULT_SWEEP = tuple(range(0, 101, 10))
DEFAULT_BASELINE = 50
DEFAULT_SEED = 42
MONOTONE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DriftConfig:
    """Everything one drift run depends on; two equal configs give equal runs."""

    topology: TopologyKind = TopologyKind.RING
    nodes: int = 10
    seed: int = DEFAULT_SEED
    target: str | None = None
    baseline_workload: int = DEFAULT_BASELINE
    sweep: tuple[int, ...] = DEFAULT_SWEEP
    dimension: int = DEFAULT_DIMENSION
    rounds: int = DEFAULT_ROUNDS
    activation: Activation = Activation.SIGMOID
    sharing_tolerance: float = DEFAULT_TOLERANCE
    fluctuation: float = DEFAULT_MAGNITUDE
    mem_total: float = DEFAULT_MEM_TOTAL

    def __post_init__(self) -> None:
        check_workload(self.baseline_workload)
        if len(self.sweep) == 0:
            raise ValueError("sweep must contain at least one workload")
        for w in self.sweep:
            check_workload(w)
        if any(b <= a for a, b in zip(self.sweep, self.sweep[1:])):
            raise ValueError(f"sweep must be strictly increasing, got {self.sweep}")
        if not 0.0 <= self.fluctuation < 0.1:
            raise MagnitudeOutOfRangeError(
                f"fluctuation magnitude must be in [0, 0.1), got {self.fluctuation}"
            )
        if self.mem_total <= 0.0:
            raise ValueError(f"mem_total must be positive, got {self.mem_total}")
        self.embedding_config()  # validates dimension and rounds

    def embedding_config(self) -> EmbeddingConfig:
        """Embedding stack for this run; weights are drawn from the run seed."""
        return EmbeddingConfig(
            dimension=self.dimension,
            rounds=self.rounds,
            activation=self.activation,
            weight_seed=self.seed,
        )


@dataclass(frozen=True)
class TrajectoryMetrics:
    """Shape summary of the distance-versus-workload curve."""

    min_distance_workload: int
    left_monotone: bool
    right_monotone: bool


@dataclass(frozen=True, eq=False)
class DriftResult:
    """Everything a drift run produced, ready for export."""

    config: DriftConfig
    graph: KnowledgeGraph
    target: str
    baseline_map: KnowledgeMap
    step_maps: list[KnowledgeMap]
    centroid_distances: list[float]
    metrics: TrajectoryMetrics
    projection_labels: list[str]
    projection_workloads: list[int]
    projection: np.ndarray
    rounds_used: list[int]


def trajectory_metrics(
    workloads: Sequence[int],
    distances: Sequence[float],
    baseline: int,
    tolerance: float = MONOTONE_TOLERANCE,
) -> TrajectoryMetrics:
    """Summarize a distance curve sampled at increasing workloads.

    Ties at the minimum resolve to the lowest workload.  Each side of the
    baseline is tested separately: falling toward it on the left, rising
    away from it on the right, with slack for float noise.
    """
    if len(workloads) != len(distances):
        raise DimensionMismatchError(
            f"{len(workloads)} workloads vs {len(distances)} distances"
        )
    if len(workloads) < 3:
        raise TooFewStepsError(
            f"need at least 3 sweep steps to assess shape, got {len(workloads)}"
        )
    if any(b <= a for a, b in zip(workloads, workloads[1:])):
        raise ValueError(f"workloads must be strictly increasing, got {workloads}")
    best = int(np.argmin(distances))
    left = [d for w, d in zip(workloads, distances) if w <= baseline]
    right = [d for w, d in zip(workloads, distances) if w >= baseline]
    left_ok = all(b <= a + tolerance for a, b in zip(left, left[1:]))
    right_ok = all(b >= a - tolerance for a, b in zip(right, right[1:]))
    return TrajectoryMetrics(
        min_distance_workload=int(workloads[best]),
        left_monotone=left_ok,
        right_monotone=right_ok,
    )


def _settle(
    graph: KnowledgeGraph,
    vectors: dict[str, np.ndarray],
    config: DriftConfig,
) -> KnowledgeMap:
    """Full pipeline for one feature assignment: input round, then sharing."""
    embedding = config.embedding_config()
    input_layer, hidden_layer = init_layers(embedding)
    first = embedding_round(graph, vectors, input_layer, embedding.activation)
    shared = run_sharing(
        graph,
        first,
        hidden_layer,
        embedding.activation,
        SharingConfig(
            max_rounds=embedding.rounds - 1,
            tolerance=config.sharing_tolerance,
        ),
    )
    return KnowledgeMap(
        entries=shared.entries,
        rounds_used=shared.rounds_used + 1,
        converged=shared.converged,
        final_delta=shared.final_delta,
    )


def run_drift(config: DriftConfig) -> DriftResult:
    """Run the full drift experiment described by config."""
    graph = build_topology(config.topology, config.nodes)
    target = config.target if config.target is not None else node_name(0)
    if not graph.has_node(target):
        raise UnknownNodeError(f"target {target!r} is not in the graph")

    base = features_at(config.baseline_workload, config.mem_total)
    baseline_vectors = {
        v: feature_vector(
            apply_fluctuation(base, config.seed, config.fluctuation, node_id=v, step=0)
        )
        for v in graph.node_ids()
    }
    baseline_map = _settle(graph, baseline_vectors, config)

    centroid_distances: list[float] = []
    target_rows: list[np.ndarray] = []
    step_maps: list[KnowledgeMap] = []
    for step_index, workload in enumerate(config.sweep, start=1):
        vectors: dict[str, np.ndarray] = {}
        for v in graph.node_ids():
            if v == target:
                # The target is pinned exactly; only the peers keep jittering.
                vectors[v] = feature_vector(set_workload(base, workload))
            else:
                vectors[v] = feature_vector(
                    apply_fluctuation(
                        base, config.seed, config.fluctuation, node_id=v, step=step_index
                    )
                )
        step_map = _settle(graph, vectors, config)
        peers = [step_map.entries[u] for u in graph.node_ids() if u != target]
        distance = float(np.linalg.norm(step_map.entries[target] - aggregate(peers)))
        centroid_distances.append(distance)
        target_rows.append(step_map.entries[target])
        step_maps.append(step_map)

    labels = [f"baseline:{v}" for v in graph.node_ids()]
    labels += [f"target:{target}"] * len(config.sweep)
    workloads = [config.baseline_workload] * graph.node_count + list(config.sweep)
    rows = np.stack(
        [baseline_map.entries[v] for v in graph.node_ids()] + target_rows
    )
    try:
        model = fit_pca(rows, components=2)
        projection = transform(model, rows)
    except DegenerateInputError:
        # A sweep with no variation projects every row to the origin.
        projection = np.zeros((rows.shape[0], 2))

    if len(config.sweep) >= 3:
        metrics = trajectory_metrics(
            config.sweep, centroid_distances, config.baseline_workload
        )
    else:
        best = int(np.argmin(centroid_distances))
        metrics = TrajectoryMetrics(
            min_distance_workload=int(config.sweep[best]),
            left_monotone=True,
            right_monotone=True,
        )

    return DriftResult(
        config=config,
        graph=graph,
        target=target,
        baseline_map=baseline_map,
        step_maps=step_maps,
        centroid_distances=centroid_distances,
        metrics=metrics,
        projection_labels=labels,
        projection_workloads=workloads,
        projection=projection,
        rounds_used=[step_map.rounds_used for step_map in step_maps],
    )


def metrics_to_dict(result: DriftResult) -> dict:
    """JSON-ready summary of one drift run."""
    return {
        "topology": result.config.topology.value,
        "n": result.config.nodes,
        "target": result.target,
        "sweep": list(result.config.sweep),
        "centroid_distance": [float(d) for d in result.centroid_distances],
        "min_distance_workload": result.metrics.min_distance_workload,
        "left_monotone": result.metrics.left_monotone,
        "right_monotone": result.metrics.right_monotone,
        "rounds_used": list(result.rounds_used),
    }


def write_metrics_json(path: str | Path, result: DriftResult) -> None:
    """Serialize the run summary deterministically."""
    with open(path, "w") as handle:
        json.dump(metrics_to_dict(result), handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_projection_csv(path: str | Path, result: DriftResult) -> None:
    """Write projected rows as CSV: label,workload_pct,x,y.

    Baseline rows come first in node order, then the target trajectory in
    sweep order, matching the row order the projection was fitted on.
    """
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["label", "workload_pct", "x", "y"])
        for label, workload, point in zip(
            result.projection_labels, result.projection_workloads, result.projection
        ):
            writer.writerow(
                [label, workload, format(point[0], ".17g"), format(point[1], ".17g")]
            )


def export_result(result: DriftResult, directory: str | Path) -> list[Path]:
    """Write every artifact of one run into directory, returning the paths.

    Artifacts: run summary JSON, projected points CSV, baseline map JSON,
    trajectory SVG, plus one settled-embedding CSV for the baseline and for
    each sweep step.  Reruns with the same config are byte-identical.
    """
    from .svgplot import write_drift_svg

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def target(name: str) -> Path:
        written.append(out / name)
        return written[-1]

    write_metrics_json(target("metrics.json"), result)
    write_projection_csv(target("projection.csv"), result)
    write_knowledge_map_json(target("knowledge_map.json"), result.baseline_map)
    write_drift_svg(target("trajectory.svg"), result)
    write_knowledge_map_csv(target("embeddings_baseline.csv"), result.baseline_map)
    for workload, step_map in zip(result.config.sweep, result.step_maps):
        write_knowledge_map_csv(target(f"embeddings_w{workload:03d}.csv"), step_map)
    return written
