"""Neighborhood-aggregating embedding layers over the knowledge graph.

Each round every node mixes its own state with the mean of its neighbors'
states through two weight matrices, applies a pointwise activation, and is
projected back onto the unit sphere.  Repeating the round widens the
receptive field by one hop.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    NodeSetMismatchError,
    ZeroVectorError,
)
from .graph import KnowledgeGraph

DEFAULT_DIMENSION = 8
DEFAULT_ROUNDS = 2
DEFAULT_WEIGHT_SEED = 7
FEATURE_DIMENSION = 3

# Stream indices for the two layers drawn from one weight seed.
_INPUT_LAYER_STREAM = 0
_HIDDEN_LAYER_STREAM = 1


class Activation(Enum):
    """Pointwise nonlinearity applied after the linear mix."""

    RELU = "relu"
    SIGMOID = "sigmoid"
    IDENTITY = "identity"

    def apply(self, x: np.ndarray) -> np.ndarray:
        if self is Activation.RELU:
            return np.maximum(x, 0.0)
        if self is Activation.SIGMOID:
            return 1.0 / (1.0 + np.exp(-x))
        return x


@dataclass(frozen=True, eq=False)
class Layer:
    """One embedding round: separate weights for the node and its neighborhood."""

    self_weights: np.ndarray
    neighbor_weights: np.ndarray

    def __post_init__(self) -> None:
        if self.self_weights.shape != self.neighbor_weights.shape:
            raise DimensionMismatchError(
                "self and neighbor weight matrices must share a shape, got "
                f"{self.self_weights.shape} and {self.neighbor_weights.shape}"
            )

    @property
    def in_dim(self) -> int:
        return self.self_weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.self_weights.shape[0]


@dataclass(frozen=True)
class EmbeddingConfig:
    """Shape and seeding of the embedding stack."""

    dimension: int = DEFAULT_DIMENSION
    rounds: int = DEFAULT_ROUNDS
    activation: Activation = Activation.SIGMOID
    weight_seed: int = DEFAULT_WEIGHT_SEED

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")


def init_layer(in_dim: int, out_dim: int, seed_material: Sequence[int]) -> Layer:
    """Draw both weight matrices uniformly from [-a, a], a = sqrt(6/(in+out)).

    The bound keeps activations in a comparable range across dimensions.
    """
    if in_dim < 1 or out_dim < 1:
        raise ValueError(f"layer dims must be >= 1, got {in_dim}x{out_dim}")
    rng = np.random.default_rng(np.random.SeedSequence(list(seed_material)))
    bound = np.sqrt(6.0 / (in_dim + out_dim))
    self_w = rng.uniform(-bound, bound, size=(out_dim, in_dim))
    neighbor_w = rng.uniform(-bound, bound, size=(out_dim, in_dim))
    return Layer(self_weights=self_w, neighbor_weights=neighbor_w)


def init_layers(config: EmbeddingConfig, in_dim: int = FEATURE_DIMENSION) -> tuple[Layer, Layer]:
    """Input layer (features -> embedding) and hidden layer (embedding -> embedding).

    The hidden layer is shared across all rounds after the first.
    """
    input_layer = init_layer(
        in_dim, config.dimension, [config.weight_seed, _INPUT_LAYER_STREAM]
    )
    hidden_layer = init_layer(
        config.dimension, config.dimension, [config.weight_seed, _HIDDEN_LAYER_STREAM]
    )
    return input_layer, hidden_layer


def aggregate(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Mean of the neighborhood states.  Order of the inputs must not matter."""
    if len(vectors) == 0:
        raise EmptyInputError("cannot aggregate an empty neighborhood")
    dims = {v.shape for v in vectors}
    if len(dims) > 1:
        raise DimensionMismatchError(f"mixed vector shapes in aggregation: {dims}")
    return np.mean(np.stack(vectors), axis=0)


def normalize(vector: np.ndarray) -> np.ndarray:
    """Project onto the unit sphere.  The zero vector has no direction."""
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        raise ZeroVectorError("cannot normalize the zero vector")
    return vector / norm


def layer_forward(
    layer: Layer,
    self_vector: np.ndarray,
    neighbor_vectors: Sequence[np.ndarray],
    activation: Activation = Activation.SIGMOID,
) -> np.ndarray:
    """One node's update: normalize(act(W_self x + W_nbr mean(neighbors))).

    An isolated node contributes no neighborhood term.
    """
    if self_vector.shape != (layer.in_dim,):
        raise DimensionMismatchError(
            f"expected input of shape ({layer.in_dim},), got {self_vector.shape}"
        )
    mixed = layer.self_weights @ self_vector
    if len(neighbor_vectors) > 0:
        mixed = mixed + layer.neighbor_weights @ aggregate(neighbor_vectors)
    return normalize(activation.apply(mixed))


def embedding_round(
    graph: KnowledgeGraph,
    states: Mapping[str, np.ndarray],
    layer: Layer,
    activation: Activation,
) -> dict[str, np.ndarray]:
    """Apply one layer synchronously: every node reads pre-round states."""
    if set(states) != set(graph.node_ids()):
        raise NodeSetMismatchError("state keys must match the graph's node set")
    result: dict[str, np.ndarray] = {}
    for node_id in graph.node_ids():
        neighbor_states = [states[u] for u in graph.neighbors(node_id)]
        result[node_id] = layer_forward(
            layer, states[node_id], neighbor_states, activation
        )
    return result


def embed_graph(
    graph: KnowledgeGraph,
    vectors: Mapping[str, np.ndarray],
    config: EmbeddingConfig,
) -> dict[str, np.ndarray]:
    """Embed every node: one input round, then rounds-1 hidden rounds."""
    return embedding_rounds(graph, vectors, config)[-1]


def embedding_rounds(
    graph: KnowledgeGraph,
    vectors: Mapping[str, np.ndarray],
    config: EmbeddingConfig,
) -> list[dict[str, np.ndarray]]:
    """Per-round embedding snapshots, index 0 holding the round-1 result."""
    input_layer, hidden_layer = init_layers(config, in_dim=_input_dim(vectors))
    snapshots = [embedding_round(graph, vectors, input_layer, config.activation)]
    for _ in range(config.rounds - 1):
        snapshots.append(
            embedding_round(graph, snapshots[-1], hidden_layer, config.activation)
        )
    return snapshots


def _input_dim(vectors: Mapping[str, np.ndarray]) -> int:
    if not vectors:
        raise EmptyInputError("cannot embed an empty graph")
    dims = {v.shape for v in vectors.values()}
    if len(dims) > 1:
        raise DimensionMismatchError(f"mixed input vector shapes: {dims}")
    (shape,) = dims
    if len(shape) != 1:
        raise DimensionMismatchError(f"input vectors must be 1-D, got shape {shape}")
    return shape[0]


def write_embedding_csv(
    path: str | Path, snapshots: Sequence[Mapping[str, np.ndarray]]
) -> None:
    """Write per-round embeddings as CSV: node_id,round,e0..e{k-1}.

    Rounds are numbered from 1.  Rows are ordered by round, then node id,
    and floats use repr-exact formatting so reruns are byte-identical.
    """
    if len(snapshots) == 0:
        raise EmptyInputError("no embedding rounds to write")
    dimension = len(next(iter(snapshots[0].values())))
    header = ["node_id", "round"] + [f"e{i}" for i in range(dimension)]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for round_index, snapshot in enumerate(snapshots, start=1):
            for node_id in sorted(snapshot):
                row = [node_id, round_index]
                row += [format(x, ".17g") for x in snapshot[node_id]]
                writer.writerow(row)
