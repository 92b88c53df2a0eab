"""Sharing-loop convergence and Knowledge Map serialization tests."""

import json

import numpy as np
import pytest

from knowmap.embedding import (
    Activation,
    EmbeddingConfig,
    embedding_round,
    init_layers,
    normalize,
)
from knowmap.errors import EmptyInputError
from knowmap.features import feature_vector, features_at
from knowmap.graph import TopologyKind, build_topology, node_name
from knowmap.sharing import (
    KnowledgeMap,
    SharingConfig,
    knowledge_map_to_dict,
    run_sharing,
    states_delta,
    write_knowledge_map_csv,
    write_knowledge_map_json,
)


def ring_setup(n=5, dim=4, seed=3):
    graph = build_topology(TopologyKind.RING, n)
    config = EmbeddingConfig(dimension=dim, weight_seed=seed)
    input_layer, hidden_layer = init_layers(config)
    rng = np.random.default_rng(0)
    raw = {v: rng.uniform(0.1, 1.0, 3) for v in graph.node_ids()}
    states = embedding_round(graph, raw, input_layer, Activation.SIGMOID)
    return graph, states, hidden_layer


def test_sharing_config_validation():
    with pytest.raises(ValueError):
        SharingConfig(max_rounds=-1)
    with pytest.raises(ValueError):
        SharingConfig(tolerance=-1e-9)


def test_states_delta_is_max_movement():
    before = {"a": np.array([0.0, 0.0]), "b": np.array([1.0, 0.0])}
    after = {"a": np.array([3.0, 4.0]), "b": np.array([1.0, 1.0])}
    assert states_delta(before, after) == 5.0
    with pytest.raises(EmptyInputError):
        states_delta({}, {})


def test_zero_tolerance_runs_exactly_max_rounds():
    graph, states, layer = ring_setup()
    result = run_sharing(graph, states, layer, config=SharingConfig(5, 0.0))
    assert result.rounds_used == 5
    assert not result.converged
    assert result.final_delta > 0.0


def test_zero_max_rounds_returns_input():
    graph, states, layer = ring_setup()
    result = run_sharing(graph, states, layer, config=SharingConfig(0, 0.0))
    assert result.rounds_used == 0
    assert result.final_delta == 0.0
    for v in states:
        assert np.array_equal(result.entries[v], states[v])


def test_sharing_converges_on_uniform_ring():
    # the sigmoid layer is a contraction here, so the default tolerance
    # is reached well before the round cap
    graph, states, layer = ring_setup()
    result = run_sharing(graph, states, layer)
    assert result.converged
    assert result.rounds_used < SharingConfig().max_rounds
    assert result.final_delta < SharingConfig().tolerance
    for v in result.entries:
        assert abs(np.linalg.norm(result.entries[v]) - 1.0) < 1e-12


def test_one_round_equals_direct_layer_application():
    graph, states, layer = ring_setup()
    result = run_sharing(graph, states, layer, config=SharingConfig(1, 0.0))
    direct = embedding_round(graph, states, layer, Activation.SIGMOID)
    for v in states:
        assert np.array_equal(result.entries[v], direct[v])


def test_sharing_is_deterministic():
    graph, states, layer = ring_setup()
    a = run_sharing(graph, states, layer)
    b = run_sharing(graph, states, layer)
    assert a.rounds_used == b.rounds_used
    assert a.final_delta == b.final_delta
    for v in states:
        assert a.entries[v].tobytes() == b.entries[v].tobytes()


def test_uniform_features_collapse_is_avoided_by_normalization():
    # identical inputs give identical (not zero) embeddings on a regular graph
    graph = build_topology(TopologyKind.RING, 5)
    vectors = {v: feature_vector(features_at(50)) for v in graph.node_ids()}
    config = EmbeddingConfig(dimension=4, weight_seed=2)
    input_layer, hidden_layer = init_layers(config)
    states = embedding_round(graph, vectors, input_layer, Activation.SIGMOID)
    result = run_sharing(graph, states, hidden_layer)
    reference = result.entries["node-0"]
    assert np.linalg.norm(reference) > 0.0
    for v in graph.node_ids():
        assert np.allclose(result.entries[v], reference)


def test_knowledge_map_dict_shape():
    kmap = KnowledgeMap(
        entries={"b": np.array([1.0, 0.0]), "a": np.array([0.0, 1.0])},
        rounds_used=3,
        converged=True,
        final_delta=1e-8,
    )
    data = knowledge_map_to_dict(kmap)
    assert data["round"] == 3
    assert data["converged"] is True
    assert data["final_delta"] == 1e-8
    assert list(data["entries"]) == ["a", "b"]
    assert data["entries"]["b"] == [1.0, 0.0]


def test_knowledge_map_json_is_reproducible(tmp_path):
    graph, states, layer = ring_setup()
    result = run_sharing(graph, states, layer)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_knowledge_map_json(a, result)
    write_knowledge_map_json(b, result)
    assert a.read_bytes() == b.read_bytes()
    parsed = json.loads(a.read_text())
    assert set(parsed) == {"round", "converged", "final_delta", "entries"}
    assert parsed["entries"]["node-0"] == [float(x) for x in result.entries["node-0"]]


def test_information_spreads_one_hop_per_round():
    # a single divergent node on a line contaminates exactly one extra
    # neighbour per synchronous round; everything farther is bit-identical
    graph = build_topology(TopologyKind.LINE, 7)
    _, hidden_layer = init_layers(EmbeddingConfig(weight_seed=5))
    dim = hidden_layer.out_dim
    base = normalize(np.linspace(0.2, 0.9, dim))
    odd = normalize(np.linspace(0.9, 0.2, dim))
    uniform = {node_name(i): base.copy() for i in range(7)}
    seeded = dict(uniform)
    seeded[node_name(0)] = odd.copy()
    for rounds in range(1, 5):
        plain, touched = dict(uniform), dict(seeded)
        for _ in range(rounds):
            plain = embedding_round(graph, plain, hidden_layer, Activation.SIGMOID)
            touched = embedding_round(graph, touched, hidden_layer, Activation.SIGMOID)
        differing = sorted(v for v in plain if plain[v].tobytes() != touched[v].tobytes())
        assert differing == [node_name(i) for i in range(rounds + 1)]


def test_write_knowledge_map_csv_layout(tmp_path):
    entries = {
        "node-1": np.array([0.25, 0.5]),
        "node-0": np.array([1.0 / 3.0, 2.0 / 3.0]),
    }
    kmap = KnowledgeMap(entries=entries, rounds_used=4, converged=True, final_delta=0.0)
    path = tmp_path / "map.csv"
    write_knowledge_map_csv(path, kmap)
    lines = path.read_text().splitlines()
    assert lines[0] == "node_id,round,e0,e1"
    assert lines[1].startswith("node-0,4,")
    assert lines[2].startswith("node-1,4,")
    cells = lines[1].split(",")
    assert float(cells[2]) == 1.0 / 3.0
    assert float(cells[3]) == 2.0 / 3.0


def test_write_knowledge_map_csv_rejects_empty(tmp_path):
    kmap = KnowledgeMap(entries={}, rounds_used=0, converged=False, final_delta=0.0)
    with pytest.raises(EmptyInputError):
        write_knowledge_map_csv(tmp_path / "map.csv", kmap)
