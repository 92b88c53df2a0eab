"""CLI behavior: defaults, artifacts, exit codes, and determinism."""

import json
from xml.etree import ElementTree

import pytest

from knowmap.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_RUNTIME,
    KNOWLEDGE_MAP_FILE,
    METRICS_FILE,
    PLOT_FILE,
    PROJECTION_FILE,
    build_parser,
    main,
)
from knowmap.drift import DEFAULT_BASELINE, DEFAULT_SEED
from knowmap.embedding import DEFAULT_DIMENSION, DEFAULT_ROUNDS
from knowmap.features import DEFAULT_MAGNITUDE
from knowmap.sharing import DEFAULT_TOLERANCE

DRIFT_FILES = (METRICS_FILE, PROJECTION_FILE, KNOWLEDGE_MAP_FILE, PLOT_FILE)


def test_drift_defaults_track_module_constants():
    args = build_parser().parse_args(["drift"])
    assert args.topology == "ring"
    assert args.nodes == 10
    assert args.seed == DEFAULT_SEED
    assert args.target is None
    assert args.baseline == DEFAULT_BASELINE
    assert args.dim == DEFAULT_DIMENSION
    assert args.rounds == DEFAULT_ROUNDS
    assert args.tolerance == DEFAULT_TOLERANCE
    assert args.fluctuation == DEFAULT_MAGNITUDE
    assert args.out == "."


def test_drift_writes_all_artifacts(tmp_path, capsys):
    code = main(["drift", "--nodes", "5", "--out", str(tmp_path)])
    assert code == EXIT_OK
    for name in DRIFT_FILES:
        assert (tmp_path / name).is_file(), name
    assert (tmp_path / "embeddings_baseline.csv").is_file()
    step_files = sorted(p.name for p in tmp_path.glob("embeddings_w*.csv"))
    assert step_files == [f"embeddings_w{w:03d}.csv" for w in range(0, 101, 10)]
    out = capsys.readouterr().out
    assert out.count("wrote ") == len(list(tmp_path.iterdir()))
    assert "min_distance_workload=" in out


def test_drift_metrics_reflect_flags(tmp_path):
    main(
        [
            "drift",
            "--topology",
            "line",
            "--nodes",
            "6",
            "--target",
            "node-2",
            "--out",
            str(tmp_path),
        ]
    )
    data = json.loads((tmp_path / METRICS_FILE).read_text())
    assert data["topology"] == "line"
    assert data["n"] == 6
    assert data["target"] == "node-2"


def test_drift_runs_are_byte_identical(tmp_path):
    dirs = (tmp_path / "one", tmp_path / "two")
    for d in dirs:
        assert main(["drift", "--nodes", "5", "--out", str(d)]) == EXIT_OK
    names = sorted(p.name for p in dirs[0].iterdir())
    assert sorted(p.name for p in dirs[1].iterdir()) == names
    for name in names:
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes(), name


def test_drift_rejects_too_small_ring(tmp_path, capsys):
    code = main(["drift", "--topology", "ring", "--nodes", "2", "--out", str(tmp_path)])
    assert code == EXIT_CONFIG
    assert "error:" in capsys.readouterr().err


def test_drift_rejects_bad_baseline(tmp_path, capsys):
    code = main(["drift", "--baseline", "55", "--out", str(tmp_path)])
    assert code == EXIT_CONFIG
    assert "error:" in capsys.readouterr().err


def test_drift_rejects_bad_fluctuation(tmp_path):
    assert main(["drift", "--fluctuation", "0.5", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_drift_rejects_unknown_target(tmp_path):
    code = main(["drift", "--nodes", "5", "--target", "node-99", "--out", str(tmp_path)])
    assert code == EXIT_CONFIG


def test_help_exits_zero_and_lists_flags(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["drift", "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    for flag in (
        "--topology",
        "--nodes",
        "--seed",
        "--target",
        "--baseline",
        "--dim",
        "--rounds",
        "--tolerance",
        "--fluctuation",
        "--out",
    ):
        assert flag in text


def test_top_level_help_exits_zero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for command in ("drift", "topology", "embed", "plot"):
        assert command in out


def test_summary_line_names_the_configuration(tmp_path, capsys):
    main(["drift", "--topology", "full", "--nodes", "5", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert "topology=full n=5 min_distance_workload=" in out


def test_unknown_flag_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["drift", "--frobnicate"])
    assert exc.value.code == 2


def test_missing_subcommand_exits_two():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_topology_prints_canonical_json(capsys):
    assert main(["topology", "--kind", "ring", "--nodes", "3"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert len(data["nodes"]) == 3
    assert len(data["edges"]) == 6


def test_topology_writes_file(tmp_path, capsys):
    path = tmp_path / "ring.json"
    assert main(["topology", "--kind", "full", "--nodes", "4", "--out", str(path)]) == EXIT_OK
    data = json.loads(path.read_text())
    assert len(data["edges"]) == 12
    assert "wrote" in capsys.readouterr().out


def test_topology_rejects_invalid_size(capsys):
    assert main(["topology", "--kind", "ring", "--nodes", "1"]) == EXIT_CONFIG
    assert "error:" in capsys.readouterr().err


def test_embed_writes_per_round_rows(tmp_path):
    path = tmp_path / "emb.csv"
    code = main(
        ["embed", "--topology", "line", "--nodes", "4", "--rounds", "3", "--out", str(path)]
    )
    assert code == EXIT_OK
    lines = path.read_text().splitlines()
    assert lines[0].startswith("node_id,round,e0")
    assert len(lines) == 1 + 4 * 3


def test_embed_rejects_bad_workload(tmp_path):
    path = tmp_path / "emb.csv"
    assert main(["embed", "--workload", "33", "--out", str(path)]) == EXIT_CONFIG


def test_plot_round_trips_a_projection(tmp_path):
    assert main(["drift", "--nodes", "5", "--out", str(tmp_path)]) == EXIT_OK
    out = tmp_path / "replot.svg"
    code = main(
        ["plot", "--projection", str(tmp_path / PROJECTION_FILE), "--out", str(out)]
    )
    assert code == EXIT_OK
    text = out.read_text()
    # one circle per data row: 5 baseline nodes + 11 sweep steps
    assert text.count("<circle") == 16
    assert "<polyline" in text
    ElementTree.fromstring(text)  # must be well-formed XML


def test_plot_missing_file_is_a_runtime_error(tmp_path, capsys):
    code = main(["plot", "--projection", str(tmp_path / "nope.csv")])
    assert code == EXIT_RUNTIME
    assert "error:" in capsys.readouterr().err


def test_plot_malformed_csv_is_a_config_error(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("label,workload_pct,x,y\nrow,notanint,0.0,0.0\n")
    assert main(["plot", "--projection", str(bad)]) == EXIT_CONFIG
    bad.write_text("wrong,header\n")
    assert main(["plot", "--projection", str(bad)]) == EXIT_CONFIG
    bad.write_text("label,workload_pct,x,y\n")
    assert main(["plot", "--projection", str(bad)]) == EXIT_CONFIG
