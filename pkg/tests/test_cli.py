import json

import numpy as np
import pytest

from clustertree.cli import main


def write_points(path, rows="0.0\n1.0\n3.0\n"):
    path.write_text(rows)
    return str(path)


def test_tree_subcommand(tmp_path, capsys):
    pts = write_points(tmp_path / "p.csv")
    out = tmp_path / "t.json"
    rc = main(["tree", pts, "--k", "2", "--alpha", "1", "--rule", "rsl",
               "--out", str(out)])
    assert rc == 0
    assert f"wrote {out}" in capsys.readouterr().out
    doc = json.loads(out.read_text())
    kinds = [e["kind"] for e in doc["events"]]
    assert kinds == ["birth", "birth", "merge", "birth", "merge"]
    assert doc["n"] == 3 and doc["d"] == 1 and doc["k"] == 2


def test_tree_deterministic_bytes(tmp_path):
    pts = write_points(tmp_path / "p.csv")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["tree", pts, "--k", "2", "--out", str(a)]) == 0
    assert main(["tree", pts, "--k", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cut_by_radius(tmp_path):
    pts = write_points(tmp_path / "p.csv")
    tree = tmp_path / "t.json"
    main(["tree", pts, "--k", "2", "--alpha", "1", "--out", str(tree)])
    labels = tmp_path / "l.csv"
    rc = main(["cut", str(tree), "--cut-r", "1.5", "--out", str(labels)])
    assert rc == 0
    assert labels.read_text() == "point,label\n0,0\n1,0\n2,unborn\n"


def test_cut_by_level(tmp_path):
    pts = write_points(tmp_path / "p.csv")
    tree = tmp_path / "t.json"
    main(["tree", pts, "--k", "2", "--alpha", "1", "--out", str(tree)])
    labels = tmp_path / "l.csv"
    # with the plug-in scale, r(lambda) = (k/n) / (2 lambda); lambda = 1/3
    # gives radius 1, where points 0 and 1 share a component
    rc = main(["cut", str(tree), "--cut-lambda", str(1 / 3), "--out", str(labels)])
    assert rc == 0
    assert labels.read_text() == "point,label\n0,0\n1,0\n2,unborn\n"


def test_cut_requires_exactly_one_mode(tmp_path, capsys):
    pts = write_points(tmp_path / "p.csv")
    tree = tmp_path / "t.json"
    main(["tree", pts, "--k", "2", "--out", str(tree)])
    out = tmp_path / "l.csv"
    assert main(["cut", str(tree), "--out", str(out)]) == 4
    assert main(["cut", str(tree), "--cut-r", "1", "--cut-lambda", "2",
                 "--out", str(out)]) == 4
    err = capsys.readouterr().err
    assert "exactly one" in err


def test_prune_subcommand(tmp_path):
    rng = np.random.default_rng(5)
    rows = "".join(f"{x}\n" for x in rng.uniform(0, 1, size=25))
    pts = write_points(tmp_path / "p.csv", rows)
    tree = tmp_path / "t.json"
    main(["tree", pts, "--k", "3", "--out", str(tree)])
    pruned = tmp_path / "pr.json"
    rc = main(["prune", str(tree), "--eps-tilde", "4", "--out", str(pruned)])
    assert rc == 0
    doc = json.loads(pruned.read_text())
    assert doc["provenance"]["pruned"] is True
    assert doc["provenance"]["eps_tilde"] == 4.0
    n_base = len(json.loads(tree.read_text())["events"])
    assert len(doc["events"]) >= n_base


def test_dendrogram_subcommand(tmp_path):
    pts = write_points(tmp_path / "p.csv")
    tree = tmp_path / "t.json"
    main(["tree", pts, "--k", "2", "--out", str(tree)])
    svg = tmp_path / "t.svg"
    rc = main(["dendrogram", str(tree), "--width", "300", "--height", "200",
               "--out", str(svg)])
    assert rc == 0
    text = svg.read_text()
    assert text.startswith("<svg ") and text.rstrip().endswith("</svg>")


def test_validate_disconnection(tmp_path):
    rep = tmp_path / "rep.json"
    rc = main(["validate", "disconnection", "--big-lambda", "64", "--k", "1",
               "--alpha", "2", "--n", "300", "--trials", "3", "--seed", "9",
               "--out", str(rep)])
    assert rc == 0
    doc = json.loads(rep.read_text())
    assert doc["name"] == "mutual-knn-disconnection"
    assert doc["trials"] == 3
    assert doc["metrics"]["disconnected_fraction"] == 1.0


def test_validate_separation_smoke(tmp_path):
    rep = tmp_path / "rep.json"
    rc = main(["validate", "separation", "--n", "300", "--k", "15",
               "--c0", "0.75", "--trials", "2", "--seed", "4",
               "--out", str(rep)])
    assert rc == 0
    doc = json.loads(rep.read_text())
    assert doc["name"] == "separation-connectedness"
    assert doc["parameters"]["n"] == 300


def test_validate_hartigan_grid_parsing(tmp_path):
    rep = tmp_path / "rep.json"
    rc = main(["validate", "hartigan", "--k", "10", "--n-grid", "80,160",
               "--trials", "2", "--seed", "1", "--out", str(rep)])
    assert rc == 0
    doc = json.loads(rep.read_text())
    assert doc["parameters"]["n_grid"] == [80, 160]
    assert len(doc["metrics"]["rates"]) == 2


def test_exit_codes(tmp_path, capsys):
    # missing input file: bad data
    assert main(["tree", str(tmp_path / "nope.csv"), "--k", "2",
                 "--out", str(tmp_path / "o.json")]) == 3
    # bad parameter value: k above n
    pts = write_points(tmp_path / "p.csv")
    assert main(["tree", pts, "--k", "9", "--out", str(tmp_path / "o.json")]) == 4
    # usage error from argparse
    with pytest.raises(SystemExit) as exc:
        main(["tree", pts, "--rule", "bogus", "--out", str(tmp_path / "o.json")])
    assert exc.value.code == 2
    capsys.readouterr()


def test_missing_required_parameter(tmp_path, capsys):
    pts = write_points(tmp_path / "p.csv")
    assert main(["tree", pts, "--out", str(tmp_path / "o.json")]) == 4
    assert "--k" in capsys.readouterr().err


def test_config_file_fills_missing_flags(tmp_path):
    pts = write_points(tmp_path / "p.csv")
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"k": 2, "alpha": 1.0}')
    out = tmp_path / "t.json"
    rc = main(["tree", pts, "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["k"] == 2 and doc["alpha"] == 1.0
    # explicit flags win over the config
    out2 = tmp_path / "t2.json"
    main(["tree", pts, "--config", str(cfg), "--k", "3", "--out", str(out2)])
    assert json.loads(out2.read_text())["k"] == 3


def test_config_env_var(tmp_path, monkeypatch):
    pts = write_points(tmp_path / "p.csv")
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"k": 2}')
    monkeypatch.setenv("CLUSTERTREE_CONFIG", str(cfg))
    out = tmp_path / "t.json"
    assert main(["tree", pts, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["k"] == 2
