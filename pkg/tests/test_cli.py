import json
import subprocess
import sys

import pytest

from interchange_gap.cli import SearchConfig, is_uniform_four_cycle, main, run_search, verify_main
from interchange_gap.graphcore import WeightedGraph, parse_graph


@pytest.fixture
def graphs(tmp_path):
    files = {
        "c4": "n=4\n1 2 1\n2 3 1\n3 4 1\n1 4 1\n",
        "c4b": "n=4\n1 3 1\n2 3 1\n1 4 2\n2 4 2\n",
        "k3": "n=3\n1 2 1\n1 3 1\n2 3 1\n",
        "dup": "n=4\n1 2 1\n1 2 2\n",
        "split": "n=4\n1 2 1\n3 4 1\n",
        "big": "n=9\n" + "".join(f"{i} {i + 1} 1\n" for i in range(1, 9)),
    }
    out = {}
    for name, text in files.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        out[name] = str(p)
    return out


def run(argv, capsys):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(argv, capsys):
    code, out, _ = run(argv + ["--json", "-", "--quiet"], capsys)
    return code, json.loads(out)


def test_uniform_four_cycle_detection():
    assert is_uniform_four_cycle(parse_graph("n=4\n1 3 2\n2 3 2\n1 4 2\n2 4 2\n"))
    assert not is_uniform_four_cycle(parse_graph("n=4\n1 3 1\n2 3 1\n1 4 2\n2 4 2\n"))
    assert not is_uniform_four_cycle(parse_graph("n=4\n1 2 1\n2 3 1\n3 4 1\n"))
    assert not is_uniform_four_cycle(parse_graph("n=4\n1 2 1\n1 3 1\n1 4 1\n2 3 1\n"))


def test_verify_main_verdicts(graphs, capsys):
    code, rep = run_json(["verify-main", "--graph", graphs["c4"]], capsys)
    assert code == 0 and rep["verdict"] == "four-cycle-exception"
    row = {r["mu"]: r for r in rep["table"]}
    assert row["(2,2)"]["lambda_min"] == pytest.approx(2) and row["(2,2)"]["multiplicity"] == 1
    assert row["(2,1,1)"]["gap"] > 1e-6 and row["(1,1,1,1)"]["gap"] > 1e-6
    assert rep["reference"]["multiplicity"] == 2

    for name in ("c4b", "k3"):
        code, rep = run_json(["verify-main", "--graph", graphs[name]], capsys)
        assert code == 0 and rep["verdict"] == "standard-rep-unique" and rep["offenders"] == []


def test_verify_main_json_is_reproducible(graphs, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify-main", "--graph", graphs["c4b"], "--json", str(path), "--quiet"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "timing_seconds" not in json.loads(a.read_text())
    code, rep = run_json(["verify-main", "--graph", graphs["c4b"], "--timing"], capsys)
    assert rep["timing_seconds"] >= 0


def test_verify_main_text_output(graphs, capsys):
    code, out, _ = run(["verify-main", "--graph", graphs["c4"]], capsys)
    assert code == 0 and "four-cycle-exception" in out


def test_margin_turns_a_tie_into_a_violation():
    # a huge margin demands gaps larger than any real one
    g = parse_graph("n=4\n1 3 1\n2 3 1\n1 4 2\n2 4 2\n")
    rep = verify_main(g, margin=100.0)
    assert rep["verdict"] == "violation" and rep["offenders"]


def test_usage_errors(graphs, capsys):
    code, _, err = run(["verify-main", "--graph", graphs["dup"]], capsys)
    assert code == 2 and "line 3" in err and "duplicate" in err
    assert run(["verify-main", "--graph", graphs["split"]], capsys)[0] == 2
    assert run(["verify-main", "--graph", graphs["big"]], capsys)[0] == 2
    assert run(["verify-main", "--graph", "/nonexistent/graph.txt"], capsys)[0] == 2
    assert run(["spectrum", "--graph", graphs["c4"], "--process", "teleport"], capsys)[0] == 2
    assert run(["reduce", "--graph", graphs["c4"], "--vertex", "9"], capsys)[0] == 2
    assert run(["octopus", "--graph", graphs["c4"], "--vertex", "4", "--mu", "3,3"], capsys)[0] == 2
    assert run(["no-such-command"], capsys)[0] == 2
    assert run([], capsys)[0] == 2


def test_spectrum_processes(graphs, capsys):
    code, rep = run_json(["spectrum", "--graph", graphs["c4"], "--process", "exclusion:2"], capsys)
    assert code == 0
    assert rep["index_legend"] == ["{1,2}", "{1,3}", "{1,4}", "{2,3}", "{2,4}", "{3,4}"]
    assert [c["multiplicity"] for c in rep["clusters"]] == [1, 3, 1, 1]
    assert rep["eigenvalues"] == pytest.approx([0, 2, 2, 2, 4, 6], abs=1e-9)

    code, rep = run_json(["spectrum", "--graph", graphs["c4"], "--process", "walk"], capsys)
    assert rep["eigenvalues"] == pytest.approx([0, 2, 2, 4], abs=1e-9)
    code, rep = run_json(["spectrum", "--graph", graphs["c4"], "--process", "colored:2,1,1"], capsys)
    assert rep["dimension"] == 12 and rep["clusters"][1]["multiplicity"] == 5
    code, rep = run_json(["spectrum", "--graph", graphs["c4"], "--process", "interchange"], capsys)
    assert rep["dimension"] == 24 and rep["clusters"][1]["multiplicity"] == 8


def test_reduce_command(graphs, capsys):
    code, rep = run_json(["reduce", "--graph", graphs["c4"], "--vertex", "4"], capsys)
    assert code == 0
    assert parse_graph(rep["reduced_text"]) == WeightedGraph(3, {(1, 2): 1, (1, 3): "1/2", (2, 3): 1})
    assert rep["index_map"] == {"1": 1, "2": 2, "3": 3}


def test_octopus_command(graphs, capsys):
    code, rep = run_json(["octopus", "--graph", graphs["c4"], "--vertex", "4", "--mu", "2,2"], capsys)
    assert code == 0
    assert rep["constant"] == "3"
    assert rep["matrix"] == [["6", "0"], ["-3", "0"]]
    assert rep["kernel"] == [["0", "1"]]
    code, rep = run_json(["octopus", "--graph", graphs["c4b"], "--vertex", "4", "--full-kernel"], capsys)
    assert code == 0
    fk = rep["full_kernel"]
    assert fk["spans_equal"] and fk["direct_dimension"] == fk["characterized_dimension"] and rep["psd"]


def test_search_is_deterministic_and_parallel_safe(capsys):
    cfg = SearchConfig(n_min=4, n_max=5, count=6, seed=7)
    serial = run_search(cfg, jobs=1)
    parallel = run_search(cfg, jobs=2)
    assert serial == parallel
    assert serial["tally"] == {"standard-rep-unique": 12}
    planted = run_search(SearchConfig(n_min=4, n_max=4, count=2, seed=7, plant_four_cycle=True))
    assert planted["tally"].get("four-cycle-exception") == 1 and not planted["violations"]
    code, rep = run_json(["search", "--n-min", "4", "--n-max", "4", "--count", "3", "--seed", "3"], capsys)
    assert code == 0 and rep["graphs"] == 3


def test_paper_facts_command(capsys):
    code, out, _ = run(["paper-facts", "--only", "four-cycle,klein-factor"], capsys)
    assert code == 0 and "facts pass" in out
    code, out, _ = run(["paper-facts", "--only", "four-cycle", "--perturb", "1/10"], capsys)
    assert code == 1 and "FAIL" in out
    assert run(["paper-facts", "--only", "nonexistent-group"], capsys)[0] == 2


def test_module_entry_point(graphs):
    proc = subprocess.run(
        [sys.executable, "-m", "interchange_gap", "verify-main", "--graph", graphs["k3"], "--quiet"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0


def test_search_with_no_graphs():
    summary = run_search(SearchConfig(count=0))
    assert summary["graphs"] == 0 and summary["tally"] == {} and not summary["violations"]


def test_triangle_sign_rep_value(graphs, capsys):
    code, rep = run_json(["verify-main", "--graph", graphs["k3"]], capsys)
    row = {r["mu"]: r for r in rep["table"]}
    assert row["(1,1,1)"]["lambda_min"] == pytest.approx(6)
    assert row["(2,1)"]["lambda_min"] == pytest.approx(3) and row["(2,1)"]["multiplicity"] == 2
