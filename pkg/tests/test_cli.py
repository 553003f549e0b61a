import json
import subprocess
import sys

import pytest

from rainbowgiant.cli import main
from rainbowgiant.graph import read_edge_list
from rainbowgiant.process import read_trace_csv


def test_theory_json(capsys):
    assert main(["theory", "--n", "100000", "--epsilon", "0.1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["core_predicted"] == pytest.approx(2000)
    assert doc["mu"] == pytest.approx(0.906252442005009, abs=1e-14)


def test_missing_n_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["experiment", "--epsilon", "0.1"])
    assert exc.value.code == 2


def test_domain_error_exit_code(capsys):
    assert main(["theory", "--n", "100", "--epsilon", "1.5"]) == 2
    assert "error" in capsys.readouterr().err


def test_verify_distributions(capsys):
    assert main(["verify-distributions"]) == 0
    out = capsys.readouterr().out
    assert "PASS mu" in out and "PASS borel_tail" in out and "PASS pgw_gof" in out


def test_generate_decompose_process(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    assert main(["generate", "--n", "3000", "--epsilon", "0.3", "--seed", "5", "--out", str(graph)]) == 0
    with open(graph) as fh:
        g, colors = read_edge_list(fh)
    assert g.n == 3000 and colors is None

    dec = tmp_path / "d.json"
    assert main(["decompose", "--input", str(graph), "--out", str(dec)]) == 0
    doc = json.loads(dec.read_text())
    assert len(doc["core_vertices"]) + len(doc["mantle"]) == doc["component_size"]

    trace, colored = tmp_path / "t.csv", tmp_path / "c.txt"
    assert main(["process", "--input", str(graph), "--epsilon", "0.3", "--colors-n", "3000",
                 "--out", str(trace), "--colored", str(colored)]) == 0
    with open(trace) as fh:
        rows = read_trace_csv(fh)
    assert len(rows) == len(doc["core_edges"]) + len(doc["mantle"])
    with open(colored) as fh:
        g2, cols = read_edge_list(fh)
    assert g2.m == g.m and len(cols) == g.m


def test_generate_dlp_writes_labels(tmp_path):
    out = tmp_path / "dlp.txt"
    assert main(["generate", "--generator", "dlp", "--n", "5000", "--epsilon", "0.2", "--out", str(out)]) == 0
    assert (tmp_path / "dlp.txt.labels").read_text().startswith("0 kernel")


def test_experiment_csv_and_exit(tmp_path):
    out = tmp_path / "r.csv"
    rc = main(["experiment", "--n", "3000", "--epsilon", "0.3", "--trials", "2", "--format", "csv",
               "--out", str(out)])
    assert rc in (0, 1)
    assert out.read_text().startswith("trial,")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rainbowgiant", "theory", "--n", "1000", "--epsilon", "0.2"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["n"] == 1000
