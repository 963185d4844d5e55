import json

import numpy as np
import pytest

from interfsim.cli import main
from interfsim.geometry import load_points
from interfsim.graphs import build_mst, load_graph


@pytest.fixture
def points_file(tmp_path):
    path = tmp_path / "pts.txt"
    assert main(["gen", "uniform", "-n", "64", "-d", "2", "--seed", "3",
                 "-o", str(path)]) == 0
    return path


@pytest.fixture
def mst_file(tmp_path, points_file):
    path = tmp_path / "mst.txt"
    assert main(["build", "mst", "-i", str(points_file), "-o", str(path)]) == 0
    return path


class TestGen:
    def test_uniform(self, points_file):
        ps = load_points(points_file)
        assert ps.n == 64 and ps.dim == 2

    def test_chain(self, tmp_path):
        out = tmp_path / "chain.txt"
        assert main(["gen", "chain", "-n", "5", "-o", str(out)]) == 0
        ps = load_points(out)
        assert ps.coords[1, 0] == 0.5

    def test_zeno(self, tmp_path):
        out = tmp_path / "z.txt"
        assert main(["gen", "zeno", "-k", "4", "-o", str(out)]) == 0
        assert load_points(out).n == 4

    def test_bad_ratio_is_domain_error(self, tmp_path):
        out = tmp_path / "x.txt"
        assert main(["gen", "chain", "-n", "5", "--ratio", "0.9",
                     "-o", str(out)]) == 1

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "uniform", "-o", "x.txt"])  # missing -n
        assert exc.value.code == 2


class TestBuild:
    def test_mst_matches_library(self, points_file, mst_file):
        ps = load_points(points_file)
        g = load_graph(ps, mst_file)
        assert np.array_equal(g.edges, build_mst(ps).edges)

    @pytest.mark.parametrize("topology", ["hub", "bucketed", "nn"])
    def test_other_topologies(self, tmp_path, points_file, topology):
        out = tmp_path / f"{topology}.txt"
        assert main(["build", topology, "-i", str(points_file),
                     "-o", str(out)]) == 0
        assert load_graph(load_points(points_file), out).m >= 1

    def test_missing_points_file(self, tmp_path):
        assert main(["build", "mst", "-i", str(tmp_path / "nope.txt"),
                     "-o", str(tmp_path / "g.txt")]) == 1


class TestMeasure:
    def test_json_stdout(self, points_file, mst_file, capsys):
        assert main(["measure", "-p", str(points_file),
                     "-g", str(mst_file)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["n"] == 64
        assert doc["max"] == max(doc["per_vertex"])

    def test_csv_to_file(self, tmp_path, points_file, mst_file):
        out = tmp_path / "rep.csv"
        assert main(["measure", "-p", str(points_file), "-g", str(mst_file),
                     "--format", "csv", "-o", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "vertex,interference"
        assert len(lines) == 65


class TestCheck:
    def test_all_checks_pass_on_mst(self, points_file, mst_file, capsys):
        assert main(["check", "-p", str(points_file),
                     "-g", str(mst_file)]) == 0
        out = capsys.readouterr().out
        assert "diameter-ball: pass" in out
        assert "logd-bound: pass" in out
        assert "connectivity: pass" in out

    def test_failing_check_exits_one(self, tmp_path, points_file):
        # a single-edge graph over 64 points is not connected
        g = tmp_path / "sparse.txt"
        g.write_text("64 1\n0 1\n")
        assert main(["check", "-p", str(points_file), "-g", str(g),
                     "--checks", "connectivity"]) == 1

    def test_graphless_check_needs_graph(self, points_file):
        assert main(["check", "-p", str(points_file),
                     "--checks", "diameter-ball"]) == 2

    def test_unknown_check(self, points_file):
        assert main(["check", "-p", str(points_file),
                     "--checks", "bogus"]) == 2


class TestAdversarial:
    def test_zeno(self, capsys):
        assert main(["adversarial", "zeno", "5"]) == 0
        rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert [r["topology"] for r in rows] == ["mst", "hub"]
        assert rows[0]["interference"] >= 4

    def test_embedded(self, capsys):
        assert main(["adversarial", "zeno", "4", "--embed-n", "256"]) == 0
        rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert rows[0]["n"] <= 256 + 4


class TestExperiment:
    def test_sizes_run_writes_csv_and_json(self, tmp_path, capsys):
        csv = tmp_path / "r.csv"
        summary = tmp_path / "s.json"
        assert main(["experiment", "--sizes", "32", "64", "--trials", "2",
                     "--topologies", "mst,nn", "--seed", "11",
                     "--csv", str(csv), "--json", str(summary)]) == 0
        lines = csv.read_text().splitlines()
        assert lines[0].startswith("n,d,trial,seed,topology")
        assert len(lines) == 1 + 2 * 2 * 2
        assert len(json.loads(summary.read_text())) == 4

    def test_omit_timing_reruns_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["experiment", "--sizes", "32", "64", "--trials", "2",
                "--seed", "4", "--omit-timing"]
        assert main(args + ["--csv", str(a)]) == 0
        assert main(args + ["--csv", str(b), "--workers", "4"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_requires_sizes_or_preset(self, tmp_path):
        assert main(["experiment", "--csv", str(tmp_path / "x.csv")]) == 2
