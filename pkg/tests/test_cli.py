"""Test our command-line surface and its exit codes."""

import json

import pytest

from unimodular_dilations.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def workdir(clean_env, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


class TestClassify:
    """Test OUR classify command."""

    def test_by_parameters(self, workdir, capsys):
        assert main(["classify", "--pq", "5", "13"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "q=13" in out
        assert "canonical_p=5 tetragonal=false" in out

    def test_unimodular(self, workdir, capsys):
        assert main(["classify", "--pq", "0", "1"]) == EXIT_OK
        assert "unimodular" in capsys.readouterr().out.splitlines()

    def test_json_from_file(self, workdir, capsys, reeve_tetrahedron):
        (workdir / "reeve.json").write_text(json.dumps({"vertices": reeve_tetrahedron}))
        assert main(["classify", "reeve.json", "--json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["q"] == 3
        assert data["tetragonal"] is True

    def test_cube_is_not_a_simplex(self, workdir, capsys, unit_cube):
        (workdir / "cube.json").write_text(json.dumps({"vertices": unit_cube}))
        assert main(["classify", "cube.json"]) == EXIT_USAGE
        assert "not a simplex" in capsys.readouterr().err

    def test_missing_file(self, workdir, capsys):
        assert main(["classify", "absent.json"]) == EXIT_USAGE
        assert "cannot read absent.json" in capsys.readouterr().err


class TestTriangulateAndVerify:
    """Test OUR triangulate and verify commands together."""

    def test_round_trip(self, workdir, capsys):
        assert main(["triangulate", "--pq", "2", "5", "--k", "4", "-o", "t.json"]) == EXIT_OK
        summary = json.loads(capsys.readouterr().out)
        assert summary["cells"] == 320
        assert (workdir / "t.json").exists()

        assert main(["verify", "t.json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["passed"] is True

    def test_obstructed_factor(self, workdir, capsys):
        code = main(["triangulate", "--pq", "2", "5", "--k", "7", "-o", "t.json"])
        assert code == EXIT_USAGE
        assert "quasi-standard" in capsys.readouterr().err
        assert not (workdir / "t.json").exists()

    def test_polytope_with_off(self, workdir, capsys, unit_cube):
        (workdir / "cube.json").write_text(json.dumps({"vertices": unit_cube}))
        args = ["triangulate", "--polytope", "cube.json", "--k", "2", "-o", "c.json"]
        assert main(args + ["--off", "c.off"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["cells"] == 48
        assert (workdir / "c.off").exists()

    def test_verify_broken_file(self, workdir, capsys, gap_triangulation, unit_cube):
        (workdir / "gap.json").write_text(json.dumps(gap_triangulation.to_json()))
        (workdir / "cube.json").write_text(json.dumps({"vertices": unit_cube}))
        assert main(["verify", "gap.json", "--region", "cube.json"]) == EXIT_FAILED
        assert json.loads(capsys.readouterr().out)["passed"] is False

    def test_bad_jobs(self, workdir):
        with pytest.raises(SystemExit) as excinfo:
            main(["--jobs", "0", "classify", "--pq", "1", "2"])
        assert excinfo.value.code == EXIT_USAGE


class TestOtherCommands:
    """Test OUR square, survey and oracle commands."""

    def test_square_ascii(self, workdir, capsys):
        assert main(["square", "--pq", "2", "5"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("fundamental square p=2 q=5")
        assert "compatible: False" in out

    def test_square_svg(self, workdir, capsys):
        assert main(["square", "--pq", "2", "5", "--kind", "XY", "--svg", "s.svg"]) == EXIT_OK
        assert (workdir / "s.svg").read_text().startswith("<svg")

    def test_survey_markdown(self, workdir, capsys):
        assert main(["survey", "--qmax", "3", "--kmax", "2"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("| p | q | k |")
        assert len(lines) == 2 + 3 * 2

    def test_oracles(self, workdir, capsys):
        assert main(["oracles", "--qmax", "5", "--which", "k2"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["passed"] is True
