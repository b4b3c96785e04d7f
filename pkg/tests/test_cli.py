"""End-to-end tests for the pattern-toolkit command line."""

import json

import pytest

from cli.commands import EXIT_FAILURE, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def run(tmp_path, capsys):
    settings = tmp_path / "settings.yaml"
    settings.write_text("logging:\n  level: WARNING\n")

    def _run(*argv):
        code = main([*argv, "--settings", str(settings)])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


class TestExamples:
    def test_list(self, run):
        code, out, _ = run("examples")
        assert code == EXIT_OK
        names = out.split()
        assert "golden" in names
        assert "t-shape" in names

    def test_descriptor(self, run):
        code, out, _ = run("examples", "--name", "two-lines", "--n", "3")
        assert code == EXIT_OK
        assert json.loads(out)["dim"] == 3

    def test_ascii_window(self, run):
        code, out, _ = run("examples", "--name", "checkerboard", "--window=0..1")
        assert code == EXIT_OK
        assert "#.\n.#" in out

    def test_unknown_example(self, run):
        code, _, err = run("examples", "--name", "no-such-example")
        assert code == EXIT_USAGE
        assert "unknown example" in err


class TestVerify:
    def test_proven(self, run):
        code, out, _ = run("verify", "--name", "two-lines", "--poly", "(x - 1)*(z - 1)")
        assert code == EXIT_OK
        document = json.loads(out)
        assert document["verdict"]["status"] == "proven_zero"
        assert document["manifest"]["command"] == "verify"

    def test_refuted_prints_witness(self, run):
        code, out, err = run("verify", "--name", "two-lines", "--poly", "x - 1")
        assert code == EXIT_FAILURE
        assert json.loads(out)["verdict"]["status"] == "nonzero_at"
        assert "nonzero at" in err

    def test_syntax_error(self, run):
        code, _, err = run("verify", "--name", "golden", "--poly", "x +")
        assert code == EXIT_USAGE
        assert "position 3" in err

    def test_missing_poly(self, run):
        code, _, _ = run("verify", "--name", "golden")
        assert code == EXIT_USAGE


class TestScan:
    def test_json_rows(self, run):
        code, out, _ = run("scan", "--name", "golden", "--max", "3", "--region=-20..20", "--format", "json")
        assert code == EXIT_OK
        document = json.loads(out)
        assert len(document["rows"]) == 9
        assert document["exactness_class"] == "oracle_only"
        assert document["manifest"]["parameters"]["max"] == 3

    def test_tsv(self, run):
        code, out, _ = run("scan", "--name", "checkerboard", "--max", "2", "--region=-6..6")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0].startswith("# manifest:")
        assert lines[2] == "m\tn\tcount\tmn\tflag\tverdict"
        assert len(lines) == 3 + 4

    def test_needs_plane(self, run):
        code, _, _ = run("scan", "--name", "two-lines", "--max", "2")
        assert code == EXIT_USAGE

    def test_no_input(self, run):
        code, _, err = run("scan", "--max", "2")
        assert code == EXIT_USAGE
        assert "--config" in err


class TestAnnihilate:
    def test_difference_product(self, run):
        code, out, _ = run("annihilate", "--name", "two-lines", "--budget", "1", "--max-factors", "2")
        assert code == EXIT_OK
        vectors = json.loads(out)["certificate"]["vectors"]
        assert sorted(vectors) == [[0, 0, 1], [1, 0, 0]]

    def test_inconclusive(self, run):
        code, _, err = run(
            "annihilate", "--name", "golden", "--budget", "1", "--max-factors", "2", "--region=-10..10"
        )
        assert code == EXIT_INCONCLUSIVE
        assert "inconclusive" in err

    def test_pattern_matrix(self, run):
        code, out, _ = run("annihilate", "--name", "golden", "--shape", "3x3", "--region=-64..64")
        assert code == EXIT_OK
        assert json.loads(out)["verdict"]["status"] == "zero_on_region"


class TestDecompose:
    def test_explicit_factors(self, run):
        code, out, _ = run(
            "decompose", "--name", "two-lines", "--factor", "x - 1", "--factor", "z - 1", "--window=-8..8"
        )
        assert code == EXIT_OK
        report = json.loads(out)["decomposition"]
        assert report["residual_max_abs"] == 0
        assert len(report["components"]) == 2

    def test_non_line_factor(self, run):
        code, _, _ = run("decompose", "--name", "checkerboard", "--factor", "x + y + 1")
        assert code == EXIT_USAGE


class TestClassify:
    def test_striped(self, run):
        code, out, _ = run(
            "classify", "--name", "striped-fiber", "--max-norm", "2", "--max-factors", "1"
        )
        assert code == EXIT_OK
        classification = json.loads(out)["classification"]
        assert classification["kind"] == "one_periodic"
        assert classification["direction"] == [1, 0]


class TestTile:
    def test_corner_with_prime_periods(self, run):
        code, out, _ = run("tile", "--example", "corner", "--prime")
        assert code == EXIT_OK
        document = json.loads(out)
        assert document["verdict"]["status"] == "proven_constant_one"
        assert document["prime_periods"]["p"] == 3

    def test_cover_mismatch(self, run):
        code, out, err = run("tile", "--tile", "[[0], [1]]", "--basis", "[[3]]")
        assert code == EXIT_FAILURE
        assert json.loads(out)["verdict"]["position"] == [2]
        assert "covered 0 times" in err

    def test_missing_inputs(self, run):
        code, _, _ = run("tile")
        assert code == EXIT_USAGE


class TestRender:
    def test_ascii(self, run):
        code, out, _ = run("render", "--name", "checkerboard", "--region=0..1")
        assert code == EXIT_OK
        assert "#.\n.#" in out
        assert "legend" in out

    def test_ppm_needs_out(self, run):
        code, _, _ = run("render", "--name", "checkerboard", "--format", "ppm")
        assert code == EXIT_USAGE

    def test_ppm_with_manifest(self, run, tmp_path):
        target = tmp_path / "out" / "board.ppm"
        code, _, _ = run(
            "render", "--name", "golden", "--region=-4..4", "--format", "ppm", "--out", str(target)
        )
        assert code == EXIT_OK
        assert target.read_bytes().startswith(b"P6\n9 9\n")
        sidecar = json.loads(target.with_suffix(".json").read_text())
        assert sidecar["manifest"]["command"] == "render"
        assert sidecar["box"] == {"lo": [-4, -4], "hi": [4, 4]}


def test_output_file(run, tmp_path):
    target = tmp_path / "examples.txt"
    code, out, _ = run("examples", "--out", str(target))
    assert code == EXIT_OK
    assert out == ""
    assert "split-demo" in target.read_text()


def test_unknown_command(run):
    code, _, _ = run("frobnicate")
    assert code == EXIT_USAGE
