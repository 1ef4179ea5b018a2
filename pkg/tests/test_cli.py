"""The command-line surface: thin-adapter fidelity, formats, exit codes."""

import csv
import io
import json
import math

import pytest

from spherefacets import PolytopeParams, expected_facets
from spherefacets.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestExact:
    def test_euler_value(self, capsys):
        code, out, _ = run_cli(capsys, "exact", "--n", "20", "--d", "3",
                               "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert report["facets"]["linear"] == pytest.approx(36.0, abs=1e-4)

    def test_matches_direct_module_call(self, capsys):
        code, out, _ = run_cli(capsys, "exact", "--n", "31", "--d", "4",
                               "--format", "json")
        report = json.loads(out)
        direct = expected_facets(PolytopeParams(31, 4))
        assert report["facets"]["ln_abs"] == direct.ln()  # byte-identical value

    def test_cdf_table_output(self, capsys):
        code, out, _ = run_cli(capsys, "exact", "--n", "12", "--d", "3",
                               "--cdf-points", "50", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["height", "cdf"]
        cdf_vals = [float(r[1]) for r in rows[1:]]
        assert all(b >= a - 1e-12 for a, b in zip(cdf_vals, cdf_vals[1:]))

    def test_ln_n_input(self, capsys):
        code, out, _ = run_cli(capsys, "exact", "--ln-n", "2000", "--d", "50",
                               "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert "linear" not in report["facets"]
        assert report["facets"]["ln_abs"] > 2000.0


class TestAsym:
    def test_linear_regime_values(self, capsys):
        code, out, _ = run_cli(capsys, "asym", "--regime", "linear", "--rho", "1",
                               "--d", "500", "--n", "1000", "--format", "json")
        assert code == 0
        report = json.loads(out)
        from spherefacets import count_rate, rate_argmax
        want = 500 * count_rate(1.0, rate_argmax(1.0))
        assert report["ln_facets"] == pytest.approx(want, rel=1e-12)

    def test_family_string(self, capsys):
        code, out, _ = run_cli(capsys, "asym", "--family", "d=3", "--n", "1000000",
                               "--d", "3", "--format", "json")
        report = json.loads(out)
        assert report["regime"] == "superfactorial"
        assert report["ln_facets"] == pytest.approx(math.log(2e6), rel=1e-9)

    def test_regime_never_guessed(self, capsys):
        code, _, err = run_cli(capsys, "asym", "--n", "100", "--d", "10")
        assert code == 1
        assert "regime" in err


class TestMc:
    def test_deterministic_given_seed(self, capsys):
        args = ("mc", "--n", "10", "--d", "3", "--replicates", "40",
                "--seed", "7", "--format", "json")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2
        report = json.loads(out1)
        assert report["mean_facets"] == pytest.approx(16.0)

    def test_facet_dump(self, capsys, tmp_path):
        path = tmp_path / "recs.csv"
        code, _, _ = run_cli(capsys, "mc", "--n", "8", "--d", "3",
                             "--replicates", "2", "--seed", "1",
                             "--dump-facets", str(path), "--format", "json")
        assert code == 0
        assert path.read_text().startswith("replicate,vertex_indices,height,normal")


class TestCompare:
    def test_three_way_table(self, capsys):
        code, out, _ = run_cli(capsys, "compare", "--n", "10", "--d", "3",
                               "--replicates", "60", "--seed", "3",
                               "--regime", "superfactorial", "--format", "json")
        assert code == 0
        report = json.loads(out)
        rows = {r[0]: r for r in report["table"]["rows"]}
        assert rows["facet_count"][1] == pytest.approx(16.0, rel=1e-9)
        assert abs(rows["facet_count"][2] - 16.0) < 1e-9
        assert rows["pooled_height_ks"][2] < 0.2
        assert "asymptotic_ln_facets" in report


class TestScan:
    def test_euler_column(self, capsys):
        code, out, _ = run_cli(capsys, "scan", "--d", "3", "--n-start", "10",
                               "--n-stop", "100", "--n-step", "10",
                               "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["n", "d", "ln_F_exact", "F_exact"]
        for row in rows[1:]:
            n, f = int(row[0]), float(row[3])
            assert f == pytest.approx(2 * n - 4, rel=1e-5)

    def test_deterministic(self, capsys):
        args = ("scan", "--d", "4", "--n-start", "8", "--n-stop", "16",
                "--n-step", "4", "--format", "csv")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2


class TestVerify:
    def test_clean_build_exits_zero(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--points", "400", "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert report["failures"] == 0


class TestEmission:
    def test_json_roundtrip(self, capsys):
        _, out, _ = run_cli(capsys, "exact", "--n", "9", "--d", "3",
                            "--format", "json")
        report = json.loads(out)
        assert json.loads(json.dumps(report)) == report
        assert report["schema_version"] == 1

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "out.json"
        code, out, _ = run_cli(capsys, "exact", "--n", "9", "--d", "3",
                               "--format", "json", "--out", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["command"] == "exact"

    def test_usage_error_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["exact", "--n", "9"])  # missing --d
        assert exc.value.code == 2

    def test_numeric_error_exits_one(self, capsys):
        code, _, err = run_cli(capsys, "exact", "--n", "3", "--d", "5")
        assert code == 1
        assert "error" in err
