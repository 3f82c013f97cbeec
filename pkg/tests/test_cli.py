import json

from mzeta.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestStieltjesCommand:
    def test_half_log_2pi(self, capsys):
        code, out, _ = run_cli(capsys, "stieltjes", "--point", "0", "--order", "1")
        assert code == 0
        assert out.splitlines()[0] == "0.918938533205"

    def test_euler(self, capsys):
        code, out, _ = run_cli(capsys, "stieltjes", "--point", "1", "--order", "0")
        assert code == 0
        assert out.splitlines()[0] == "0.577215664902"

    def test_depth_two(self, capsys):
        code, out, _ = run_cli(
            capsys, "stieltjes", "--point", "1,1", "--order", "0,0", "--digits", "12"
        )
        assert code == 0
        assert out.splitlines()[0] == "-0.655878071520"

    def test_json_output(self, capsys):
        code, out, _ = run_cli(
            capsys, "stieltjes", "--point", "0", "--order", "0", "--output", "json"
        )
        assert code == 0
        data = json.loads(out)
        assert data["value"].startswith("-1.0")
        assert data["method"] == "extrapolation"

    def test_length_mismatch_is_parse_error(self, capsys):
        code, _, err = run_cli(capsys, "stieltjes", "--point", "1,1", "--order", "0")
        assert code == 2
        assert "equal length" in err

    def test_bad_integers_are_parse_errors(self, capsys):
        code, _, _ = run_cli(capsys, "stieltjes", "--point", "x", "--order", "0")
        assert code == 2


class TestZetaCommand:
    def test_zeta_zero(self, capsys):
        code, out, _ = run_cli(capsys, "zeta", "--args", "0")
        assert code == 0
        assert out.splitlines()[0] == "-0.500000000000"

    def test_euler_relation_point(self, capsys):
        code, out, _ = run_cli(capsys, "zeta", "--args", "2,1")
        assert code == 0
        assert out.splitlines()[0].startswith("1.20205690316")

    def test_polar_point_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "zeta", "--args", "1")
        assert code == 4
        assert "polar hyperplane s1=1" in err

    def test_complex_argument(self, capsys):
        code, out, _ = run_cli(capsys, "zeta", "--args", "2+0.5i", "--digits", "10")
        assert code == 0
        assert "j" in out.splitlines()[0]

    def test_star_variant(self, capsys):
        code, out, _ = run_cli(capsys, "zeta", "--args", "2,1", "--star", "--digits", "10")
        assert code == 0
        assert out.splitlines()[0].startswith("2.404113806")

    def test_unparseable_args(self, capsys):
        code, _, _ = run_cli(capsys, "zeta", "--args", "2;1")
        assert code == 2

    def test_max_n_env_bounds_precision(self, capsys, monkeypatch):
        monkeypatch.setenv("MZETA_MAX_N", "64")
        code, _, err = run_cli(
            capsys, "stieltjes", "--point", "1", "--order", "0", "--digits", "40"
        )
        assert code == 3
        assert "did not stabilise" in err

    def test_max_n_env_bounds_zeta_precision(self, capsys, monkeypatch):
        monkeypatch.setenv("MZETA_MAX_N", "16")
        code, _, err = run_cli(capsys, "zeta", "--args", "0.5", "--digits", "45")
        assert code == 3
        assert "did not reach" in err

    def test_star_constant_at_origin(self, capsys):
        # weak top bound shifts the counting constant to zero
        code, out, _ = run_cli(capsys, "stieltjes", "--point", "0", "--order", "0", "--star")
        assert code == 0
        assert out.splitlines()[0] == "0.0"


class TestVerifyCommand:
    def test_unknown_identity(self, capsys):
        code, _, err = run_cli(capsys, "verify", "no-such-check")
        assert code == 2
        assert "unknown identity" in err

    def test_limits_origin_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "limits-origin", "--output", "json")
        assert code == 0
        data = json.loads(out)
        assert data["summary"]["failed"] == 0
        assert data["summary"]["total"] >= 2

    def test_unicity_text_summary(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "unicity")
        assert code == 0
        assert out.strip().splitlines()[-1] == "total=3 passed=3 failed=0"

    def test_byte_identical_json(self, capsys):
        _, out1, _ = run_cli(
            capsys, "verify", "unicity", "--seed", "42", "--digits", "9", "--output", "json"
        )
        _, out2, _ = run_cli(
            capsys, "verify", "unicity", "--seed", "42", "--digits", "9", "--output", "json"
        )
        assert out1 == out2

    def test_depth_filter(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "unicity", "--depth", "1", "--output", "json"
        )
        assert code == 0
        data = json.loads(out)
        assert data["summary"]["total"] == 1

    def test_corollary_depth_one_gap_zero(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "comb-form-cor", "--depth", "1", "--output", "json"
        )
        assert code == 0
        data = json.loads(out)
        assert data["summary"]["failed"] == 0
        assert all(c["abs_gap"] == "0.0" for c in data["checks"])


class TestExpandCommand:
    def test_depth_one_blocks_and_coefficients(self, capsys):
        code, out, _ = run_cli(
            capsys, "expand", "--point", "1", "--degree", "2", "--output", "json"
        )
        assert code == 0
        data = json.loads(out)
        coeffs = data["taylor_coefficients"]
        assert coeffs["0"].startswith("0.577215")
        assert coeffs["1"].startswith("0.0728158")
        assert coeffs["2"].startswith("-0.004845")
        blocks = data["singular_blocks"]
        assert len(blocks) == 1 and blocks[0]["i"] == 1 and blocks[0]["sign"] == 1
        assert blocks[0]["f"]["den"] == [{"coef": "1", "powers": [1]}]

    def test_convergent_point_has_no_singular_blocks(self, capsys):
        code, out, _ = run_cli(
            capsys, "expand", "--point", "2", "--degree", "1", "--output", "json"
        )
        assert code == 0
        data = json.loads(out)
        assert data["singular_blocks"] == []
        assert data["taylor_coefficients"]["0"].startswith("1.6449340")
        assert data["taylor_coefficients"]["1"].startswith("-0.93754825")

    def test_depth_two_three_blocks(self, capsys):
        code, out, _ = run_cli(
            capsys, "expand", "--point", "1,1", "--degree", "1", "--digits", "10",
            "--output", "json",
        )
        assert code == 0
        data = json.loads(out)
        assert [b["i"] for b in data["singular_blocks"]] == [1, 2]
        assert data["taylor_coefficients"]["0,0"].startswith("-0.65587807")

    def test_degree_cap(self, capsys):
        code, _, _ = run_cli(capsys, "expand", "--point", "1", "--degree", "9")
        assert code == 2


def test_version_flag(capsys):
    code, out, _ = run_cli(capsys, "--version")
    assert code == 0
