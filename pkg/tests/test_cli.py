"""CLI surface: flags, formats, determinism, exit codes."""
import pytest

from ckbound.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def dims_file(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# ---------------------------------------------------------------- hs

def test_hs_surface_example(capsys):
    code, out, _ = run(capsys, "hs", "--surface", "0,3", "--trunc", "4")
    assert code == 0
    assert "coeffs 1,0,2,0,4" in out
    assert "partial_sums 1,1,3,3,7" in out


def test_hs_local_example(capsys, tmp_path):
    path = dims_file(tmp_path, "loc.dims", "1 = 2\n2 = 1\n")
    code, out, _ = run(capsys, "hs", "--local", path, "--trunc", "2")
    assert code == 0
    assert "coeffs 1,2,4" in out


def test_hs_global_empty_example(capsys, tmp_path):
    path = dims_file(tmp_path, "empty.dims", "")
    code, out, _ = run(capsys, "hs", "--global", path, "--s", "1",
                       "--trunc", "2")
    assert code == 0
    assert "coeffs 1,0,1" in out


def test_hs_usage_errors(capsys, tmp_path):
    code, _, err = run(capsys, "hs", "--surface", "0,3", "--local", "x",
                       "--trunc", "2")
    assert code == 2 and "exactly one" in err
    path = dims_file(tmp_path, "bad.dims", "1 = 2\nnot a line\n")
    code, _, err = run(capsys, "hs", "--local", path, "--trunc", "2")
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "hs", "--local", str(tmp_path / "absent"),
                       "--trunc", "2")
    assert code == 2 and "cannot read" in err


# ---------------------------------------------------------------- minm

def test_minm_depth_two_example(capsys, tmp_path):
    glob = dims_file(tmp_path, "glob.dims", "1 = 1\n")
    loc = dims_file(tmp_path, "loc.dims", "1 = 1\n2 = 1\n")
    code, out, _ = run(capsys, "minm", "--glob", glob, "--loc", loc,
                       "--max", "10")
    assert code == 0
    assert "m 2" in out.splitlines()[0]


def test_minm_equal_inputs(capsys, tmp_path):
    glob = dims_file(tmp_path, "g.dims", "1 = 3\n")
    code, out, _ = run(capsys, "minm", "--glob", glob, "--loc", glob,
                       "--max", "12")
    assert code == 0
    assert out.splitlines()[0] == "m none"


def test_minm_rank_gplus1_example(capsys, tmp_path):
    # rank g+1 shape at g=2: restricting to the three guaranteed weights
    # 3g+5..3g+7 picks out 11; the unrestricted minimum is smaller (8).
    g = 2
    glob = dims_file(tmp_path, "glob.dims", "1 = %d\n" % (g + 1))
    loc = dims_file(tmp_path, "loc.dims", "1 = %d\n2 = 2\n" % g)
    code, out, _ = run(capsys, "minm", "--glob", glob, "--loc", loc,
                       "--max", "20", "--candidates", "11,12,13")
    assert code == 0
    m = int(out.splitlines()[0].split()[1])
    assert m in (11, 12, 13)
    code, out, _ = run(capsys, "minm", "--glob", glob, "--loc", loc,
                       "--max", "20")
    assert code == 0
    assert out.splitlines()[0] == "m 8"


# ---------------------------------------------------------------- siegel

def test_siegel_examples(capsys):
    code, out, _ = run(capsys, "siegel", "--s", "3")
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert lines["m"] == "9"
    assert lines["bound"] == str(8 * 6 ** 3 * 2 ** 64)
    code, out, _ = run(capsys, "siegel", "--s", "0")
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert (lines["m"], lines["bound"]) == ("1", "16")


def test_siegel_chain_without_two(capsys):
    code, out, _ = run(capsys, "siegel", "--s", "2", "--set", "3,5")
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert lines["chain.final"] == "0"
    assert lines["chain.intermediate"] == "0"


def test_siegel_long_guard(capsys):
    code, _, err = run(capsys, "siegel", "--s", "8")
    assert code == 2
    assert "long" in err


def test_siegel_digits_cap(capsys):
    code, out, _ = run(capsys, "siegel", "--s", "3", "--digits-cap", "10")
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert lines["bound"] == "[23 digits]"


# ---------------------------------------------------------------- bound

def test_bound_main_cli(capsys):
    code, out, _ = run(capsys, "bound", "--formula", "main", "--g", "2",
                       "--p", "5", "--m", "2", "--c", "2")
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert lines["value"] == "198"
    assert lines["detail.weight_factor"] == "108"


def test_bound_coarse_cli(capsys):
    code, out, _ = run(capsys, "bound", "--formula", "coarse", "--g", "2",
                       "--p", "3", "--depth", "2", "--format", "records")
    assert code == 0
    lines = dict(line.split("\t", 1) for line in out.splitlines())
    assert lines["detail.weight_power_digits"] == "50997"
    assert lines["value"] == "none"


def test_bound_usage_error(capsys):
    code, _, err = run(capsys, "bound", "--formula", "kappa")
    assert code == 2 and "needs p" in err


# ---------------------------------------------------------------- operator / verify

def test_operator_cli(capsys):
    code, out, _ = run(capsys, "operator", "--m", "0")
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert lines["order"] == "1"
    assert lines["operator"] == "(0 + 1*z + -1*z^2) * d^1/dz^1"


def test_verify_polylog_cli(capsys):
    code, out, _ = run(capsys, "verify-polylog", "--m", "2")
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert lines["passed"] == "true"
    assert lines["order"] == "7"
    assert lines["max_residual"] == "0"


def test_verify_polylog_pipeline_cli(capsys):
    code, out, _ = run(capsys, "verify-polylog", "--m", "1", "--pipeline")
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert lines["passed"] == "true"
    assert int(lines["order"]) <= 4


def test_verify_polylog_trivial_and_cap(capsys):
    code, out, _ = run(capsys, "verify-polylog", "--m", "0")
    assert code == 0
    code, _, err = run(capsys, "verify-polylog", "--m", "5")
    assert code == 2 and "cap" in err


# ---------------------------------------------------------------- newton

def test_newton_cli_certified(capsys):
    code, out, _ = run(capsys, "newton", "--p", "5",
                       "--coeffs", "0,125,-30,1", "--lam", "1")
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert lines["count"] == "3"
    assert lines["vertices"] == "1:3,2:1,3:0"


def test_newton_cli_uncertified_is_failure(capsys):
    code, out, _ = run(capsys, "newton", "--p", "3", "--divided", "3,1",
                       "--lam", "1")
    assert code == 1
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert lines["certified"] == "false"


def test_newton_cli_usage(capsys):
    code, _, err = run(capsys, "newton", "--p", "3", "--lam", "1")
    assert code == 2 and "exactly one" in err


# ---------------------------------------------------------------- determinism

@pytest.mark.parametrize("argv", [
    ("siegel", "--s", "3", "--format", "records"),
    ("hs", "--surface", "2,0", "--trunc", "12", "--format", "records"),
    ("bound", "--formula", "kappa", "--p", "3", "--format", "records"),
    ("operator", "--m", "2", "--format", "records"),
])
def test_byte_identical_output(capsys, argv):
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.encode("utf-8") == out2.encode("utf-8")


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["siegel", "--bogus"])
    assert err.value.code == 2


def test_no_command_prints_help(capsys):
    code = main([])
    out = capsys.readouterr().out
    assert code == 2
    assert "command" in out
