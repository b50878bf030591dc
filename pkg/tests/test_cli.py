"""Command-line interface: outputs and the exit-code contract."""

import pytest
from click.testing import CliRunner

from trichrome.cli import main

FUSE_L = (
    "diagram rg { inputs a; outputs b; node x: green 1; node y: green 2;"
    " wire a -> x; wire x -> y; wire y -> b; }\n"
)
FUSE_R = (
    "diagram rg { inputs a; outputs b; node x: green 3;"
    " wire a -> x; wire x -> b; }\n"
)

runner = CliRunner()


@pytest.fixture()
def files(tmp_path):
    lhs = tmp_path / "lhs.rgd"
    rhs = tmp_path / "rhs.rgd"
    lhs.write_text(FUSE_L)
    rhs.write_text(FUSE_R)
    return lhs, rhs


def test_eval_prints_matrix(files):
    lhs, _ = files
    result = runner.invoke(main, ["eval", str(lhs)])
    assert result.exit_code == 0
    assert result.output.count("\n") == 2  # one line per matrix row
    assert "sqrt2" in result.output
    result = runner.invoke(main, ["eval", str(lhs), "--float"])
    assert result.exit_code == 0
    assert "j" in result.output and "sqrt2" not in result.output


def test_equal_exit_codes(files):
    lhs, rhs = files
    result = runner.invoke(main, ["equal", str(lhs), str(rhs)])
    assert result.exit_code == 0 and result.output.strip() == "equal"
    unequal = lhs.parent / "other.rgd"
    unequal.write_text(FUSE_L.replace("green 2", "green 3"))
    result = runner.invoke(main, ["equal", str(lhs), str(unequal)])
    assert result.exit_code == 1 and result.output.strip() == "not equal"
    result = runner.invoke(main, ["equal", str(lhs), str(rhs), "--float", "--tol", "1e-6"])
    assert result.exit_code == 0


def test_rewrite_and_script_failure(files, tmp_path):
    lhs, _ = files
    script = tmp_path / "fuse.rgs"
    script.write_text("apply spider-fusion at node=1, node=2\n")
    result = runner.invoke(main, ["rewrite", str(lhs), "--script", str(script)])
    assert result.exit_code == 0
    assert "green 3" in result.output
    bad = tmp_path / "bad.rgs"
    bad.write_text("apply copy at node=1\n")
    result = runner.invoke(main, ["rewrite", str(lhs), "--script", str(bad)])
    assert result.exit_code == 4
    assert "does not match" in result.output


def test_rewrite_show_steps(files, tmp_path):
    lhs, _ = files
    script = tmp_path / "fuse.rgs"
    script.write_text("apply spider-fusion\n")  # anchorless: engine picks the match
    result = runner.invoke(main, ["rewrite", str(lhs), "--script", str(script), "--show-steps"])
    assert result.exit_code == 0
    assert "apply spider-fusion at node=1,node=2" in result.stderr


def test_translate(files):
    lhs, _ = files
    result = runner.invoke(main, ["translate", str(lhs), "--to", "rgb"])
    assert result.exit_code == 0
    assert result.output.startswith("diagram rgb {")
    result = runner.invoke(main, ["translate", str(lhs), "--to", "teal"])
    assert result.exit_code == 2


def test_search(files):
    lhs, rhs = files
    result = runner.invoke(main, ["search", str(lhs), str(rhs), "--depth", "2"])
    assert result.exit_code == 0
    assert result.output.startswith("apply spider-fusion")
    clone = lhs.parent / "clone.rgd"
    clone.write_text(FUSE_L)
    result = runner.invoke(main, ["search", str(lhs), str(clone), "--depth", "1"])
    assert result.exit_code == 0
    assert result.output.strip() == "# no steps needed"
    result = runner.invoke(main, ["search", str(lhs), str(rhs), "--depth", "2", "--flavour", "rgb"])
    assert result.exit_code == 3


def test_search_not_found(files, tmp_path):
    lhs, _ = files
    far = tmp_path / "far.rgd"
    far.write_text(FUSE_R.replace("green 3", "red 1"))
    result = runner.invoke(main, ["search", str(lhs), str(far), "--depth", "1"])
    assert result.exit_code == 1
    assert "no path found" in result.output


def test_verify_suite():
    result = runner.invoke(main, ["verify", "--suite", "euler"])
    assert result.exit_code == 0
    assert "suite euler: 2/2 passed" in result.output
    result = runner.invoke(main, ["verify", "--suite", "nonsense"])
    assert result.exit_code == 2


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.rgd"
    bad.write_text("diagram rg { node n: purple 0; }\n")
    result = runner.invoke(main, ["eval", str(bad)])
    assert result.exit_code == 3
    assert "unknown colour" in result.output


def test_missing_file_is_usage_error(tmp_path):
    result = runner.invoke(main, ["eval", str(tmp_path / "absent.rgd")])
    assert result.exit_code == 2


def test_version_flag():
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
