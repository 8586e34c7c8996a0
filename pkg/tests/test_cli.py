import json

import pytest

from cli import EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK, QexpCLI
from qexp.decide import verify_solution
from qexp.formats import parse_equation, parse_equation_file, parse_solution
from qexp.provenance_logger import ProvenanceLogger
from qexp.quadwords import is_standard_system
from qexp.resolution import is_special


@pytest.fixture
def run(tmp_path):
    def invoke(*argv):
        return QexpCLI().run(["--output-root", str(tmp_path), "--no-timestamps", *argv])
    return invoke


def runs(tmp_path):
    return ProvenanceLogger(tmp_path / "provenance.log").get_runs()


def test_no_command_prints_help(capsys):
    assert QexpCLI().run([]) == EXIT_OK
    assert "usage" in capsys.readouterr().out


def test_normalize(run, examples_dir, capsys):
    assert run("normalize", str(examples_dir / "exx_eqn.qeq")) == EXIT_OK
    W = parse_equation(capsys.readouterr().out)
    assert is_standard_system(W.system)
    assert W.L.normalized


def test_normalize_to_file(run, examples_dir, tmp_path):
    out = tmp_path / "std.qeq"
    assert run("normalize", str(examples_dir / "exx_eqn.qeq"), "-o", str(out)) == EXIT_OK
    _, W = parse_equation_file(out)
    assert is_standard_system(W.system)
    assert out.read_text().startswith("# normalized from exx_eqn.qeq")


def test_resolve_writes_special_resolvents(run, examples_dir, tmp_path):
    assert run("resolve", str(examples_dir / "exx_eqn.qeq")) == EXIT_OK
    files = sorted((tmp_path / "exx-eqn").glob("exx-eqn.r*.qeq"))
    assert files
    for path in files:
        _, V = parse_equation_file(path)
        assert is_special(V)
    steps = ProvenanceLogger(tmp_path / "provenance.log").get_recent_steps()
    assert steps
    assert runs(tmp_path)[-1]["details"]["resolvents"] == len(files)


def test_decide_cyclic(run, examples_dir, tmp_path):
    assert run("decide", str(examples_dir / "cyclic.qeq"), "--backend", "cyclic") == EXIT_OK
    _, W = parse_equation_file(examples_dir / "cyclic.qeq")
    sol = parse_solution((tmp_path / "cyclic" / "cyclic.sol").read_text(), W.product)
    assert verify_solution(W, sol)
    assert run("decide", str(examples_dir / "cyclic_unsat.qeq"), "--backend", "cyclic") == EXIT_NEGATIVE
    assert [r["status"] for r in runs(tmp_path)] == ["sat", "unsat"]


def test_decide_bounded(run, examples_dir):
    assert run("decide", str(examples_dir / "cyclic.qeq"), "--box", "3", "--length", "2") == EXIT_OK
    assert run("decide", str(examples_dir / "cyclic_unsat.qeq"), "--box", "1", "--length", "1") == 2


def test_decide_bounded_backend_with_inline_bounds(run, examples_dir, tmp_path):
    assert run("decide", str(examples_dir / "cyclic.qeq"), "--backend", "bounded:3,2") == EXIT_OK
    assert runs(tmp_path)[-1]["details"]["backend"] == "bounded"
    assert run("decide", str(examples_dir / "cyclic_unsat.qeq"), "--backend", "bounded:1,1") == 2
    assert run("decide", str(examples_dir / "cyclic.qeq"), "--backend", "bounded:3") == EXIT_ERROR
    assert run("decide", str(examples_dir / "cyclic.qeq"), "--backend", "bounded:0,2") == EXIT_ERROR
    assert run("decide", str(examples_dir / "cyclic.qeq"), "--backend", "exact") == EXIT_ERROR


def test_verify(run, examples_dir):
    assert run("verify", str(examples_dir / "exx_eqn.qeq"), str(examples_dir / "exx_eqn.sol")) == EXIT_OK
    assert run("verify", str(examples_dir / "exx_eqn_L1.qeq"), str(examples_dir / "exx_eqn_44.sol")) == EXIT_NEGATIVE


def test_picture_check(run, examples_dir, tmp_path):
    code = run("picture-check", str(examples_dir / "annulus.qpic"), "--alpha", str(examples_dir / "annulus.alpha"))
    assert code == EXIT_OK
    report = json.loads((tmp_path / "annulus" / "annulus.report.json").read_text())
    assert report["validation"]["status"] == "valid"
    assert report["gauss_bonnet"] is True
    assert report["curvature"]["total"] == "0"


def test_bounds(run, examples_dir, tmp_path, capsys):
    assert run("bounds", str(examples_dir / "exx_z.qeq")) == EXIT_OK
    assert "536870916" in capsys.readouterr().out
    details = runs(tmp_path)[-1]["details"]
    assert (details["W0"], details["W1"], details["W2"], details["W3"]) == (10, 6, 2, 4)
    assert details["M1"] == 4672
    assert details["chi"] == 1


def test_zgraph(run, examples_dir, tmp_path):
    code = run("zgraph", str(examples_dir / "exx_z.qeq"), str(examples_dir / "exx_z.qcat"), "--start", "L1")
    assert code in (EXIT_OK, EXIT_NEGATIVE)
    text = (tmp_path / "exx-z" / "exx-z.zgraph.txt").read_text()
    assert "[subgraph 5]" in text
    assert "[subgraph 6]" not in text
    assert runs(tmp_path)[-1]["details"]["subgraphs"] == 5


def test_errors_exit_with_code_3(run, examples_dir, tmp_path):
    assert run("verify", str(tmp_path / "missing.qeq"), str(examples_dir / "exx_eqn.sol")) == EXIT_ERROR
    assert run("decide", str(examples_dir / "cyclic.qeq"), "--box", "-1") == EXIT_ERROR
    assert run("zgraph", str(examples_dir / "exx_z.qeq"), str(examples_dir / "exx_z.qcat"), "--start", "L9") == EXIT_ERROR
    assert runs(tmp_path)[-1]["status"] == "error"


def test_box_and_length_override_inline_bounds():
    cli = QexpCLI()
    args = cli.build_parser().parse_args(["decide", "eq.qeq", "--backend", "bounded:3,2", "--length", "1"])
    config = cli._run_config(args)
    assert (config.backend, config.box_bound, config.length_bound) == ("bounded", 3, 1)
    args = cli.build_parser().parse_args(["decide", "eq.qeq", "--backend", "cyclic"])
    assert cli._run_config(args).backend == "cyclic"
