from qexp.validators import (
    parameter_id,
    sanitize_filename,
    validate_file_path,
    validate_generator_name,
    validate_identifier,
    validate_letter_name,
    validate_parameter_name,
)


def test_identifiers():
    for name in ("H1", "beta1", "c1_r2", "rep.2", "0"):
        assert validate_identifier(name)
    for name in ("", "a:b", "x y", "_a", "a" * 65, "a|b", None):
        assert not validate_identifier(name)


def test_generator_names():
    assert validate_generator_name("c11")
    assert not validate_generator_name("1a")
    assert not validate_generator_name("a.b")


def test_parameter_names():
    assert validate_parameter_name("l12")
    assert validate_parameter_name("t3")
    assert not validate_parameter_name("l0")
    assert not validate_parameter_name("lambda1")
    assert parameter_id("l3") == 3
    assert parameter_id("t2") == -2
    assert parameter_id("x1") is None


def test_letter_names():
    assert validate_letter_name("d1")
    assert validate_letter_name("x12")
    assert not validate_letter_name("x0")
    assert not validate_letter_name("x1", "d")


def test_file_paths():
    assert validate_file_path("examples_data/exx_eqn.qeq", {".qeq"})
    assert validate_file_path("EQ.QEQ", {".qeq"})
    assert not validate_file_path("exx_eqn.sol", {".qeq"})
    assert not validate_file_path("bad\x00.qeq")
    assert not validate_file_path("")


def test_sanitize_filename():
    assert sanitize_filename("exx eqn / resolvent #3") == "exx-eqn-resolvent-3"
    assert sanitize_filename("../../etc") == "etc"
    assert sanitize_filename("exx_eqn.r1") == "exx-eqn.r1"
    assert sanitize_filename("???") == "output"
