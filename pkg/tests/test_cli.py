import io
import re

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bwspinor.cli import UsageError, format_complex, main, parse_complex, parse_complexes, parse_reals, read_config


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.mark.parametrize(
    "text, want",
    [("1", 1), ("-2.5", -2.5), ("2i", 2j), ("-i", -1j), ("i", 1j), ("1.5-0.5i", 1.5 - 0.5j), ("1e-3+2E2i", 0.001 + 200j), (".5+i", 0.5 + 1j)],
)
def test_parse_complex(text, want):
    assert parse_complex(text) == want


@pytest.mark.parametrize("text", ["", "1+", "i2", "1+2j", "1 + 2i", "abc", "1i+2"])
def test_parse_complex_rejects(text):
    with pytest.raises(UsageError):
        parse_complex(text)


@given(st.complex_numbers(allow_nan=False, allow_infinity=False))
def test_format_round_trips(z):
    assert parse_complex(format_complex(z)) == z


def test_vector_parsers():
    assert np.array_equal(parse_reals("1,0,0,1", 4), [1, 0, 0, 1])
    assert np.array_equal(parse_complexes("1,2i", 2), [1, 2j])
    with pytest.raises(UsageError):
        parse_reals("1,2", 4)
    with pytest.raises(UsageError):
        parse_reals("1,x,0,0", 4)


def test_frame_golden():
    code, out = run("frame", "--nu", "1,0", "--p", "1,0,0,0", "--m", "1")
    assert code == 0
    omega = parse_complexes(re.search(r"omega\^A = \((.*)\)", out).group(1).replace(" ", ""), 2)
    pi = parse_complexes(re.search(r"pi\^A    = \((.*)\)", out).group(1).replace(" ", ""), 2)
    assert np.allclose(omega, [1, 0], rtol=0, atol=1e-14)
    assert np.allclose(pi, [0, 1], rtol=0, atol=1e-14)


def test_massless_frame_output():
    code, out = run("frame", "--nu", "0,1", "--p", "2,0,0,2", "--m", "0")
    assert code == 0 and "massless spin-frame" in out and "flagpole" in out


def test_degenerate_input_exits_one(capsys):
    code, _ = run("frame", "--nu", "1,0", "--p", "1,0,0,1", "--m", "0")
    assert code == 1
    assert "DegenerateReference" in capsys.readouterr().err


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as e:
        main(["frame", "--nu", "1,0"], io.StringIO())
    assert e.value.code == 2
    assert run("frame", "--nu", "1,0,3", "--p", "1,0,0,0", "--m", "1")[0] == 2
    assert run("verify", "--trials", "5")[0] == 2
    assert run("frame", "--nu", "1,0", "--p", "1,0,0,0", "--m", "-1")[0] == 2
    assert run("verify", "--config", "/nonexistent/cfg")[0] == 2


def test_transform_rotation_golden():
    code, out = run("transform", "--nu", "1,0", "--p", "1,0,0,0", "--m", "1", "--rotate-z", "1.0")
    assert code == 0
    row = re.search(r"\[(\S+), (\S+)\]", out)
    assert abs(parse_complex(row.group(1)) - np.exp(-0.5j)) < 1e-12
    code, out = run("transform", "--nu", "0,1", "--p", "3,0,0,3", "--m", "0", "--rotate-z", "0.8", "--spin", "3")
    z = parse_complex(re.search(r"= (\S+)\n", out).group(1))
    assert code == 0 and abs(z - np.exp(1.2j)) < 1e-12


def test_transform_with_explicit_matrix_and_bad_matrix(capsys):
    code, out = run("transform", "--nu", "1,i", "--p", "2,0.5,0,1", "--m", "1.6583123951777", "--S", "1,1,0,1", "--sign", "-")
    assert code == 0 and "energy sign -" in out
    assert run("transform", "--nu", "1,0", "--p", "1,0,0,0", "--m", "1", "--S", "2,0,0,2")[0] == 1
    assert "NotUnimodular" in capsys.readouterr().err


def _verify_args(*extra):
    return ("verify", "--suite", "frames", "--trials", "200", "--mc-samples", "1000", *extra)


def test_structured_report_is_deterministic():
    a = run(*_verify_args("--report", "structured", "--seed", "4"))
    b = run(*_verify_args("--report", "structured", "--seed", "4"))
    assert a[0] == b[0] == 0

    def strip(text):
        return [line for line in text.splitlines() if not line.startswith("runtime=")]

    assert strip(a[1]) == strip(b[1])
    assert a[1].startswith("format=bwspinor-report/1\n[run]\n")
    assert "seed_source=flag" in a[1] and "[summary]" in a[1]


def test_tolerance_override_fails_checks():
    code, out = run(*_verify_args("--tol", "1e-30"))
    assert code == 1 and "0/9 checks passed" in out


def test_config_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nseed = 7\ntrials=200  # inline\nmc_samples=1000\nsuite=frames\n")
    assert read_config(str(cfg))["seed"] == "7"
    monkeypatch.setenv("BWSPINOR_SEED", "3")
    code, out = run("verify", "--config", str(cfg), "--report", "structured")
    assert code == 0 and "seed=7" in out and "seed_source=config" in out
    code, out = run("verify", "--config", str(cfg), "--seed", "9", "--report", "structured")
    assert "seed=9" in out and "seed_source=flag" in out
    code, out = run(*_verify_args("--report", "structured"))
    assert "seed=3" in out and "seed_source=env:BWSPINOR_SEED" in out
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour=blue\n")
    assert run("verify", "--config", str(bad))[0] == 2


def test_norm_fixture_reports_oracle():
    code, out = run("norm", "--m", "1", "--samples", "20000", "--seed", "1")
    assert code == 0
    z = float(re.search(r"z = (\S+)", out).group(1))
    assert z < 3 and "oracle = 0.9398646202530309" in out
    code, out = run("norm", "--m", "0", "--samples", "20000", "--boost-z", "0.5")
    assert code == 0 and "transformed by S" in out and "oracle" in out
    assert run("norm", "--m", "1", "--profile", "1,2,3", "--samples", "100")[0] == 2
