import csv
import json
import math
from pathlib import Path

import pytest

from revival_lab import cli
from revival_lab.config import parse_text
from revival_lab.errors import ParseError, ValidationError

MINIMAL = """# X^2 + XY + Y^2
coeff = 2 0 1
coeff = 1 1 1
coeff = 0 2 1
omega1 = 1
omega2 = 1
E1 = 0.5
E2 = 0.5
h = 0.01
delta1 = 0.6
delta2 = 0.6
delta1p = 0.8
delta2p = 0.8
samples = 64
"""

LINEAR = MINIMAL.replace("coeff = 2 0 1\ncoeff = 1 1 1\ncoeff = 0 2 1", "coeff = 1 0 1\ncoeff = 0 1 1")


def write(tmp_path, text, name="s.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_minimal():
    cfg = parse_text(MINIMAL)
    assert cfg.coeffs == [(2, 0, 1.0), (1, 1, 1.0), (0, 2, 1.0)]
    assert cfg.h == 0.01 and cfg.samples == 64 and cfg.window_factor == 8.0
    assert cfg.polynomial(0.5, 0.5) == pytest.approx(0.75)


def test_parse_errors():
    with pytest.raises(ParseError) as e:
        parse_text(MINIMAL + "h = 0.02\n")
    assert e.value.line == 15
    with pytest.raises(ParseError) as e:
        parse_text(MINIMAL + "colour = blue\n")
    assert "unknown key" in str(e.value)
    with pytest.raises(ParseError):
        parse_text(MINIMAL + "coeff = 1 2\n")
    with pytest.raises(ParseError):
        parse_text(MINIMAL + "no equals sign\n")
    with pytest.raises(ParseError):
        parse_text(MINIMAL.replace("samples = 64", "samples = many"))


def test_validation_errors():
    with pytest.raises(ValidationError) as e:
        parse_text(MINIMAL.replace("delta1p = 0.8", "delta1p = 0.55"))
    assert "delta1p must exceed delta1" in str(e.value)
    with pytest.raises(ValidationError):
        parse_text(MINIMAL.replace("E1 = 0.5", "E1 = 1.5"))
    with pytest.raises(ValidationError):
        parse_text(MINIMAL.replace("h = 0.01\n", ""))
    with pytest.raises(ValidationError):
        parse_text(MINIMAL + "alpha = -0.5\n")
    with pytest.raises(ValidationError):
        parse_text(MINIMAL + "eta = 0.8\n")


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_simulate(tmp_path):
    out = tmp_path / "out"
    assert cli.main(["simulate", "--config", write(tmp_path, MINIMAL), "--out", str(out)]) == 0
    rows = read_csv(out / "simulate.csv")
    assert rows[0] == ["t", "abs_r", "abs_a1", "abs_a2", "envelope"]
    first = [float(x) for x in rows[1]]
    assert first[0] == 0.0
    assert all(abs(v - 1) <= 1e-10 for v in first[1:])
    assert len(rows) == 65
    assert read_csv(out / "return_amplitude.csv")[0] == ["t", "re", "im", "magnitude"]
    raw = (out / "simulate.csv").read_bytes()
    assert b"\r" not in raw
    # 17 significant digits
    assert len(rows[2][1].replace(".", "").replace("-", "").split("e")[0].lstrip("0")) <= 17
    man = json.loads((out / "manifest_simulate.json").read_text())
    assert man["version"] == cli.__version__ and "simulate.csv" in man["outputs"]
    assert man["config"]["h"] == 0.01


def test_packet_dump(tmp_path):
    out = tmp_path / "o"
    cli.main(["simulate", "--config", write(tmp_path, MINIMAL + "dump_packet = true\n"), "--out", str(out)])
    rows = read_csv(out / "packet.csv")
    assert rows[0] == ["n", "m", "a"]
    assert math.fsum(float(r[2]) ** 2 for r in rows[1:]) == pytest.approx(1, abs=1e-12)


def test_periods_linear_reports_undefined(tmp_path, capsys):
    out = tmp_path / "o"
    assert cli.main(["periods", "--config", write(tmp_path, LINEAR), "--out", str(out)]) == 0
    text = (out / "periods.txt").read_text()
    assert "revival: undefined" in text
    assert "commensurate" in text


def test_revival_report(tmp_path):
    out = tmp_path / "o"
    assert cli.main(["revival", "--config", write(tmp_path, MINIMAL), "--out", str(out)]) == 0
    man = json.loads((out / "manifest_revival.json").read_text())
    assert man["summary"]["t_frac"] == pytest.approx(200 * math.pi)
    assert man["summary"]["residual"] < 1e-9
    rows = read_csv(out / "revival_coefficients.csv")
    assert rows[0] == ["k1", "k2", "re", "im", "mod2"]


def test_revival_fractional(tmp_path):
    out = tmp_path / "o"
    cfg = MINIMAL + "at = 1/2\n"
    assert cli.main(["revival", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
    rows = read_csv(out / "revival_coefficients.csv")
    assert len(rows) == 5
    assert sum(float(r[4]) for r in rows[1:]) == pytest.approx(1, abs=1e-10)


def test_cf_report(tmp_path):
    text = MINIMAL.replace("coeff = 2 0 1\ncoeff = 1 1 1\ncoeff = 0 2 1",
                           "coeff = 1 0 1\ncoeff = 0 1 1.4142135623730951") + "theta = sqrt(2)\nq_max = 500\n"
    out = tmp_path / "o"
    assert cli.main(["cf", "--config", write(tmp_path, text), "--out", str(out)]) == 0
    rows = read_csv(out / "cf.csv")
    assert rows[0][:4] == ["k", "a_k", "p_k", "q_k"]
    assert [int(r[1]) for r in rows[1:6]] == [1, 2, 2, 2, 2]


def test_convergence(tmp_path):
    text = MINIMAL.replace("h = 0.01", "h_list = 0.01, 0.005, 0.0025") + "alpha = 0\n"
    out = tmp_path / "o"
    assert cli.main(["convergence", "--config", write(tmp_path, text), "--out", str(out)]) == 0
    rows = read_csv(out / "convergence.csv")
    assert rows[0] == ["h", "linear_error", "quadratic_error"] and len(rows) == 4


def test_exit_codes(tmp_path):
    assert cli.main(["simulate", "--config", write(tmp_path, MINIMAL + "h = 1\n"), "--out", str(tmp_path)]) == 3
    bad = MINIMAL.replace("delta1p = 0.8", "delta1p = 0.55")
    assert cli.main(["simulate", "--config", write(tmp_path, bad), "--out", str(tmp_path)]) == 4
    assert cli.main(["revival", "--config", write(tmp_path, LINEAR), "--out", str(tmp_path)]) == 10
    assert cli.main(["simulate", "--config", str(tmp_path / "missing.cfg"), "--out", str(tmp_path)]) == 5


@pytest.mark.parametrize("sub", cli.SUBCOMMANDS)
def test_deterministic_output(tmp_path, sub):
    text = MINIMAL.replace("h = 0.01", "h_list = 0.01, 0.005, 0.0025") if sub == "convergence" else MINIMAL
    cfg = write(tmp_path, text)
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main([sub, "--config", cfg, "--out", str(a)]) == 0
    assert cli.main([sub, "--config", cfg, "--out", str(b), "--threads", "3"]) == 0
    files = sorted(p.name for p in a.iterdir() if p.suffix == ".csv")
    assert files
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes()
