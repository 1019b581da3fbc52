import json

import numpy as np
import pytest

from chshbound.cli import main, parse_angle
from chshbound.stateio import density_to_json, pure_to_json
from chshbound.states import gamma_state, omega_state


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def bell_file(tmp_path):
    return _write(tmp_path / "bell.json", pure_to_json(gamma_state(np.pi / 4)))


def test_analyze_bell(bell_file, capsys):
    assert main(["analyze", bell_file]) == 0
    out = capsys.readouterr().out.splitlines()
    for line in ("C=1.000000", "N=2.828427", "slack=0.000000", "member=true", "EoF=1.000000"):
        assert line in out


def test_analyze_json(bell_file, capsys):
    assert main(["analyze", bell_file, "--json"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["N"] == pytest.approx(2 * np.sqrt(2))
    assert len(rec["b_prime"]) == 3


def test_analyze_maximally_mixed(tmp_path, capsys):
    path = _write(tmp_path / "mixed.json", density_to_json(np.eye(4) / 4))
    assert main(["analyze", path]) == 0
    out = capsys.readouterr().out.splitlines()
    for line in ("C=0.000000", "N=0.000000", "slack=2.000000", "member=false"):
        assert line in out


def test_analyze_not_psd(tmp_path, capsys):
    path = _write(tmp_path / "bad.json", density_to_json(np.diag([0.5, 0.6, 0.0, -0.1])))
    assert main(["analyze", path]) == 2
    assert "NotPSD" in capsys.readouterr().err


def test_analyze_malformed(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    assert main(["analyze", str(path)]) == 2
    assert "BadFormat" in capsys.readouterr().err


def test_scan_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["scan", "--count", "50", "--seed", "7", "--out", str(a)]) == 0
    assert main(["scan", "--count", "50", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "id,C,eof,N,bound,slack"
    assert len(lines) == 51


def test_scan_rows_respect_bound(capsys):
    assert main(["scan", "--count", "200", "--seed", "3", "--rank", "2"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    for row in rows:
        _, c, e, n, bound, slack = map(float, row.split(","))
        assert n <= 2 * np.sqrt(2) + 1e-9 and slack >= -1e-8


def test_scan_pure_saturates(capsys):
    assert main(["scan", "--count", "1000", "--seed", "1", "--rank", "1"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert max(abs(float(r.split(",")[5])) for r in rows) <= 1e-7


def test_pair_check(tmp_path, capsys):
    g1 = _write(tmp_path / "g1.json", pure_to_json(gamma_state(np.pi / 8)))
    g3 = _write(tmp_path / "g3.json", pure_to_json(gamma_state(3 * np.pi / 8)))
    w1 = _write(tmp_path / "w1.json", pure_to_json(omega_state(np.pi / 8)))
    assert main(["pair-check", g1, g3]) == 0
    assert "certificate=true" in capsys.readouterr().out
    assert main(["pair-check", g1, w1]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"amplitudes": [[1, 0]]}')
    assert main(["pair-check", g1, str(bad)]) == 2


def test_oracle_compare_bell(bell_file, capsys):
    assert main(["oracle-compare", "--state", bell_file]) == 0
    out = capsys.readouterr().out
    worst = float(out.strip().splitlines()[-1].split()[0].split("=")[1])
    assert worst <= 1e-6


def test_oracle_compare_random(capsys):
    assert main(["oracle-compare", "--count", "5", "--seed", "2"]) == 0


def test_oracle_compare_bad_grid():
    with pytest.raises(SystemExit) as exc:
        main(["oracle-compare", "--grid", "4"])
    assert exc.value.code == 2


def test_make_vw_round_trip(tmp_path, capsys):
    path = tmp_path / "vw.json"
    assert main(["make", "--family", "vw", "--p", "0.3", "--theta", "pi/6", "--out", str(path)]) == 0
    assert main(["analyze", str(path), "--json"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert abs(rec["slack"]) <= 1e-8 and rec["member"]


def test_make_gamma_is_bell(tmp_path):
    path = tmp_path / "g.json"
    assert main(["make", "--family", "γ", "--theta", "pi/4", "--out", str(path)]) == 0
    amps = np.array(json.loads(path.read_text())["amplitudes"])
    np.testing.assert_allclose(amps[:, 0], [2 ** -0.5, 0, 0, 2 ** -0.5], atol=1e-15)


def test_make_bad_delta():
    with pytest.raises(SystemExit) as exc:
        main(["make", "--family", "lambda", "--theta", "0.3", "--delta", "2"])
    assert exc.value.code == 2


def test_parse_angle():
    assert parse_angle("3*pi/8") == pytest.approx(3 * np.pi / 8)
    assert parse_angle("-0.25") == -0.25
    with pytest.raises(Exception):
        parse_angle("__import__('os')")
