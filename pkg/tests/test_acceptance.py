"""End-to-end acceptance criteria, one test each, at their stated tolerances."""

import json

import numpy as np

from chshbound.bound import bound_value, certify, check_pure_relation
from chshbound.cli import main
from chshbound.entanglement import concurrence, eof
from chshbound.nonlocality import brute_force_nonlocality, chsh_value, nonlocality
from chshbound.qmat import is_rotation
from chshbound.shared import probe_no_triple, shared_conditions, theorem2_pair
from chshbound.states import (
    apply_local_unitary,
    correlation_matrix,
    gamma_state,
    omega_state,
    projector,
    random_density,
    random_pure,
    random_unitary,
    rotation_from_unitary,
    vw_state,
)
from chshbound.stateio import pure_to_json

from helpers import bell_diagonal, werner


def _report(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, detail


def test_ac01_bell_state():
    rho = projector(gamma_state(np.pi / 4))
    n = nonlocality(rho).value
    c, _ = concurrence(rho)
    e = eof(c)
    ok = abs(n - 2 * np.sqrt(2)) <= 1e-9 and abs(c - 1) <= 1e-9 and abs(e - 1) <= 1e-9
    _report("bell state", ok, f"N={n!r} C={c!r} EoF={e!r}")


def test_ac02_pure_relation():
    rng = np.random.default_rng(2)
    worst = max(check_pure_relation(random_pure(rng)) for _ in range(1000))
    _report("pure relation", worst <= 1e-8, f"max residual {worst:.3e}")


def test_ac03_bound():
    rng = np.random.default_rng(3)
    slacks = np.array([certify(random_density(rng, 4)).slack for _ in range(10_000)])
    violations = int(np.sum(slacks < -1e-8))
    _report("bound", violations == 0, f"min slack {slacks.min():.3e}, violations {violations}")


def test_ac04_tightness():
    rng = np.random.default_rng(4)
    grid = [vw_state(p, theta) for p in np.linspace(0, 1, 11) for theta in np.arange(20) * np.pi / 20]
    plain = max(certify(rho).slack for rho in grid)
    moved = 0.0
    for _ in range(100):
        ua, ub = random_unitary(rng), random_unitary(rng)
        moved = max(moved, max(certify(apply_local_unitary(rho, ua, ub)).slack for rho in grid))
    ok = plain <= 1e-8 and moved <= 1e-8
    _report("tightness", ok, f"max slack {plain:.3e}, conjugated {moved:.3e}")


def test_ac05_oracle():
    rng = np.random.default_rng(5)
    worst = 0.0
    for i in range(100):
        rho = random_density(rng, int(rng.integers(1, 5)))
        found = brute_force_nonlocality(rho, grid_steps=64, refine_iters=50, seed=i)
        worst = max(worst, abs(nonlocality(rho).value - found))
    _report("oracle agreement", worst <= 1e-3, f"max |analytic - oracle| {worst:.3e}")


def test_ac06_shared_pairs():
    rng = np.random.default_rng(6)
    worst, failures = 0.0, 0
    for theta in (np.pi / 12, np.pi / 8, np.pi / 6, np.pi / 5):
        for _ in range(20):
            psi, psi2, s_plus, s_minus = theorem2_pair(theta, random_unitary(rng), random_unitary(rng))
            rho, varrho = projector(psi), projector(psi2)
            for state in (rho, varrho):
                n = nonlocality(state).value
                for op in (s_plus, s_minus):
                    worst = max(worst, abs(chsh_value(state, op) - n))
            failures += not shared_conditions(rho, varrho).certificate
    ok = worst <= 1e-9 and failures == 0
    _report("shared pairs", ok, f"max gap {worst:.3e}, certificate failures {failures}")


def test_ac07_negative_control():
    thetas = np.linspace(0, np.pi / 2, 23)[1:-1]
    thetas = thetas[np.abs(thetas - np.pi / 4) > 1e-3][:20]
    shared = [
        t for t in thetas
        if shared_conditions(projector(gamma_state(t)), projector(omega_state(t))).certificate
    ]
    _report("negative control", len(thetas) == 20 and not shared, f"{len(shared)} of {len(thetas)} shared")


def test_ac08_correlation_covariance():
    rng = np.random.default_rng(8)
    worst, rot_err = 0.0, 0.0
    for _ in range(500):
        rho = random_density(rng, int(rng.integers(1, 5)))
        ua, ub = random_unitary(rng), random_unitary(rng)
        r_a, r_b = rotation_from_unitary(ua), rotation_from_unitary(ub)
        moved = correlation_matrix(apply_local_unitary(rho, ua, ub))
        worst = max(worst, np.abs(moved - r_a @ correlation_matrix(rho) @ r_b.T).max())
        for r in (r_a, r_b):
            rot_err = max(rot_err, np.abs(r @ r.T - np.eye(3)).max(), abs(np.linalg.det(r) - 1))
    ok = worst <= 1e-8 and rot_err <= 1e-10
    _report("correlation covariance", ok, f"max deviation {worst:.3e}, rotation defect {rot_err:.3e}")


def test_ac09_at_most_two():
    reps = [probe_no_triple(theta, trials=10_000, seed=9) for theta in (np.pi / 8, np.pi / 6)]
    violations = sum(r.violations for r in reps)
    residual = min(r.min_residual for r in reps)
    _report("at most two", violations == 0, f"violations {violations}, min residual {residual:.3e}")


def test_ac10_werner():
    rho = werner(0.8)
    c, _ = concurrence(rho)
    n = nonlocality(rho).value
    slack = certify(rho).slack
    oracle = brute_force_nonlocality(rho, grid_steps=64, refine_iters=50)
    # Bell-diagonal form: C = max(0, (|t1| + |t2| + |t3| - 1) / 2)
    t = np.abs(np.diag(correlation_matrix(bell_diagonal(0.8, -0.8, 0.8))))
    c_formula = max(0.0, (t.sum() - 1) / 2)
    ok = (
        abs(c - 0.7) <= 1e-9
        and abs(c_formula - 0.7) <= 1e-9
        and abs(n - 2.262742) <= 1e-6
        and abs(slack - 0.178569) <= 1e-6
        and abs(oracle - n) <= 1e-3
        and abs(bound_value(c) - n - slack) <= 1e-12
    )
    _report("werner", ok, f"C={c!r} N={n!r} slack={slack!r} oracle={oracle!r}")


def test_ac11_cli_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["scan", "--count", "1000", "--seed", "7", "--out", str(a)])
    main(["scan", "--count", "1000", "--seed", "7", "--out", str(b)])
    same = a.read_bytes() == b.read_bytes()
    bell = tmp_path / "bell.json"
    bell.write_text(json.dumps(pure_to_json(gamma_state(np.pi / 4))))
    capsys.readouterr()
    code = main(["analyze", str(bell)])
    out = capsys.readouterr().out.splitlines()
    wanted = ["C=1.000000", "N=2.828427", "slack=0.000000", "member=true"]
    ok = same and code == 0 and all(w in out for w in wanted)
    _report("cli determinism", ok, f"identical={same} exit={code}")
