import math

import pytest

import qcosym


def test_equilibrium_and_jacobian():
    p = qcosym.FhnParams()
    x, y, z = qcosym.equilibrium(p)
    assert x == pytest.approx(3.5)
    assert z == pytest.approx(4.0)
    A = qcosym.jacobian_A(p)
    assert len(A) == 3 and all(len(r) == 3 for r in A)
    assert A[0][1] == pytest.approx(-10.0)


def test_validate_hj():
    p = qcosym.FhnParams()
    r = qcosym.validate_hj(p, 2.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.5)
    assert r["max_dev"] <= 1e-8
    assert len(r["ratio"]) == len(r["times"])


def test_nullcline_raises():
    p = qcosym.FhnParams()
    with pytest.raises(qcosym._core.NullclineError):
        qcosym.validate_hj(p, 0.5, -1.0, 0.0, 1.0, 0.5, 0.0, 20.0)


def test_hamiltonian_value():
    p = qcosym.FhnParams()
    assert qcosym.hamiltonian(p, [1, 0, 0, 1, 0, 0, 0, 0, 0]) == pytest.approx(20.0 / 3.0)


def test_simulate_zero_momenta():
    p = qcosym.FhnParams(a=0.4125, b=0.5, c=0.8)
    times, states = qcosym.simulate(p, [-1.3, -0.5, -0.6, 0, 0, 0], 0.0, 1.0, [0.0, 0.5, 1.0])
    assert times == [0.0, 0.5, 1.0]
    assert all(s[3] == 0.0 and s[5] == 0.0 for s in states)


def test_linearize_and_drift():
    p = qcosym.FhnParams(a=0.4125, b=qcosym.SlowCoefficient.sine(0.5, 0.02, 1.0, 0.0), c=0.8)
    I = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    g = qcosym.linearize(p, I, [0.3, -0.2, 0.1], 0.0, 0.0, 2.0, [0.0, 1.0, 2.0])
    assert g["grid"] == [0.0, 1.0, 2.0]
    assert g["P"][0] == I
    uPu, Qu = qcosym.quadratic_invariant_drift(p, I, [0.3, -0.2, 0.1], [0.1, 0.05, -0.05], 0.0, 5.0)
    assert uPu <= 1e-8 and Qu <= 1e-8


def test_characteristics_keep_S():
    p = qcosym.FhnParams()
    curves = qcosym.trace_characteristics(p, [[2, 0, 1, 0, 0.375], [-1, 0.5, 0.2, 1, -2.5]],
                                          s1=2.0, threads=2)
    assert [c["S"] for c in curves] == [0.375, -2.5]
    assert all(c["error"] == "" for c in curves)
    assert curves[1]["points"][-1][3] == pytest.approx(3.0)


def test_solvability():
    heis = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    heis[0][1][2], heis[1][0][2] = 1.0, -1.0
    assert qcosym.solvability_test(heis) == (True, [3, 1, 0])
    so3 = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        so3[i][j][k], so3[j][i][k] = 1.0, -1.0
    assert qcosym.solvability_test(so3)[0] is False
    assert qcosym.check_center_condition(heis, [0, 0, 1])[0] is False


def test_run_command():
    cfg = {
        "model": {"eps": 0.1, "delta": 0.5, "a": 0.5, "b": 0.8, "c": 0.7},
        "time": {"t0": 0.0, "t1": 0.5, "samples": 11},
        "initial": {"x": 2.0, "y": 0.0, "z": 1.0, "p_y": 1.0, "p_z": 1.0},
    }
    code, csv, msg = qcosym.run_command("validate-hj", cfg)
    assert code == 0, msg
    lines = [l for l in csv.splitlines() if not l.startswith("#")]
    assert lines[0].startswith("t,x,y,z")
    assert len(lines) == 12
    assert not math.isnan(float(lines[-1].split(",")[-1]))

    cfg["model"]["epsilon"] = 0.1
    code, _, msg = qcosym.run_command("validate-hj", cfg)
    assert code == 1 and "epsilon" in msg
