"""Smoke test of the qwire extension module.

Build the module and put it on the path first, for example:

    cargo build --release -p qwire-python
    cp target/release/libqwire.so python/qwire.so
    python3 python/smoke_test.py
"""

import math

import qwire


def main():
    p = qwire.WireParams.preset("fig1a").with_k(1e-2)
    assert math.isclose(p.omega_h, 2.0) and p.k == 1e-2

    states = qwire.solve_all(p)
    assert list(states) == ["global", "local", "redfield", "exact"]
    exact = states["exact"]
    assert exact.physical and exact.qdot_h > 0.0
    assert math.isclose(exact.qdot_h, -exact.qdot_c)
    assert math.isclose(states["global"].qdot_h, exact.qdot_h, rel_tol=1e-3)
    assert states["local"].qdot_h < 0.0

    g = states["global"].covariance
    f = g.fidelity(exact.covariance)
    assert 1.0 - f < 1e-4, f
    assert g.log_negativity() == 0.0
    mi = g.mutual_information()
    assert math.isclose(mi, g.discord("hot") + g.classical_correlations("hot"), rel_tol=1e-9)

    vacuum = qwire.Covariance([[0.5 if i == j else 0.0 for j in range(4)] for i in range(4)])
    assert abs(vacuum.entropy()) < 1e-12
    assert all(math.isclose(nu, 0.5) for nu in vacuum.symplectic_eigenvalues())
    assert vacuum[0, 0] == 0.5

    local = qwire.steady_state(p, "local")
    assert local.residual < 1e-11

    rows = qwire.sweep(p, "k", qwire.log_grid(1e-3, 1e-1, 3), jobs=2)
    assert len(rows) == 3 and rows[0]["k"] == 1e-3
    assert all(r["local"]["qdot_h"] < 0.0 for r in rows)

    assert all(check[4] for check in qwire.validate(p))

    strong = qwire.WireParams.preset("fig2c").with_k(1e5)
    en = qwire.steady_state(strong, "global").covariance.log_negativity()
    assert abs(en - qwire.strong_coupling_asymptote(strong)) < 0.01

    try:
        qwire.WireParams(1.0, 2.0, -1.0, 2.0, 3.0)
    except ValueError as e:
        assert "k" in str(e)
    else:
        raise AssertionError("negative k accepted")

    assert "fig2c" in qwire.PRESETS
    print("qwire smoke test passed")


if __name__ == "__main__":
    main()
