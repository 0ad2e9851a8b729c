"""Smoke test for the stabpurity extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/stabpurity-*.whl
"""

import math

import stabpurity as sp


def close(x, y, tol=1e-9):
    return abs(x - y) <= tol


def main():
    g = sp.Graph.path(2)
    assert sp.generators(g) == ["+XZ", "+ZX"]
    assert sp.stabilizer_element(g, 0b11) == "+YY"

    a = sp.dephased_expectations(g, 0.1)
    assert all(close(v, math.exp(-0.1), 1e-15) for v in a)

    est = sp.min_purity(a)
    assert round(est.p_min, 4) == 0.8233
    assert est.certified_optimal
    assert round(sp.exact_purity_dephased(g, 0.1), 4) == 0.8269
    assert round(sp.entropy_lower_bound(a), 4) == 0.3803
    assert round(sp.exact_entropy_dephased(g, 0.1), 4) == 0.3827

    cert = sp.kkt_certificate(a)
    assert cert.valid and cert.stationarity_residual < 1e-12

    qp, _ = sp.qp_min_purity(a)
    assert close(qp, est.p_min, 1e-6)
    assert close(sp.max_entropy_numeric(a), sp.entropy_max(a), 1e-6)

    c = sp.dephased_coefficients(sp.Graph.preset("ring-3"), 0.2)
    lam = sp.eigenvalues(c)
    assert close(sum(lam), 1.0, 1e-12)
    assert close(sp.purity(c), sum(x * x for x in lam), 1e-12)
    assert all(close(x, y, 1e-12) for x, y in zip(sp.coefficients(lam), c))
    assert sp.entropy(lam) > 0

    a_hat, delta = sp.sample_measurements([0.9, 0.9, 0.9], 10000, 7)
    assert (a_hat, delta) == sp.sample_measurements([0.9, 0.9, 0.9], 10000, 7)
    lo, hi = sp.purity_error_bars(a_hat, delta)
    assert lo <= sp.min_purity(a_hat).p_min <= hi

    try:
        sp.min_purity([0.2, 0.2, 0.2])
    except ValueError as e:
        assert "infeasible" in str(e).lower()
    else:
        raise AssertionError("expected ValueError")

    print(f"stabpurity {sp.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
