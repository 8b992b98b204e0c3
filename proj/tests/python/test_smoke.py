"""Smoke tests for the pybind11 module (and a numpy cross-check of the RNG-free
Wigner values against an independent reference where available)."""

import math
import os
import subprocess

import pytest

import bispec


def test_wigner_values():
    assert bispec.wigner3j(1, 1, 2, 0, 0, 0) == pytest.approx(math.sqrt(2 / 15), abs=1e-13)
    assert bispec.wigner3j(1, 1, 1, 0, 0, 0) == 0.0
    assert bispec.wigner3j_zero(2, 2, 2) == pytest.approx(-math.sqrt(2 / 35), abs=1e-13)
    assert bispec.wigner6j(1, 1, 1, 1, 1, 1) == pytest.approx(1 / 6, abs=1e-13)
    assert bispec.clebsch_gordan(3, 0, 3, 0, 0, 0) == pytest.approx(-1 / math.sqrt(7), abs=1e-13)
    assert bispec.gaunt(0, 0, 0, 0, 0, 0) == pytest.approx(1 / math.sqrt(4 * math.pi), abs=1e-13)
    with pytest.raises(ValueError):
        bispec.wigner3j(-1, 1, 1, 0, 0, 0)


def test_wigner_against_sympy_if_present():
    sympy_wigner = pytest.importorskip("sympy.physics.wigner")
    for args in [(5, 7, 10, 2, -3, 1), (12, 14, 20, -4, 9, -5), (3, 3, 4, 1, 1, -2)]:
        want = float(sympy_wigner.wigner_3j(*args))
        assert bispec.wigner3j(*args) == pytest.approx(want, abs=1e-12)


def test_spectrum_model():
    model = bispec.PowerSpectrumModel(amplitude=1.0, alpha=3.0, f_nl=0.0, band_limit=30)
    assert bispec.c_gaussian(1, model) == pytest.approx(1 / 8)
    c2 = bispec.c_two(2, model)
    assert c2 > 0
    assert bispec.c_total(2, model) == pytest.approx(bispec.c_gaussian(2, model))
    with pytest.raises(ValueError):
        bispec.PowerSpectrumModel(amplitude=-1.0)


def test_triples_and_eta():
    triples = bispec.admissible_triples(5, 2)
    assert [(t[0], t[1], t[2]) for t in triples] == [
        (2, 3, 4), (2, 3, 5), (2, 4, 5), (3, 4, 5)]
    assert bispec.band_floor(0.25, 13) == 4
    model = bispec.PowerSpectrumModel(alpha=5.0, band_limit=16)
    assert bispec.eta_weight(2, 3, 4, model) == 0.0  # odd parity
    assert bispec.eta_weight(3, 4, 5, model) != 0.0


def test_estimator_roundtrip():
    model = bispec.PowerSpectrumModel(alpha=5.0, band_limit=24)
    triples = [(t[0], t[1], t[2]) for t in bispec.admissible_triples(12, 3)]
    eta = [bispec.eta_weight(*t, model) for t in triples]
    c = 0.37
    bhat = [c * e for e in eta]
    report = bispec.fit_fnl(triples, eta, bhat)
    assert report["f_hat"] == pytest.approx(c, abs=1e-12)
    assert report["var_theory"] == pytest.approx(1.0 / report["s_eta2"], rel=1e-12)


def test_asymptotics():
    assert bispec.delta(3, 4, 5) == 576
    assert bispec.q_shape(1.0, 1.0) == 3
    dr = bispec.d_r_reduced(0, 0, 0, 0, 0.2)
    assert dr["value"] == pytest.approx(1 / 12 - 0.02 + 0.004, abs=1e-8)
    assert not dr["divergent"]
    rep = bispec.asymptotic_report(5.0, 0.25, 1.0)
    assert rep["sigma2_fnl"] == pytest.approx(1.0 / (rep["c_eta2"] * rep["i_eta2"]), rel=1e-12)
    assert rep["i_kappa_divergent"] is True


def test_replication_driver():
    out = bispec.run_replications(alpha=5.0, f_nl=0.0, r=0.25, L=10,
                                  replications=150, base_seed=7)
    assert out["L0"] == 3
    assert out["n_failures"] == 0
    assert len(out["fhat"]) == 150
    cum = bispec.empirical_cumulants(out["fhat"])
    assert abs(cum["mean"]) <= 4 * cum["mean_se"]
    again = bispec.run_replications(alpha=5.0, f_nl=0.0, r=0.25, L=10,
                                    replications=150, base_seed=7)
    assert out["fhat"] == again["fhat"]


def test_ks():
    stat, p = bispec.ks_normality([-1.5, -0.8, -0.3, 0.1, 0.4, 0.9, 1.7, 2.1], 0.0, 1.0)
    assert stat == pytest.approx(0.205434537241457, abs=1e-10)
    assert p == pytest.approx(0.8883281556320806, abs=1e-6)


def test_cli_binary_if_available():
    cli = os.environ.get("BISPEC_CLI")
    if not cli or not os.path.exists(cli):
        pytest.skip("CLI binary not exported")
    out = subprocess.run([cli, "triples", "--L", "5", "--L0", "2"],
                         capture_output=True, text=True, check=True)
    rows = [line for line in out.stdout.strip().splitlines() if line]
    assert len(rows) == 5  # header + 4
