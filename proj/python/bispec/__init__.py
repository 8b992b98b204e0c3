"""Narrow-band spherical bispectrum toolkit.

Thin Python veneer over the C++ core: Wigner-symbol algebra, the power-law
spectrum model, admissible-triple enumeration, the KSW-type estimator of the
non-Gaussianity amplitude, the closed-form asymptotic constants, and a
replicated Monte Carlo driver.
"""

from bispec._core import (  # noqa: F401
    PowerSpectrumModel,
    admissible_triples,
    asymptotic_report,
    band_floor,
    c_gaussian,
    c_total,
    c_two,
    clebsch_gordan,
    cum4_bhat_theory,
    d_r_bruteforce,
    d_r_reduced,
    delta,
    empirical_cumulants,
    eta_weight,
    fit_fnl,
    gaunt,
    ks_normality,
    q_shape,
    run_replications,
    wigner3j,
    wigner3j_zero,
    wigner3j_zero_asymptotic,
    wigner6j,
    __version__,
)
