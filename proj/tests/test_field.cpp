#include <doctest.h>

#include <cmath>
#include <complex>

#include "bispec/field.hpp"
#include "bispec/stats.hpp"
#include "bispec/util.hpp"

using namespace bispec;

TEST_SUITE_BEGIN("field");

namespace {
PowerSpectrumModel make_model(double A, double alpha, double fnl, int band) {
  PowerSpectrumModel m;
  m.amplitude = A;
  m.alpha = alpha;
  m.f_nl = fnl;
  m.band_limit = band;
  return m;
}
}  // namespace

TEST_CASE("grid quadrature integrates band-limited products exactly") {
  GaussLegendre gl(6);
  // integrate x^10 over [-1,1]: 2/11, degree 10 <= 2*6-1
  double s = 0;
  for (int i = 0; i < 6; ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 10);
  CHECK(s == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
}

TEST_CASE("single-mode synthesis reproduces Y_{1,0}") {
  HarmonicCoefficientSet alms(2);
  alms.set(1, 0, {1.0, 0.0});
  SphereGrid grid = SphereGrid::for_band(2);
  auto values = synthesize(alms, grid);
  for (int i = 0; i < grid.n_theta(); ++i)
    for (int j = 0; j < grid.n_phi(); ++j) {
      double want = std::sqrt(3.0 / (4.0 * M_PI)) * grid.node_x(i);
      CHECK(values[static_cast<std::size_t>(i) * grid.n_phi() + j] ==
            doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("analysis recovers single modes and kills constants") {
  SphereGrid grid = SphereGrid::for_band(8);
  HarmonicCoefficientSet alms(8);
  alms.set(2, 1, {1.0, 0.0});
  auto rec = analyze(synthesize(alms, grid), grid, 8);
  for (int l = 1; l <= 8; ++l)
    for (int m = 0; m <= l; ++m) {
      std::complex<double> want = (l == 2 && m == 1) ? std::complex<double>{1, 0}
                                                     : std::complex<double>{0, 0};
      CHECK(std::abs(rec.get(l, m) - want) < 1e-12);
    }
  std::vector<double> constant(grid.n_nodes(), 4.2);
  auto c = analyze(constant, grid, 8);
  for (int l = 1; l <= 8; ++l)
    for (int m = 0; m <= l; ++m) CHECK(std::abs(c.get(l, m)) < 1e-12);
}

TEST_CASE("synthesize/analyze round trip at band 64") {
  RngStream rng(5150, 0);
  auto model = make_model(1.0, 3.0, 0.0, 64);
  HarmonicCoefficientSet alms = sample_gaussian_alm(model, 64, rng);
  SphereGrid grid = SphereGrid::for_band(64);
  auto rec = analyze(synthesize(alms, grid), grid, 64);
  double worst = 0;
  for (int l = 1; l <= 64; ++l)
    for (int m = 0; m <= l; ++m)
      worst = std::max(worst, std::abs(rec.get(l, m) - alms.get(l, m)));
  CHECK(worst < 1e-10);
  CHECK_THROWS_AS(synthesize(alms, SphereGrid(32, 33)), std::invalid_argument);
  CHECK_THROWS_AS(analyze(std::vector<double>(grid.n_nodes(), 0.0), grid, 200),
                  std::invalid_argument);
}

TEST_CASE("sampling determinism and reality constraint") {
  auto model = make_model(1.0, 3.0, 0.0, 12);
  RngStream r1(99, 4), r2(99, 4);
  auto a = sample_gaussian_alm(model, 12, r1);
  auto b = sample_gaussian_alm(model, 12, r2);
  CHECK(a.packed() == b.packed());
  CHECK(a.reality_residual() == 0.0);
  // a_{l,-m} = (-1)^m conj(a_{l,m})
  auto v = a.get(5, -3);
  auto w = std::conj(a.get(5, 3));
  CHECK(v == -w);
}

TEST_CASE("sampled variances match the spectrum") {
  auto model = make_model(1.0, 3.0, 0.0, 6);
  const int R = 10000;
  std::vector<double> v50(R), v53r(R), odd(R);
  for (int rep = 0; rep < R; ++rep) {
    RngStream rng(31337, static_cast<std::uint64_t>(rep));
    auto alms = sample_gaussian_alm(model, 6, rng);
    v50[rep] = alms.get(5, 0).real() * alms.get(5, 0).real();
    v53r[rep] = std::norm(alms.get(5, 3));
    odd[rep] = (alms.get(1, 0) * alms.get(2, 0) * alms.get(3, 0)).real();
  }
  double c5 = c_gaussian(5, model);
  Cumulants m0 = empirical_cumulants(v50);
  CHECK(std::abs(m0.mean - c5) <= 3.0 * m0.mean_se);
  Cumulants m3 = empirical_cumulants(v53r);
  CHECK(std::abs(m3.mean - c5) <= 3.0 * m3.mean_se);
  Cumulants modd = empirical_cumulants(odd);
  CHECK(std::abs(modd.mean) <= 3.0 * modd.mean_se);  // odd moments vanish
}

TEST_CASE("quadratic coefficients: pixel and harmonic routes agree") {
  auto model = make_model(1.0, 3.0, 0.1, 8);
  RngStream rng(2718, 1);
  auto alms = sample_gaussian_alm(model, 8, rng);
  SphereGrid grid = SphereGrid::for_band(8);
  auto pix = alm_two_pixel(alms, model, grid);
  auto har = alm_two_harmonic(alms);
  REQUIRE(pix.band_limit() == 16);
  REQUIRE(har.band_limit() == 16);
  double worst = 0;
  for (int l = 1; l <= 16; ++l)
    for (int m = 0; m <= l; ++m)
      worst = std::max(worst, std::abs(pix.get(l, m) - har.get(l, m)));
  CHECK(worst < 1e-8);
  CHECK_THROWS_AS(alm_two_harmonic(sample_gaussian_alm(model, 8, rng), -1, 4),
                  std::length_error);
}

TEST_CASE("hand expansion of a single-mode square") {
  // T = x Y_{1,0}: H2 coefficients live at l = 2 only, value x^2 / sqrt(5 pi)
  auto model = make_model(1.0, 3.0, 0.0, 1);
  HarmonicCoefficientSet alms(1);
  const double x = 0.8;
  alms.set(1, 0, {x, 0.0});
  auto two = alm_two_harmonic(alms);
  CHECK(two.get(2, 0).real() == doctest::Approx(x * x / std::sqrt(5.0 * M_PI)).epsilon(1e-12));
  for (int l = 1; l <= 2; ++l)
    for (int m = 0; m <= l; ++m)
      if (!(l == 2 && m == 0)) CHECK(std::abs(two.get(l, m)) < 1e-13);
  // pixel route agrees
  SphereGrid grid = SphereGrid::for_band(1);
  auto pix = alm_two_pixel(alms, model, grid);
  CHECK(std::abs(pix.get(2, 0) - two.get(2, 0)) < 1e-12);
}

TEST_CASE("zero input produces zero quadratic coefficients") {
  HarmonicCoefficientSet alms(4);
  auto two = alm_two_harmonic(alms);
  for (int l = 1; l <= 8; ++l)
    for (int m = 0; m <= l; ++m) CHECK(two.get(l, m) == std::complex<double>{0, 0});
}

TEST_CASE("quadratic coefficient moments match C_{l;2}") {
  auto model = make_model(1.0, 3.0, 0.1, 8);
  SphereGrid grid = SphereGrid::for_band(8);
  const int R = 10000;
  const int l_probe = 4;
  std::vector<double> p2(R), mean_re(R);
  for (int rep = 0; rep < R; ++rep) {
    RngStream rng(11, static_cast<std::uint64_t>(rep));
    auto alms = sample_gaussian_alm(model, 8, rng);
    auto two = alm_two_pixel(alms, model, grid, l_probe);
    // average |a|^2 over m (pooled power at l = l_probe)
    CompensatedSum s;
    s.add(two.get(l_probe, 0).real() * two.get(l_probe, 0).real());
    for (int m = 1; m <= l_probe; ++m) s.add(2.0 * std::norm(two.get(l_probe, m)));
    p2[rep] = s.value() / (2.0 * l_probe + 1.0);
    mean_re[rep] = two.get(l_probe, 1).real();
  }
  double c2 = c_two(l_probe, model);
  Cumulants cp = empirical_cumulants(p2);
  CHECK(std::abs(cp.mean - c2) <= 3.0 * cp.mean_se);
  Cumulants cm = empirical_cumulants(mean_re);
  CHECK(std::abs(cm.mean) <= 3.0 * cm.mean_se);  // E[a_{l,m;2}] = 0
}

TEST_CASE("perturbed normalized coefficients") {
  auto model = make_model(1.0, 5.0, 0.1, 8);
  SphereGrid grid = SphereGrid::for_band(8);
  const int R = 8000;
  const int l_probe = 3;
  std::vector<double> pw(R);
  for (int rep = 0; rep < R; ++rep) {
    RngStream rng(77, static_cast<std::uint64_t>(rep));
    auto alms = sample_gaussian_alm(model, 8, rng);
    auto two = alm_two_pixel(alms, model, grid, 4);
    auto norm = perturb_and_normalize(alms, two, model, 4);
    CompensatedSum s;
    s.add(norm.get(l_probe, 0).real() * norm.get(l_probe, 0).real());
    for (int m = 1; m <= l_probe; ++m) s.add(2.0 * std::norm(norm.get(l_probe, m)));
    pw[rep] = s.value() / (2.0 * l_probe + 1.0);
  }
  double want = 1.0 + 0.1 * 0.1 * c_two(l_probe, model) / c_gaussian(l_probe, model);
  Cumulants c = empirical_cumulants(pw);
  CHECK(std::abs(c.mean - want) <= 3.0 * c.mean_se);
  {
    // reality constraint survives the perturbation (H2 of a real field)
    RngStream rng(79, 0);
    auto alms = sample_gaussian_alm(model, 8, rng);
    auto two = alm_two_pixel(alms, model, grid, 4);
    auto norm = perturb_and_normalize(alms, two, model, 4);
    CHECK(norm.reality_residual() == 0.0);
  }

  // f_nl = 0 collapses to the normalized Gaussian coefficients
  auto m0 = make_model(1.0, 5.0, 0.0, 8);
  RngStream rng(78, 0);
  auto alms = sample_gaussian_alm(m0, 8, rng);
  HarmonicCoefficientSet empty;
  auto norm = perturb_and_normalize(alms, empty, m0, 8);
  for (int l = 1; l <= 8; ++l)
    CHECK(std::abs(norm.get(l, 0).real() -
                   alms.get(l, 0).real() / std::sqrt(c_gaussian(l, m0))) < 1e-14);
}

TEST_CASE("Wick fourth moment of normalized Gaussian coefficients") {
  auto model = make_model(1.0, 3.0, 0.0, 6);
  const int R = 20000;
  std::vector<double> fourth(R);
  for (int rep = 0; rep < R; ++rep) {
    RngStream rng(3333, static_cast<std::uint64_t>(rep));
    auto alms = sample_gaussian_alm(model, 6, rng);
    HarmonicCoefficientSet empty;
    auto norm = perturb_and_normalize(alms, empty, model, 6);
    double a2 = std::norm(norm.get(4, 2));
    fourth[rep] = a2 * a2;
  }
  // complex Wick: E|a|^4 = 2 (E|a|^2)^2 = 2
  Cumulants c = empirical_cumulants(fourth);
  CHECK(std::abs(c.mean - 2.0) <= 3.0 * c.mean_se);
}

TEST_CASE("covariance depends only on angular separation") {
  auto model = make_model(1.0, 4.0, 0.0, 8);
  SphereGrid grid = SphereGrid::for_band(8);
  const int R = 4000;
  // two node pairs with (numerically) equal angular separation
  int ia = 3, ja = 0;
  int ib = grid.n_theta() - 1 - ia, jb = 0;  // mirrored latitude pair
  // pick partners straight north pole-ish: use (ia, 0) vs (ia, k) same-latitude
  // separation and its mirrored copy
  int k = 4;
  std::vector<double> prod1(R), prod2(R);
  for (int rep = 0; rep < R; ++rep) {
    RngStream rng(909, static_cast<std::uint64_t>(rep));
    auto alms = sample_gaussian_alm(model, 8, rng);
    auto vals = synthesize(alms, grid);
    auto at = [&](int i, int j) { return vals[static_cast<std::size_t>(i) * grid.n_phi() + j]; };
    prod1[rep] = at(ia, ja) * at(ia, (ja + k) % grid.n_phi());
    prod2[rep] = at(ib, jb) * at(ib, (jb + k) % grid.n_phi());
  }
  Cumulants c1 = empirical_cumulants(prod1);
  Cumulants c2 = empirical_cumulants(prod2);
  CHECK(std::abs(c1.mean - c2.mean) <= 3.0 * std::sqrt(c1.mean_se * c1.mean_se +
                                                       c2.mean_se * c2.mean_se));
}

TEST_SUITE_END();
