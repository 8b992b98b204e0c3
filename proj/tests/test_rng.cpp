#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "bispec/rng.hpp"

using namespace bispec;

TEST_SUITE_BEGIN("rng");

TEST_CASE("Philox4x64-10 known-answer vectors") {
  // reference blocks cross-checked against numpy.random.Philox
  Philox4x64::Block z = Philox4x64::next({0, 0, 0, 0}, 0, 0);
  CHECK(z[0] == 0x16554d9eca36314cULL);
  CHECK(z[1] == 0xdb20fe9d672d0fdcULL);
  CHECK(z[2] == 0xd7e772cee186176bULL);
  CHECK(z[3] == 0x7e68b68aec7ba23bULL);

  Philox4x64::Block a = Philox4x64::next({0xffffffffffffffffULL, 0, 7, 1}, 0, 0);
  CHECK(a[0] == 0x78660550c060f9c0ULL);
  CHECK(a[1] == 0x6c4376d9e2df3393ULL);
  CHECK(a[2] == 0x9af20abce5339f5dULL);
  CHECK(a[3] == 0xf778b8e51bc71e08ULL);

  Philox4x64::Block b =
      Philox4x64::next({0, 0, 0, 0}, 0x123456789abcdef0ULL, 0x0fedcba987654321ULL);
  CHECK(b[0] == 0x36f305568021522eULL);
  CHECK(b[1] == 0x08e3ce60733a00bfULL);
  CHECK(b[2] == 0x0bc0bf045e665247ULL);
  CHECK(b[3] == 0x6c0c9505aca6d139ULL);
}

TEST_CASE("streams reproduce and differ") {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::vector<std::uint64_t> va, vb;
  bool all_equal_c = true, all_equal_d = true;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t x = a.next_u64();
    va.push_back(x);
    vb.push_back(b.next_u64());
    all_equal_c = all_equal_c && (x == c.next_u64());
    all_equal_d = all_equal_d && (x == d.next_u64());
  }
  CHECK(va == vb);
  CHECK_FALSE(all_equal_c);
  CHECK_FALSE(all_equal_d);
}

TEST_CASE("uniforms live strictly inside (0,1)") {
  RngStream rng(7, 0);
  for (int i = 0; i < 100000; ++i) {
    double u = rng.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gaussian moments") {
  RngStream rng(12345, 3);
  const int n = 200000;
  double s = 0, s2 = 0, s3 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    double z = rng.next_gaussian();
    s += z;
    s2 += z * z;
    s3 += z * z * z;
    s4 += z * z * z * z;
  }
  double m = s / n, m2 = s2 / n, m3 = s3 / n, m4 = s4 / n;
  CHECK(std::abs(m) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(m3) < 4.0 * std::sqrt(15.0 / n));
  CHECK(m4 == doctest::Approx(3.0).epsilon(0.05));
}

TEST_SUITE_END();
