#include "bispec/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace bispec {

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw std::invalid_argument("GaussLegendre: n must be >= 1");
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi-style initial guess, then Newton on P_n
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;  // ascending order
    weights[static_cast<std::size_t>(i)] = w;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) {
    // recompute the central node exactly at x = 0
    double p0 = 1.0, p1 = 0.0;
    // P_n(0) derivative via recurrence at x=0
    double x = 0.0;
    p0 = 1.0;
    p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    weights[static_cast<std::size_t>(n / 2)] = 2.0 / (dp * dp);
  }
}

void normalized_plm(int lmax, double x, std::vector<double>& out) {
  out.resize(plm_index(lmax, lmax) + 1);
  double sx = std::sqrt(std::max(0.0, 1.0 - x * x));  // sin(theta)
  out[plm_index(0, 0)] = std::sqrt(1.0 / (4.0 * M_PI));
  for (int m = 0; m < lmax; ++m) {
    double pmm = out[plm_index(m, m)];
    // diagonal step carries the Condon-Shortley phase
    out[plm_index(m + 1, m + 1)] = -std::sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * sx * pmm;
    out[plm_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pmm;
    for (int l = m + 2; l <= lmax; ++l) {
      double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      double b = std::sqrt(((static_cast<double>(l - 1) * (l - 1)) - static_cast<double>(m) * m) /
                           (4.0 * static_cast<double>(l - 1) * (l - 1) - 1.0));
      out[plm_index(l, m)] = a * (x * out[plm_index(l - 1, m)] - b * out[plm_index(l - 2, m)]);
    }
  }
}

SphereGrid::SphereGrid(int n_theta, int n_phi)
    : n_theta_(n_theta), n_phi_(n_phi), gl_(n_theta) {
  if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("SphereGrid: empty grid");
}

int SphereGrid::capacity() const {
  int by_theta = n_theta_ - 1;
  int by_phi = (n_phi_ - 1) / 2;
  return by_theta < by_phi ? by_theta : by_phi;
}

double SphereGrid::phi(int j) const {
  return 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n_phi_);
}

}  // namespace bispec
