#pragma once

#include <vector>

namespace bispec {

/// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on P_n.
/// Exact for polynomials of degree <= 2n-1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  explicit GaussLegendre(int n);
};

/// Normalized associated Legendre functions P~_{l,m}(x) such that
/// Y_{l,m}(theta,phi) = P~_{l,m}(cos theta) e^{i m phi}, Condon-Shortley
/// phase included. Fills values for all l <= lmax, 0 <= m <= l at a single x,
/// packed as l*(l+1)/2 + m.
void normalized_plm(int lmax, double x, std::vector<double>& out);

inline std::size_t plm_index(int l, int m) {
  return static_cast<std::size_t>(l) * (l + 1) / 2 + static_cast<std::size_t>(m);
}

/// Quadrature grid on the sphere: Gauss-Legendre colatitudes x uniform
/// longitudes. With n_theta >= B+1 and n_phi >= 2B+1 the grid integrates
/// band-B integrands exactly, which is what analysis of a band-B field needs.
class SphereGrid {
 public:
  SphereGrid(int n_theta, int n_phi);

  /// Grid sized (2*band+2) x (4*band+1): exact analysis up to degree 2*band
  /// of the square of a band-limited field of degree <= band.
  static SphereGrid for_band(int band) {
    return SphereGrid(2 * band + 2, 4 * band + 1);
  }

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  /// Largest degree this grid analyzes exactly (for band-limited input).
  int capacity() const;

  double node_x(int i) const { return gl_.nodes[static_cast<std::size_t>(i)]; }
  double weight(int i) const { return gl_.weights[static_cast<std::size_t>(i)]; }
  double phi(int j) const;

  std::size_t n_nodes() const {
    return static_cast<std::size_t>(n_theta_) * static_cast<std::size_t>(n_phi_);
  }

 private:
  int n_theta_;
  int n_phi_;
  GaussLegendre gl_;
};

}  // namespace bispec
