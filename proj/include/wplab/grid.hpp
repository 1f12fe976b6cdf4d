#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace wplab {

using cplx = std::complex<double>;
using Vecd = Eigen::VectorXd;
using Veci = Eigen::VectorXi;

constexpr double pi = 3.14159265358979323846;

enum class Domain { torus, euclidean };

// Wraps a 1-d wavevector into (-pi, pi].
inline double wrap_to_pi(double k) {
  double w = std::remainder(k, 2.0 * pi);
  if (w <= -pi) w += 2.0 * pi;
  return w;
}

/// Uniform k-grid on [-pi,pi]^d (torus) or on the reciprocal lattice of a
/// periodized box [-K,K]^d (euclidean models). Storage order is FFT-natural:
/// flat index j along each dimension maps to the signed index
/// wrap(j) = j < n/2 ? j : j - n, so k = wrap(j)*dk and r = wrap(j)*dr.
struct Grid {
  int d = 1;
  Domain domain = Domain::torus;
  std::vector<int> n;   // points per dimension, powers of two
  double box_K = pi;    // half-width of the spatial box; pi marks the torus

  Grid() = default;
  Grid(int d_, Domain dom, std::vector<int> n_, double K = pi);

  long npoints() const {
    long p = 1;
    for (int s : n) p *= s;
    return p;
  }
  double dk(int dim = 0) const {
    return domain == Domain::torus ? 2.0 * pi / n[dim] : pi / box_K;
  }
  double dr(int dim = 0) const {
    return domain == Domain::torus ? 1.0 : 2.0 * box_K / n[dim];
  }
  double cell_k() const {  // dk^d
    double c = 1;
    for (int i = 0; i < d; ++i) c *= dk(i);
    return c;
  }
  double kmax(int dim = 0) const { return dk(dim) * (n[dim] / 2); }

  static int wrap_index(int j, int nn) { return j < nn / 2 ? j : j - nn; }

  // flat index -> per-dimension integer indices (row-major, dim 0 slowest)
  void unflatten(long flat, int* idx) const {
    for (int i = d - 1; i >= 0; --i) {
      idx[i] = int(flat % n[i]);
      flat /= n[i];
    }
  }
  long flatten(const int* idx) const {
    long f = 0;
    for (int i = 0; i < d; ++i) f = f * n[i] + (((idx[i] % n[i]) + n[i]) % n[i]);
    return f;
  }

  Vecd k_at(long flat) const {
    int idx[4];
    unflatten(flat, idx);
    Vecd k(d);
    for (int i = 0; i < d; ++i) k[i] = dk(i) * wrap_index(idx[i], n[i]);
    return k;
  }
  Vecd r_at(long flat) const {
    int idx[4];
    unflatten(flat, idx);
    Vecd r(d);
    for (int i = 0; i < d; ++i) r[i] = dr(i) * wrap_index(idx[i], n[i]);
    return r;
  }

  /// Flat index of the grid point nearest to wavevector k (wrapped).
  long index_of_k(const Vecd& k) const;

  bool same_as(const Grid& o) const {
    return d == o.d && domain == o.domain && n == o.n &&
           std::abs(box_K - o.box_K) < 1e-12;
  }
};

}  // namespace wplab
