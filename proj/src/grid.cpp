#include "wplab/grid.hpp"

namespace wplab {

Grid::Grid(int d_, Domain dom, std::vector<int> n_, double K)
    : d(d_), domain(dom), n(std::move(n_)), box_K(dom == Domain::torus ? pi : K) {
  if (d < 1 || d > 4) throw std::invalid_argument("grid: d must be in 1..4");
  if ((int)n.size() == 1 && d > 1) n.assign(d, n[0]);
  if ((int)n.size() != d) throw std::invalid_argument("grid: size list vs d mismatch");
  for (int s : n) {
    if (s < 8 || (s & (s - 1)) != 0)
      throw std::invalid_argument("grid: sizes must be powers of two >= 8");
  }
  if (domain == Domain::euclidean && !(box_K > 0))
    throw std::invalid_argument("grid: box half-width must be positive");
}

long Grid::index_of_k(const Vecd& k) const {
  int idx[4];
  for (int i = 0; i < d; ++i) {
    double kk = k[i];
    if (domain == Domain::torus) kk = wrap_to_pi(kk);
    long j = std::lround(kk / dk(i));
    long half = n[i] / 2;
    if (j > half - 1 + (domain == Domain::torus ? 1 : 0)) j -= n[i];
    if (j < -half) j += n[i];
    idx[i] = int((j % n[i] + n[i]) % n[i]);
  }
  return flatten(idx);
}

}  // namespace wplab
