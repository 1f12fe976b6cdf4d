#include "wplab/field.hpp"

#include <unsupported/Eigen/FFT>

namespace wplab {

namespace {

// 1-d DFT of every length-n contiguous run along the fastest-varying block of
// size `stride`, for all components at once. The flattened point index is
// row-major with dimension 0 slowest, so dimension `dim` has runs of length
// n[dim] with stride = product of sizes after it.
void dft_dim(MatXc& rows, int npts, int n, long stride, bool forward) {
  Eigen::FFT<double> fft;
  VecXc in(n), out(n);
  const long nblocks = npts / (long(n) * stride);
  for (int c = 0; c < rows.rows(); ++c) {
    for (long b = 0; b < nblocks; ++b) {
      for (long s = 0; s < stride; ++s) {
        const long base = b * n * stride + s;
        for (int j = 0; j < n; ++j) in[j] = rows(c, base + j * stride);
        if (forward)
          fft.fwd(out, in);
        else
          fft.inv(out, in);  // includes 1/n
        for (int j = 0; j < n; ++j) rows(c, base + j * stride) = out[j];
      }
    }
  }
}

}  // namespace

void dft_grid(const Grid& g, MatXc& rows, bool forward) {
  long stride = 1;
  for (int dim = g.d - 1; dim >= 0; --dim) {
    dft_dim(rows, g.npoints(), g.n[dim], stride, forward);
    stride *= g.n[dim];
  }
}

ModalField forward_transform(const SpatialField& s) {
  ModalField m(s.grid, s.ncomp(), s.tau);
  m.v = s.v;
  dft_grid(s.grid, m.v, true);
  double scale = 1.0;
  for (int i = 0; i < s.grid.d; ++i) scale *= s.grid.dr(i);
  m.v *= scale;
  return m;
}

SpatialField inverse_transform(const ModalField& m) {
  SpatialField s(m.grid, m.ncomp(), m.tau);
  s.v = m.v;
  dft_grid(m.grid, s.v, false);
  double scale = 1.0;
  for (int i = 0; i < m.grid.d; ++i) scale /= m.grid.dr(i);
  s.v *= scale;
  return s;
}

double l1_norm_k(const ModalField& f) {
  double acc = 0;
  for (long p = 0; p < f.grid.npoints(); ++p) acc += f.v.col(p).norm();
  return acc * f.grid.cell_k();
}

double l2_norm_k(const ModalField& f) {
  return f.v.norm() * std::sqrt(f.grid.cell_k());
}

double linf_norm_r(const SpatialField& f) {
  double m = 0;
  for (long p = 0; p < f.grid.npoints(); ++p) m = std::max(m, f.v.col(p).norm());
  return m;
}

double linf_norm_k(const ModalField& f) {
  double m = 0;
  for (long p = 0; p < f.grid.npoints(); ++p) m = std::max(m, f.v.col(p).norm());
  return m;
}

double e_norm(const std::vector<ModalField>& snapshots) {
  double m = 0;
  for (const auto& f : snapshots) m = std::max(m, l1_norm_k(f));
  return m;
}

}  // namespace wplab
