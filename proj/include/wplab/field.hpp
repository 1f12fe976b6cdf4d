#pragma once

#include <Eigen/Dense>

#include "wplab/grid.hpp"

namespace wplab {

using MatXc = Eigen::MatrixXcd;
using VecXc = Eigen::VectorXcd;

/// k-space field: one C^{2J} vector per grid point (columns), time stamp tau.
struct ModalField {
  Grid grid;
  MatXc v;  // ncomp x npoints
  double tau = 0.0;

  ModalField() = default;
  ModalField(const Grid& g, int ncomp, double t = 0.0)
      : grid(g), v(MatXc::Zero(ncomp, g.npoints())), tau(t) {}
  int ncomp() const { return int(v.rows()); }
};

/// r-space counterpart on the dual grid.
struct SpatialField {
  Grid grid;
  MatXc v;
  double tau = 0.0;

  SpatialField() = default;
  SpatialField(const Grid& g, int ncomp, double t = 0.0)
      : grid(g), v(MatXc::Zero(ncomp, g.npoints())), tau(t) {}
  int ncomp() const { return int(v.rows()); }
};

// Unnormalized multi-dimensional DFT along all grid dimensions.
// forward: sum e^{-i...}; backward: (1/Ntot) sum e^{+i...}.
void dft_grid(const Grid& g, MatXc& rows, bool forward);

ModalField forward_transform(const SpatialField& s);
SpatialField inverse_transform(const ModalField& m);

double l1_norm_k(const ModalField& f);
double l2_norm_k(const ModalField& f);
double linf_norm_r(const SpatialField& f);
double linf_norm_k(const ModalField& f);

/// sup over snapshots of the L1(k) norm (the E-norm of a trajectory).
double e_norm(const std::vector<ModalField>& snapshots);

}  // namespace wplab
