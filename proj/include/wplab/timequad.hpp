#pragma once

#include <vector>

#include "wplab/field.hpp"

namespace wplab {

/// Composite Gauss-Legendre grid on [0, T]: panels narrow enough to resolve
/// the e^{i phi tau / rho} oscillations of the decorated operators. Provides
/// prefix integrals of node-sampled integrands at every node and at T.
struct TimeGrid {
  int order = 6;
  std::vector<double> edges;  // panel boundaries, edges.front()=0, back()=T
  std::vector<double> nodes;  // all quadrature nodes, panel-major
  std::vector<double> wfull;  // full-panel weights per node
  // partial[i*order+j] = integral of Lagrange basis j from panel start to node i
  std::vector<double> partial_ref;  // on the reference panel [0,1]
  std::vector<double> ref_nodes;    // GL nodes on [0,1]
  std::vector<double> ref_weights;  // GL weights on [0,1]

  TimeGrid() = default;
  TimeGrid(double T, double max_panel, int order = 6);

  int npanels() const { return int(edges.size()) - 1; }
  int nnodes() const { return int(nodes.size()); }
};

/// Node-sampled time-dependent field stack.
struct TimeSampled {
  std::vector<MatXc> s;  // one ncomp x npts matrix per node
  MatXc final;           // value at T (for prefix integrals)
};

/// Prefix-integrate samples: out.s[q] = integral_0^{t_q} f, out.final = integral_0^T f.
TimeSampled prefix_integrate(const TimeGrid& tg, const std::vector<MatXc>& f);

}  // namespace wplab
