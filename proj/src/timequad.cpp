#include "wplab/timequad.hpp"

namespace wplab {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[n - 1 - i] = t;
    w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

TimeGrid::TimeGrid(double T, double max_panel, int ord) : order(ord) {
  int np = std::max(1, int(std::ceil(T / max_panel)));
  // keep desk-scale experiments bounded
  if (np > 200000) throw std::invalid_argument("time grid: too many quadrature panels");
  edges.resize(np + 1);
  for (int p = 0; p <= np; ++p) edges[p] = T * double(p) / np;

  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  ref_nodes.resize(order);
  ref_weights.resize(order);
  for (int j = 0; j < order; ++j) {
    ref_nodes[j] = 0.5 * (gx[j] + 1.0);
    ref_weights[j] = 0.5 * gw[j];
  }

  nodes.reserve(size_t(np) * order);
  wfull.reserve(size_t(np) * order);
  for (int p = 0; p < np; ++p) {
    const double a = edges[p], h = edges[p + 1] - edges[p];
    for (int j = 0; j < order; ++j) {
      nodes.push_back(a + h * ref_nodes[j]);
      wfull.push_back(h * ref_weights[j]);
    }
  }

  // integrals of the Lagrange basis from 0 to each node on [0,1], via a fine
  // GL rule on each subinterval (exact for the degree order-1 interpolant)
  std::vector<double> fx, fw;
  gauss_legendre(order + 2, fx, fw);
  partial_ref.assign(size_t(order) * order, 0.0);
  auto lagrange = [&](int j, double t) {
    double v = 1.0;
    for (int l = 0; l < order; ++l)
      if (l != j) v *= (t - ref_nodes[l]) / (ref_nodes[j] - ref_nodes[l]);
    return v;
  };
  for (int i = 0; i < order; ++i) {
    const double b = ref_nodes[i];
    for (int j = 0; j < order; ++j) {
      double acc = 0;
      for (size_t q = 0; q < fx.size(); ++q) {
        const double t = 0.5 * b * (fx[q] + 1.0);
        acc += 0.5 * b * fw[q] * lagrange(j, t);
      }
      partial_ref[size_t(i) * order + j] = acc;
    }
  }
}

TimeSampled prefix_integrate(const TimeGrid& tg, const std::vector<MatXc>& f) {
  TimeSampled out;
  const int q = tg.order;
  const int np = tg.npanels();
  out.s.resize(f.size());
  MatXc acc = MatXc::Zero(f[0].rows(), f[0].cols());
  for (int p = 0; p < np; ++p) {
    const double h = tg.edges[p + 1] - tg.edges[p];
    for (int i = 0; i < q; ++i) {
      MatXc part = acc;
      for (int j = 0; j < q; ++j)
        part += (h * tg.partial_ref[size_t(i) * q + j]) * f[size_t(p) * q + j];
      out.s[size_t(p) * q + i] = std::move(part);
    }
    for (int j = 0; j < q; ++j) acc += tg.wfull[size_t(p) * q + j] * f[size_t(p) * q + j];
  }
  out.final = std::move(acc);
  return out;
}

}  // namespace wplab
