#include "wplab/dispersion.hpp"

#include <Eigen/Eigenvalues>

namespace wplab {

namespace {

const cplx I{0.0, 1.0};

Vecd wrap_vec(const DispersionModel& m, Vecd k) {
  if (m.domain == Domain::torus)
    for (int i = 0; i < k.size(); ++i) k[i] = wrap_to_pi(k[i]);
  return k;
}

MatXc antisym_symbol(double w) {
  MatXc L(2, 2);
  L << 0.0, -I * w, I * w, 0.0;
  return L;
}

double numeric_band_omega(const DispersionModel& m, int n, const Vecd& k) {
  MatXc L = m.symbol(k);
  if ((L - L.adjoint()).norm() > 1e-9 * (1.0 + L.norm()))
    throw ConditioningError("symbol is not Hermitian at requested k");
  Eigen::SelfAdjointEigenSolver<MatXc> es(L, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[m.J + n - 1];
}

}  // namespace

double band_omega(const DispersionModel& m, int n, const Vecd& k) {
  Vecd kw = wrap_vec(m, k);
  if (m.omega) return m.omega(n, kw);
  return numeric_band_omega(m, n, kw);
}

bool is_band_crossing(const DispersionModel& m, const Vecd& k, double tol) {
  Vecd kw = wrap_vec(m, k);
  double w1 = band_omega(m, 1, kw);
  if (w1 <= tol) return true;
  for (int n = 1; n < m.J; ++n)
    if (band_omega(m, n + 1, kw) - band_omega(m, n, kw) <= tol) return true;
  return false;
}

bool is_band_crossing(const DispersionModel& m, const Vecd& k) {
  return is_band_crossing(m, k, m.crossing_tolerance);
}

EigenSystem eigen_decompose(const DispersionModel& m, const Vecd& k) {
  Vecd kw = wrap_vec(m, k);
  if (is_band_crossing(m, kw))
    throw DegeneratePointError("eigen_decompose at a band-crossing point");
  EigenSystem sys;
  const int nc = m.ncomp();
  sys.omegas = Vecd(nc);
  sys.Xi = MatXc(nc, nc);
  if (m.eigvec && m.omega) {
    for (int n = 1; n <= m.J; ++n)
      for (int zeta : {+1, -1}) {
        const int c = EigenSystem::col(n, zeta);
        sys.omegas[c] = zeta * m.omega(n, kw);
        sys.Xi.col(c) = m.eigvec(n, zeta, kw);
      }
    return sys;
  }
  MatXc L = m.symbol(kw);
  if ((L - L.adjoint()).norm() > 1e-9 * (1.0 + L.norm()))
    throw ConditioningError("symbol is not Hermitian at requested k");
  Eigen::SelfAdjointEigenSolver<MatXc> es(L);
  // ascending eigenvalues: -w_J..-w_1, w_1..w_J
  for (int n = 1; n <= m.J; ++n) {
    sys.omegas[EigenSystem::col(n, +1)] = es.eigenvalues()[m.J + n - 1];
    sys.omegas[EigenSystem::col(n, -1)] = es.eigenvalues()[m.J - n];
    sys.Xi.col(EigenSystem::col(n, +1)) = es.eigenvectors().col(m.J + n - 1);
    sys.Xi.col(EigenSystem::col(n, -1)) = es.eigenvectors().col(m.J - n);
  }
  return sys;
}

Vecd group_velocity(const DispersionModel& m, int n, int zeta, const Vecd& k) {
  Vecd kw = wrap_vec(m, k);
  if (is_band_crossing(m, kw))
    throw DegeneratePointError("group velocity at a band-crossing point");
  if (m.grad_omega) return zeta * m.grad_omega(n, kw).eval();
  // central differences with one Richardson sweep; omega is smooth off sigma
  const double h = 1e-4;
  Vecd g(m.d);
  for (int i = 0; i < m.d; ++i) {
    Vecd e = Vecd::Zero(m.d);
    e[i] = 1.0;
    auto diff = [&](double hh) {
      return (band_omega(m, n, kw + hh * e) - band_omega(m, n, kw - hh * e)) /
             (2.0 * hh);
    };
    g[i] = (4.0 * diff(h / 2) - diff(h)) / 3.0;
  }
  return zeta * g;
}

NondegeneracyReport check_nondegeneracy(const DispersionModel& m, const Vecd& kstar,
                                        int n_l, int m_F_cap, double tol_nd) {
  if (is_band_crossing(m, kstar))
    throw DegeneratePointError("nondegeneracy check at a band-crossing point");
  NondegeneracyReport rep;
  const int cap = m_F_cap > 0 ? std::min(m_F_cap, 9) : m.theta_cap();
  std::vector<int> thetas;
  for (int deg : m.active_degrees) {
    if (deg > cap) continue;
    for (int t = -deg; t <= deg; t += 2)
      if (std::find(thetas.begin(), thetas.end(), t) == thetas.end())
        thetas.push_back(t);
  }
  const double w_l = band_omega(m, n_l, kstar);
  rep.margin = std::numeric_limits<double>::infinity();
  for (int theta : thetas) {
    Vecd kt = wrap_vec(m, (theta * kstar).eval());
    const bool on_sigma = is_band_crossing(m, kt);
    for (int zeta : {+1, -1}) {
      for (int n = 1; n <= m.J; ++n) {
        if (n == n_l && theta == zeta) continue;  // the trivial solution
        if (on_sigma) {
          rep.sigma_hit = true;
          rep.violations.push_back({n, theta, zeta, 0.0});
          continue;
        }
        const double v = theta * w_l - zeta * band_omega(m, n, kt);
        rep.margin = std::min(rep.margin, std::abs(v));
        if (std::abs(v) <= tol_nd) rep.violations.push_back({n, theta, zeta, v});
      }
    }
  }
  rep.pass = rep.violations.empty() && !rep.sigma_hit;
  return rep;
}

GvSeparation check_group_velocity_separation(const DispersionModel& m,
                                             const std::vector<WaveCenter>& centers,
                                             double tol_gv) {
  GvSeparation sep;
  if (centers.size() < 2) return sep;  // p0 = +inf, pass
  std::vector<Vecd> v;
  v.reserve(centers.size());
  for (const auto& c : centers) v.push_back(group_velocity(m, c.band, c.zeta, c.kstar));
  for (size_t a = 0; a < centers.size(); ++a)
    for (size_t b = a + 1; b < centers.size(); ++b) {
      const double dist = (v[a] - v[b]).norm();
      if (dist < sep.p0) {
        sep.p0 = dist;
        sep.worst_a = int(a);
        sep.worst_b = int(b);
      }
    }
  sep.pass = sep.p0 > tol_gv;
  return sep;
}

CompleteDegeneracyReport check_complete_degeneracy(const DispersionModel& m,
                                                   const std::vector<WaveCenter>& centers,
                                                   int nu_max, double tol_cd) {
  CompleteDegeneracyReport rep;
  rep.odd_only = m.odd_only;
  const double sigma_delta = std::max(tol_cd, 10.0 * m.crossing_tolerance);

  for (size_t a = 0; a < centers.size(); ++a)
    for (size_t b = 0; b < centers.size(); ++b) {
      if (a == b) continue;
      for (int nu1 = 1; nu1 <= nu_max; nu1 += 2)
        for (int nu2 = 1; nu2 <= nu_max; nu2 += 2) {
          Vecd ka = wrap_vec(m, (nu1 * centers[a].kstar).eval());
          Vecd kb = wrap_vec(m, (nu2 * centers[b].kstar).eval());
          if (is_band_crossing(m, ka) || is_band_crossing(m, kb)) continue;
          const double dist = (group_velocity(m, centers[a].band, +1, ka) -
                               group_velocity(m, centers[b].band, +1, kb))
                                  .norm();
          rep.pairwise_margin = std::min(rep.pairwise_margin, dist);
          if (dist <= tol_cd) rep.pairwise_pass = false;
        }
    }

  for (const auto& c : centers) {
    bool sig_ok = true;
    for (int nu = 1; nu <= nu_max; nu += 2) {
      Vecd kt = wrap_vec(m, (nu * c.kstar).eval());
      double dist = m.dist_to_sigma ? m.dist_to_sigma(kt)
                                    : (is_band_crossing(m, kt, sigma_delta) ? 0.0 : 1.0);
      if (dist <= sigma_delta) sig_ok = false;
    }
    rep.sigma_pass.push_back(sig_ok);

    bool scal_ok = true;
    for (int theta = 3; theta <= nu_max; theta += 2) {
      Vecd kt = wrap_vec(m, (theta * c.kstar).eval());
      if (is_band_crossing(m, kt)) {
        scal_ok = false;
        continue;
      }
      for (int n = 1; n <= m.J; ++n) {
        if (std::abs(band_omega(m, n, kt) - theta * band_omega(m, n, c.kstar)) > tol_cd)
          scal_ok = false;
        if ((group_velocity(m, n, +1, kt) - group_velocity(m, n, +1, c.kstar)).norm() >
            tol_cd)
          scal_ok = false;
      }
    }
    rep.scaling_pass.push_back(scal_ok);
  }

  rep.pass = rep.odd_only && rep.pairwise_pass;
  for (bool b : rep.sigma_pass) rep.pass = rep.pass && b;
  for (bool b : rep.scaling_pass) rep.pass = rep.pass && b;
  return rep;
}

GenericityReport check_genericity(const DispersionModel& m,
                                  const std::vector<WaveCenter>& centers, double tol) {
  GenericityReport rep;
  rep.centers = centers;
  for (const auto& c : centers) {
    if (is_band_crossing(m, c.kstar))
      throw DegeneratePointError("wavepacket center on the band-crossing set");
    rep.omega_at_center.push_back(band_omega(m, c.band, c.kstar));
  }
  auto sep = check_group_velocity_separation(m, centers, tol);
  rep.p0 = std::isfinite(sep.p0) ? sep.p0 : std::numeric_limits<double>::infinity();

  bool nonzero = true;
  for (double w : rep.omega_at_center) nonzero = nonzero && std::abs(w) > tol;

  bool all_nd = true;
  for (const auto& c : centers) {
    rep.nondegeneracy.push_back(check_nondegeneracy(m, c.kstar, c.band, 0, tol));
    all_nd = all_nd && rep.nondegeneracy.back().pass;
  }
  rep.complete_degeneracy = check_complete_degeneracy(m, centers, 9, tol);

  if (nonzero && sep.pass && all_nd)
    rep.applicable = ApplicableTheorem::generic1;
  else if (nonzero && sep.pass && rep.complete_degeneracy.pass)
    rep.applicable = ApplicableTheorem::generic2;
  else
    rep.applicable = ApplicableTheorem::none;
  return rep;
}

const char* theorem_name(ApplicableTheorem t) {
  switch (t) {
    case ApplicableTheorem::generic1: return "generic1";
    case ApplicableTheorem::generic2: return "generic2";
    default: return "none";
  }
}

DispersionModel builtin_model(const std::string& name, const ModelParams& p) {
  DispersionModel m;
  m.name = name;
  m.d = p.d;

  if (name == "fpu") {
    m.d = 1;
    m.domain = Domain::torus;
    if (p.alpha2 != 0.0) m.active_degrees.push_back(2);
    if (p.alpha3 != 0.0) m.active_degrees.push_back(3);
    if (m.active_degrees.empty()) m.active_degrees = {3};
    m.m_F = m.active_degrees.back();
    m.odd_only = (p.alpha2 == 0.0);
    m.symbol = [](const Vecd& k) {
      const cplx a = std::exp(I * k[0]) - 1.0;   // e^{ik}-1
      const cplx b = 1.0 - std::exp(-I * k[0]);  // (e^{ik}-1)^* negated
      MatXc L(2, 2);
      L << 0.0, -I * a, -I * b, 0.0;
      return L;
    };
    m.omega = [](int, const Vecd& k) { return 2.0 * std::abs(std::sin(k[0] / 2)); };
    m.grad_omega = [](int, const Vecd& k) {
      Vecd g(1);
      const double s = std::sin(k[0] / 2);
      g[0] = (s >= 0 ? 1.0 : -1.0) * std::cos(k[0] / 2);
      return g;
    };
    m.eigvec = [](int, int zeta, const Vecd& k) {
      const cplx a = std::exp(I * k[0]) - 1.0;
      VecXc g(2);
      g << I * double(zeta), -std::conj(a) / std::abs(a);
      return (g / std::sqrt(2.0)).eval();
    };
    m.dist_to_sigma = [](const Vecd& k) { return std::abs(wrap_to_pi(k[0])); };
    return m;
  }

  if (name == "klein_gordon" || name == "sine_gordon") {
    m.domain = Domain::euclidean;
    m.odd_only = true;
    if (name == "klein_gordon") {
      m.active_degrees = {3};
      m.m_F = 3;
    } else {
      if (p.sin_order < 3 || p.sin_order % 2 == 0)
        throw std::invalid_argument("sine_gordon: sin truncation order must be odd >= 3");
      for (int deg = 3; deg <= p.sin_order; deg += 2) m.active_degrees.push_back(deg);
      m.m_F = -1;  // entire nonlinearity, truncated for simulation
    }
    m.omega = [](int, const Vecd& k) { return std::sqrt(1.0 + k.squaredNorm()); };
    m.grad_omega = [](int, const Vecd& k) {
      return (k / std::sqrt(1.0 + k.squaredNorm())).eval();
    };
    m.eigvec = [](int, int zeta, const Vecd&) {
      VecXc g(2);
      g << -I * double(zeta), 1.0;
      return (g / std::sqrt(2.0)).eval();
    };
    m.symbol = [om = m.omega](const Vecd& k) { return antisym_symbol(om(1, k)); };
    m.dist_to_sigma = [](const Vecd&) { return std::numeric_limits<double>::infinity(); };
    return m;
  }

  if (name == "nls") {
    m.domain = Domain::euclidean;
    m.active_degrees = {3};
    m.m_F = 3;
    m.odd_only = true;
    Eigen::MatrixXd G = p.gamma.size() ? p.gamma : Eigen::MatrixXd::Identity(m.d, m.d);
    if (G.rows() != m.d || G.cols() != m.d)
      throw std::invalid_argument("nls: gamma must be d x d");
    G = ((G + G.transpose()) / 2).eval();
    if (G.norm() == 0.0)
      throw std::invalid_argument("nls: identically zero gamma rejected");
    auto gam = [G](const Vecd& k) { return k.dot(G * k); };
    m.symbol = [gam](const Vecd& k) {
      MatXc L = MatXc::Zero(2, 2);
      L(0, 0) = gam(k);
      L(1, 1) = -gam((-k).eval());
      return L;
    };
    m.omega = [gam](int, const Vecd& k) { return std::abs(gam(k)); };
    m.grad_omega = [gam, G](int, const Vecd& k) {
      const double s = gam(k) >= 0 ? 1.0 : -1.0;
      return (s * 2.0 * (G * k)).eval();
    };
    m.eigvec = [gam](int, int zeta, const Vecd& k) {
      VecXc g = VecXc::Zero(2);
      const bool plus_first = gam(k) >= 0;
      g[(zeta > 0) == plus_first ? 0 : 1] = 1.0;
      return g;
    };
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(G);
    const bool definite = gs.eigenvalues().minCoeff() > 0 || gs.eigenvalues().maxCoeff() < 0;
    m.dist_to_sigma = [gam, G, definite](const Vecd& k) {
      if (definite) return k.norm();
      const double denom = 2.0 * (G * k).norm();
      return denom > 0 ? std::abs(gam(k)) / denom : 0.0;
    };
    return m;
  }

  if (name == "semilinear_wave") {
    m.domain = Domain::euclidean;
    m.active_degrees = {3};
    m.m_F = 3;
    m.odd_only = true;
    m.omega = [](int, const Vecd& k) { return k.norm(); };
    m.grad_omega = [](int, const Vecd& k) {
      const double r = k.norm();
      return r > 0 ? (k / r).eval() : Vecd::Zero(k.size()).eval();
    };
    m.eigvec = [](int, int zeta, const Vecd&) {
      VecXc g(2);
      g << -I * double(zeta), 1.0;
      return (g / std::sqrt(2.0)).eval();
    };
    m.symbol = [](const Vecd& k) { return antisym_symbol(k.norm()); };
    m.dist_to_sigma = [](const Vecd& k) { return k.norm(); };
    return m;
  }

  throw std::invalid_argument("unknown model name: " + name);
}

}  // namespace wplab
