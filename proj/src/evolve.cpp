#include "wplab/evolve.hpp"

#include <Eigen/Eigenvalues>
#include <iostream>

namespace wplab {

namespace {
const cplx I{0.0, 1.0};
}

PropagatorTable::PropagatorTable(const DispersionModel& m, const Grid& g)
    : grid(g), nc(m.ncomp()) {
  const long npts = g.npoints();
  omegas.resize(nc, npts);
  xi.resize(nc, nc * npts);
  const bool analytic = bool(m.eigvec) && bool(m.omega);
  for (long p = 0; p < npts; ++p) {
    const Vecd k = g.k_at(p);
    if (analytic && !is_band_crossing(m, k)) {
      for (int n = 1; n <= m.J; ++n)
        for (int zeta : {+1, -1}) {
          const int c = EigenSystem::col(n, zeta);
          omegas(c, p) = zeta * m.omega(n, k);
          xi.col(p * nc + c) = m.eigvec(n, zeta, k);
        }
    } else {
      MatXc L = m.symbol(k);
      if ((L - L.adjoint()).norm() > 1e-9 * (1.0 + L.norm()))
        throw ConditioningError("propagator: non-Hermitian symbol");
      Eigen::SelfAdjointEigenSolver<MatXc> es(L);
      for (int c = 0; c < nc; ++c) {
        omegas(c, p) = es.eigenvalues()[c];
        xi.col(p * nc + c) = es.eigenvectors().col(c);
      }
    }
  }
}

void PropagatorTable::apply_phase(MatXc& v, double t) const {
  const long npts = grid.npoints();
  VecXc tmp(nc), ph(nc);
  for (long p = 0; p < npts; ++p) {
    const auto X = xi.middleCols(p * nc, nc);
    tmp.noalias() = X.adjoint() * v.col(p);
    for (int c = 0; c < nc; ++c)
      tmp[c] *= std::exp(cplx(0.0, -t * omegas(c, p)));
    v.col(p).noalias() = X * tmp;
  }
}

void PropagatorTable::project(MatXc& v, int n0, int gamma) const {
  const long npts = grid.npoints();
  VecXc tmp(nc);
  for (long p = 0; p < npts; ++p) {
    const auto X = xi.middleCols(p * nc, nc);
    tmp.noalias() = X.adjoint() * v.col(p);
    for (int c = 0; c < nc; ++c) {
      bool keep;
      const double w = omegas(c, p);
      if (nc == 2) {
        // single band: the zeta channel is the eigenvalue sign, regardless of
        // whether the table was filled analytically or by the numeric solver
        const int zeta_of_c = w > 0 ? +1 : (w < 0 ? -1 : (c == 0 ? +1 : -1));
        keep = (gamma != 0) && zeta_of_c == gamma;
      } else {
        const int n_of_c = (c / 2) + 1;  // analytic (n,zeta) ordering
        const int zeta_of_c = (c % 2 == 0) ? +1 : -1;
        keep = gamma == 0 ? n_of_c != n0 : (n_of_c == n0 && zeta_of_c == gamma);
      }
      if (!keep) tmp[c] = 0.0;
    }
    v.col(p).noalias() = X * tmp;
  }
}

ModalField linear_propagate(const ModalField& f, double dtau, double rho,
                            const PropagatorTable& table) {
  if (dtau < 0) throw std::invalid_argument("linear_propagate: negative time");
  ModalField out = f;
  table.apply_phase(out.v, dtau / rho);
  out.tau = f.tau + dtau;
  return out;
}

ModalField reduced_rhs(const EvolutionProblem& p, const PropagatorTable& table,
                       const ModalField& u, double tau) {
  ModalField U = u;
  table.apply_phase(U.v, tau / p.rho);  // back to the lab gauge
  ModalField acc(p.grid, u.ncomp(), tau);
  std::vector<const ModalField*> args;
  for (const auto& chi : p.terms) {
    args.assign(chi.degree, &U);
    acc.v += nonlinear_term(chi, args).v;
  }
  table.apply_phase(acc.v, -tau / p.rho);
  return acc;
}

namespace {

Trajectory run_rk4(const EvolutionProblem& p, const PropagatorTable& table, double dt_want) {
  Trajectory tr;
  const int nsnap = std::max(2, p.snapshots);
  const long per_interval =
      std::max<long>(1, std::lround(std::ceil((p.tau_star / (nsnap - 1)) / dt_want)));
  const long nsteps = per_interval * (nsnap - 1);
  const double dt = p.tau_star / double(nsteps);
  tr.dt = dt;

  ModalField u = p.initial;
  u.tau = 0.0;
  const double init_norm = l1_norm_k(u);
  const double guard = p.blowup_factor * std::max(init_norm, 1e-300);

  auto snapshot = [&](double tau) {
    ModalField U = u;
    table.apply_phase(U.v, tau / p.rho);
    U.tau = tau;
    tr.times.push_back(tau);
    tr.snaps.push_back(std::move(U));
  };
  snapshot(0.0);

  MatXc k1, k2, k3, k4;
  ModalField stage(p.grid, u.ncomp());
  for (long s = 0; s < nsteps; ++s) {
    const double tau = dt * double(s);
    k1 = reduced_rhs(p, table, u, tau).v;
    stage.v = u.v + (dt / 2) * k1;
    k2 = reduced_rhs(p, table, stage, tau + dt / 2).v;
    stage.v = u.v + (dt / 2) * k2;
    k3 = reduced_rhs(p, table, stage, tau + dt / 2).v;
    stage.v = u.v + dt * k3;
    k4 = reduced_rhs(p, table, stage, tau + dt).v;
    u.v += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    ++tr.steps;

    if (l1_norm_k(u) > guard) {
      tr.status = SolveStatus::blowup;
      tr.blowup_time = tau + dt;
      return tr;
    }
    if ((s + 1) % per_interval == 0) snapshot(dt * double(s + 1));
  }
  return tr;
}

}  // namespace

Trajectory solve(const EvolutionProblem& p, const PropagatorTable& table) {
  const double dt = p.dt_override > 0
                        ? p.dt_override
                        : std::min(p.rho / 20.0, p.tau_star / 2000.0);
  const auto rad = convergence_radius(p);
  if (l1_norm_k(p.initial) >= rad.R_G)
    std::cerr << "wplab: initial L1 norm " << l1_norm_k(p.initial)
              << " outside the series radius " << rad.R_G
              << " (integration proceeds)\n";
  return run_rk4(p, table, dt);
}

Trajectory solve(const EvolutionProblem& p) {
  PropagatorTable table(p.model, p.grid);
  return solve(p, table);
}

Trajectory solve_with_error_estimate(const EvolutionProblem& p) {
  PropagatorTable table(p.model, p.grid);
  Trajectory coarse = solve(p, table);
  EvolutionProblem ph = p;
  ph.dt_override = (p.dt_override > 0 ? p.dt_override
                                      : std::min(p.rho / 20.0, p.tau_star / 2000.0)) / 2.0;
  Trajectory fine = run_rk4(ph, table, ph.dt_override);
  double err = 0;
  if (coarse.status == SolveStatus::ok && fine.status == SolveStatus::ok) {
    for (size_t i = 0; i < coarse.snaps.size(); ++i) {
      ModalField diff = coarse.snaps[i];
      diff.v -= fine.snaps[i].v;
      err = std::max(err, l1_norm_k(diff));
    }
  }
  fine.error_estimate = err;
  return fine;
}

Trajectory solve_direct(const EvolutionProblem& p, double dt) {
  PropagatorTable table(p.model, p.grid);
  Trajectory tr;
  const int nsnap = std::max(2, p.snapshots);
  const long per_interval =
      std::max<long>(1, std::lround(std::ceil((p.tau_star / (nsnap - 1)) / dt)));
  const long nsteps = per_interval * (nsnap - 1);
  const double h = p.tau_star / double(nsteps);
  tr.dt = h;

  // -i/rho L(k) U + F(U), with L applied through the eigen table
  auto rhs = [&](const ModalField& U) {
    ModalField out(p.grid, U.ncomp(), U.tau);
    std::vector<const ModalField*> args;
    for (const auto& chi : p.terms) {
      args.assign(chi.degree, &U);
      out.v += nonlinear_term(chi, args).v;
    }
    const long npts = p.grid.npoints();
    const int nc = U.ncomp();
    VecXc tmp(nc);
    for (long pt = 0; pt < npts; ++pt) {
      const auto X = table.xi.middleCols(pt * nc, nc);
      tmp.noalias() = X.adjoint() * U.v.col(pt);
      for (int c = 0; c < nc; ++c) tmp[c] *= -I * table.omegas(c, pt) / p.rho;
      out.v.col(pt).noalias() += X * tmp;
    }
    return out;
  };

  ModalField U = p.initial;
  tr.times.push_back(0.0);
  tr.snaps.push_back(U);
  ModalField stage = U;
  for (long s = 0; s < nsteps; ++s) {
    MatXc k1 = rhs(U).v;
    stage.v = U.v + (h / 2) * k1;
    MatXc k2 = rhs(stage).v;
    stage.v = U.v + (h / 2) * k2;
    MatXc k3 = rhs(stage).v;
    stage.v = U.v + h * k3;
    MatXc k4 = rhs(stage).v;
    U.v += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    ++tr.steps;
    if ((s + 1) % per_interval == 0) {
      U.tau = h * double(s + 1);
      tr.times.push_back(U.tau);
      tr.snaps.push_back(U);
    }
  }
  return tr;
}

ConvergenceRadius convergence_radius(const EvolutionProblem& p) {
  ConvergenceRadius r;
  if (p.terms.empty()) {
    r.R_G = r.C_G = r.R_F = std::numeric_limits<double>::infinity();
    r.tau_star_max = std::numeric_limits<double>::infinity();
    return r;
  }
  const double cxi = p.model.C_Xi;
  double rf = std::numeric_limits<double>::infinity();
  double cchi_max = 0;
  for (const auto& t : p.terms) {
    if (t.degree < 2) throw std::invalid_argument("convergence_radius: degree < 2");
    const double a = p.tau_star * t.C_chi * std::pow(cxi, 2 * t.degree + 1);
    rf = std::min(rf, std::pow(a, -1.0 / (t.degree - 1)));
    cchi_max = std::max(cchi_max, t.C_chi);
  }
  r.R_F = rf;
  r.R_G = rf / 8.0;                      // (R_F^2)/(4(C_F+R_F)) with C_F = R_F
  r.C_G = rf / 4.0;
  r.tau_star_max = 1.0 / (std::pow(cxi, 3) * cchi_max);
  return r;
}

SeriesResult series_solution(const EvolutionProblem& p, int M) {
  if (M < 1) throw std::invalid_argument("series_solution: M >= 1 required");
  const auto rad = convergence_radius(p);
  const double hnorm = l1_norm_k(p.initial);
  if (hnorm >= rad.R_G)
    throw std::invalid_argument("series_solution: initial norm outside the series radius");

  PropagatorTable table(p.model, p.grid);
  TimeGrid tg(p.tau_star, p.rho / 4.0);
  const int Q = tg.nnodes();

  // orders[m] holds G^{(m)}(h^m) sampled on the time grid
  std::vector<TimeSampled> orders(M + 1);
  orders[1].s.assign(Q, p.initial.v);
  orders[1].final = p.initial.v;

  SeriesResult res;
  res.order_norms.assign(M + 1, 0.0);
  ModalField probe(p.grid, p.initial.ncomp());
  probe.v = p.initial.v;
  res.order_norms[1] = l1_norm_k(probe);

  // all ordered compositions of total into `parts` positive entries
  auto compositions = [](int total, int parts) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(parts, 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
      if (pos == parts - 1) {
        cur[pos] = left;
        out.push_back(cur);
        return;
      }
      for (int v = 1; v <= left - (parts - 1 - pos); ++v) {
        cur[pos] = v;
        self(self, pos + 1, left - v);
      }
    };
    if (parts >= 1 && total >= parts) rec(rec, 0, total);
    return out;
  };

  std::vector<MatXc> integrand(Q);
  for (int m = 2; m <= M; ++m) {
    for (auto& f : integrand) f = MatXc::Zero(p.initial.v.rows(), p.initial.v.cols());

    for (const auto& chi : p.terms) {
      const int s = chi.degree;
      if (s > m) continue;
      for (const auto& comp : compositions(m, s)) {
        for (int q = 0; q < Q; ++q) {
          const double t = tg.nodes[q];
          std::vector<ModalField> args(s, ModalField(p.grid, p.initial.ncomp(), t));
          std::vector<const ModalField*> ptrs(s);
          for (int j = 0; j < s; ++j) {
            args[j].v = orders[comp[j]].s[q];
            table.apply_phase(args[j].v, t / p.rho);
            ptrs[j] = &args[j];
          }
          ModalField tmp(p.grid, p.initial.ncomp(), t);
          tmp.v = nonlinear_term(chi, ptrs).v;
          table.apply_phase(tmp.v, -t / p.rho);
          integrand[q] += tmp.v;
        }
      }
    }
    orders[m] = prefix_integrate(tg, integrand);
    probe.v = orders[m].final;
    res.order_norms[m] = l1_norm_k(probe);
  }

  res.value = ModalField(p.grid, p.initial.ncomp(), p.tau_star);
  res.value.v = p.initial.v;
  for (int m = 2; m <= M; ++m)
    if (orders[m].final.size()) res.value.v += orders[m].final;

  const double x = hnorm / rad.R_G;
  res.tail_bound = rad.C_G * std::pow(x, M + 1) / (1.0 - x);
  return res;
}

// ---- builders -------------------------------------------------------------

namespace {

EvolutionProblem assemble(DispersionModel model, const Grid& g,
                          std::vector<ChiTensor> terms, ModalField init, double beta,
                          double rho, double tau_star) {
  if (!(tau_star > 0) || tau_star > 1.0)
    throw std::invalid_argument("tau_star must lie in (0, 1]");
  if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
  EvolutionProblem p;
  p.model = std::move(model);
  p.grid = g;
  p.terms = std::move(terms);
  p.rho = rho;
  p.tau_star = tau_star;
  p.initial = std::move(init);
  p.beta = beta;
  if (beta > 0 && beta * beta / rho > 64.0)
    std::cerr << "wplab: beta^2/rho = " << beta * beta / rho
              << " is large; the dispersion balance assumption fails\n";
  return p;
}

}  // namespace

EvolutionProblem fpu_problem(double alpha2, double alpha3, double beta, double rho,
                             const Grid& g, ModalField init, double tau_star) {
  ModelParams mp;
  mp.alpha2 = alpha2;
  mp.alpha3 = alpha3;
  std::vector<ChiTensor> terms;
  if (alpha2 != 0) terms.push_back(fpu_quadratic_chi(alpha2));
  if (alpha3 != 0) terms.push_back(fpu_cubic_chi(alpha3));
  return assemble(builtin_model("fpu", mp), g, std::move(terms), std::move(init), beta,
                  rho, tau_star);
}

EvolutionProblem klein_gordon_problem(double q, double beta, const Grid& g,
                                      ModalField init, double tau_star) {
  ModelParams mp;
  mp.d = g.d;
  mp.q = q;
  return assemble(builtin_model("klein_gordon", mp), g, {kg_cubic_chi(q, g.d)},
                  std::move(init), beta, beta * beta, tau_star);
}

EvolutionProblem sine_gordon_problem(double beta, int sin_order, const Grid& g,
                                     ModalField init, double tau_star) {
  ModelParams mp;
  mp.d = g.d;
  mp.sin_order = sin_order;
  return assemble(builtin_model("sine_gordon", mp), g,
                  sine_gordon_chis(beta, sin_order, g.d), std::move(init), beta,
                  beta * beta, tau_star);
}

EvolutionProblem nls_problem(const Eigen::MatrixXd& gamma, cplx alpha, double beta,
                             const Grid& g, ModalField init, double tau_star) {
  ModelParams mp;
  mp.d = g.d;
  mp.gamma = gamma;
  mp.alpha = alpha;
  return assemble(builtin_model("nls", mp), g, {nls_cubic_chi(alpha, g.d)},
                  std::move(init), beta, beta * beta, tau_star);
}

EvolutionProblem semilinear_wave_problem(cplx alpha, double beta, const Grid& g,
                                         ModalField init, double tau_star) {
  ModelParams mp;
  mp.d = g.d;
  mp.alpha = alpha;
  return assemble(builtin_model("semilinear_wave", mp), g, {wave_cubic_chi(alpha, g.d)},
                  std::move(init), beta, beta * beta, tau_star);
}

EvolutionProblem toy_transport_problem(double rho, const Grid& g, ModalField init,
                                       double tau_star) {
  DispersionModel m;
  m.name = "toy_transport";
  m.d = g.d;
  m.J = 1;
  m.domain = g.domain;
  m.active_degrees = {2};
  m.m_F = 2;
  m.symbol = [](const Vecd& k) {
    MatXc L = MatXc::Zero(2, 2);
    L(0, 0) = k[0];
    L(1, 1) = -k[0];
    return L;
  };
  return assemble(std::move(m), g, {toy_quadratic_chi(g.d)}, std::move(init), 0.0, rho,
                  tau_star);
}

}  // namespace wplab
