#pragma once

#include "wplab/chi.hpp"
#include "wplab/dispersion.hpp"
#include "wplab/timequad.hpp"

namespace wplab {

/// Per-grid-point eigendecomposition of the symbol, used to apply
/// exp(-i t L(k)) exactly. Falls back to a numeric Hermitian solve at
/// band-crossing points.
struct PropagatorTable {
  Grid grid;
  int nc = 2;
  Eigen::MatrixXd omegas;  // nc x npts signed eigenvalues
  MatXc xi;                // nc x (nc*npts), unitary blocks
  PropagatorTable() = default;
  PropagatorTable(const DispersionModel& m, const Grid& g);

  /// v(k) <- Xi diag(e^{-i t w}) Xi^dagger v(k) for every point.
  void apply_phase(MatXc& v, double t) const;
  /// v(k) <- (g_{n,zeta} g^dagger) v(k); the infinity channel keeps n != n0.
  void project(MatXc& v, int n0, int gamma) const;
};

struct EvolutionProblem {
  DispersionModel model;
  Grid grid;
  std::vector<ChiTensor> terms;
  double rho = 1.0;
  double tau_star = 1.0;
  ModalField initial;
  double dt_override = 0.0;
  int snapshots = 33;
  double blowup_factor = 1e6;
  double beta = 0.0;  // recorded when wavepacket data is attached

  double C_chi() const {
    double c = 0;
    for (const auto& t : terms) c = std::max(c, t.C_chi);
    return c;
  }
  int max_degree() const {
    int m = 2;
    for (const auto& t : terms) m = std::max(m, t.degree);
    return m;
  }
};

enum class SolveStatus { ok, blowup };

struct Trajectory {
  std::vector<double> times;
  std::vector<ModalField> snaps;
  SolveStatus status = SolveStatus::ok;
  double blowup_time = 0.0;
  long steps = 0;
  double dt = 0.0;
  double error_estimate = -1.0;  // filled by solve_with_error_estimate
};

ModalField linear_propagate(const ModalField& f, double dtau, double rho,
                            const PropagatorTable& table);

/// Full nonlinearity in the interaction picture at slow time tau.
ModalField reduced_rhs(const EvolutionProblem& p, const PropagatorTable& table,
                       const ModalField& u, double tau);

Trajectory solve(const EvolutionProblem& p);
Trajectory solve(const EvolutionProblem& p, const PropagatorTable& table);
Trajectory solve_with_error_estimate(const EvolutionProblem& p);

/// Direct stiff RK4 on the unreduced modal equation (validation path).
Trajectory solve_direct(const EvolutionProblem& p, double dt);

struct ConvergenceRadius {
  double R_G = 0.0;       // radius from the oscillatory-operator bounds
  double C_G = 0.0;       // generic-map constant, C_F = R_F convention
  double tau_star_max = 0.0;
  double R_F = 0.0;
};

ConvergenceRadius convergence_radius(const EvolutionProblem& p);

struct SeriesResult {
  ModalField value;                  // sum of orders m <= M at tau_star
  double tail_bound = 0.0;           // geometric tail from the radius bounds
  std::vector<double> order_norms;   // L1 of each homogeneous contribution
};

/// Truncated solution-operator series via the recursion on multilinear
/// orders, time integrals by composite Gauss-Legendre panels of width rho/4.
SeriesResult series_solution(const EvolutionProblem& p, int M);

// ---- catalog problem builders ------------------------------------------

EvolutionProblem fpu_problem(double alpha2, double alpha3, double beta, double rho,
                             const Grid& g, ModalField init, double tau_star);
EvolutionProblem klein_gordon_problem(double q, double beta, const Grid& g,
                                      ModalField init, double tau_star);
EvolutionProblem sine_gordon_problem(double beta, int sin_order, const Grid& g,
                                     ModalField init, double tau_star);
EvolutionProblem nls_problem(const Eigen::MatrixXd& gamma, cplx alpha, double beta,
                             const Grid& g, ModalField init, double tau_star);
EvolutionProblem semilinear_wave_problem(cplx alpha, double beta, const Grid& g,
                                         ModalField init, double tau_star);
/// Scalar transport y' = -(1/rho) dx y + y^2 embedded as a diag(k,-k) system.
EvolutionProblem toy_transport_problem(double rho, const Grid& g, ModalField init,
                                       double tau_star);

}  // namespace wplab
