#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wplab/field.hpp"
#include "wplab/grid.hpp"

namespace wplab {

struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegeneratePointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Linear symbol L(k) with its band structure. Catalog models carry closed
/// forms for omega_n, grad omega_n and the eigenvectors; custom models fall
/// back to per-point Hermitian eigendecomposition of `symbol`.
struct DispersionModel {
  std::string name;
  int d = 1;
  int J = 1;  // bands per sign; the symbol is 2J x 2J
  Domain domain = Domain::torus;
  int m_F = 3;                      // -1 means entire (truncated series)
  std::vector<int> active_degrees;  // degrees with a nonzero F^(m)
  bool odd_only = false;
  double crossing_tolerance = 1e-9;
  double C_Xi = 1.0;

  std::function<MatXc(const Vecd&)> symbol;
  // optional closed forms (band index n is 1-based)
  std::function<double(int, const Vecd&)> omega;
  std::function<Vecd(int, const Vecd&)> grad_omega;
  std::function<VecXc(int, int, const Vecd&)> eigvec;  // (n, zeta, k)
  std::function<double(const Vecd&)> dist_to_sigma;

  int ncomp() const { return 2 * J; }
  int theta_cap() const { return m_F < 0 ? 9 : std::min(m_F, 9); }
};

/// One (n, zeta) eigenpair column per mode, ordered (1,+),(1,-),(2,+),...
struct EigenSystem {
  Vecd omegas;  // signed eigenvalues in mode order
  MatXc Xi;     // unit eigenvectors as columns, same order
  static int col(int n, int zeta) { return 2 * (n - 1) + (zeta > 0 ? 0 : 1); }
  MatXc projection(int n, int zeta) const {
    const auto g = Xi.col(col(n, zeta));
    return g * g.adjoint();
  }
};

struct ModelParams {
  int d = 1;
  double alpha2 = 0.0;   // fpu quadratic coupling
  double alpha3 = 1.0;   // fpu cubic coupling
  double q = 1.0 / 6.0;  // klein-gordon cubic coefficient
  int sin_order = 7;     // sine-gordon odd truncation order
  cplx alpha = 1.0;      // nls / wave coupling
  Eigen::MatrixXd gamma; // nls quadratic-form matrix (defaults to identity)
};

DispersionModel builtin_model(const std::string& name, const ModelParams& p = {});

bool is_band_crossing(const DispersionModel& m, const Vecd& k, double tol);
bool is_band_crossing(const DispersionModel& m, const Vecd& k);

EigenSystem eigen_decompose(const DispersionModel& m, const Vecd& k);
double band_omega(const DispersionModel& m, int n, const Vecd& k);
Vecd group_velocity(const DispersionModel& m, int n, int zeta, const Vecd& k);

struct WaveCenter {
  Vecd kstar;
  int band = 1;
  int zeta = +1;
};

struct NondegeneracyReport {
  bool pass = false;
  double margin = 0.0;  // min |theta w(k*) - zeta w_n(theta k*)| over nontrivial
  struct Violation {
    int n;
    int theta;
    int zeta;
    double value;
  };
  std::vector<Violation> violations;
  bool sigma_hit = false;  // some theta*k* fell onto the crossing set
};

NondegeneracyReport check_nondegeneracy(const DispersionModel& m, const Vecd& kstar,
                                        int n_l, int m_F_cap = 0, double tol_nd = 1e-8);

struct GvSeparation {
  double p0 = std::numeric_limits<double>::infinity();
  int worst_a = -1, worst_b = -1;
  bool pass = true;
};

GvSeparation check_group_velocity_separation(const DispersionModel& m,
                                             const std::vector<WaveCenter>& centers,
                                             double tol_gv = 1e-8);

struct CompleteDegeneracyReport {
  bool pairwise_pass = true;      // (csg1) over odd nu up to nu_max
  double pairwise_margin = std::numeric_limits<double>::infinity();
  std::vector<bool> sigma_pass;   // per center: nu*k* stays away from sigma
  std::vector<bool> scaling_pass; // per center: (nd22) and (nd23)
  bool pass = false;
  bool odd_only = false;          // nonlinearity parity requirement
};

CompleteDegeneracyReport check_complete_degeneracy(const DispersionModel& m,
                                                   const std::vector<WaveCenter>& centers,
                                                   int nu_max = 9, double tol_cd = 1e-8);

enum class ApplicableTheorem { generic1, generic2, none };

struct GenericityReport {
  std::vector<WaveCenter> centers;
  double p0 = 0.0;
  std::vector<NondegeneracyReport> nondegeneracy;
  CompleteDegeneracyReport complete_degeneracy;
  std::vector<double> omega_at_center;  // non-zero frequency check data
  ApplicableTheorem applicable = ApplicableTheorem::none;
};

GenericityReport check_genericity(const DispersionModel& m,
                                  const std::vector<WaveCenter>& centers,
                                  double tol = 1e-8);

const char* theorem_name(ApplicableTheorem t);

}  // namespace wplab
