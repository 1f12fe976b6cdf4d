#pragma once

#include <functional>

#include "wplab/field.hpp"

namespace wplab {

/// One product term of the constant multilinear core: coef * prod_j arg_j[in[j]]
/// accumulated into component `out`.
struct CoreTerm {
  cplx coef{1.0, 0.0};
  int out = 0;
  std::vector<int> in;
};

/// Degree-m susceptibility. Separable form: scalar per-argument multipliers
/// mult_arg (one entry applied to every argument, or one per argument),
/// output multiplier mult_out, and a sparse constant core. Dense form: a raw
/// per-(k, k-vector) action, summed directly (small grids only).
struct ChiTensor {
  int degree = 2;
  std::vector<std::function<cplx(const Vecd&)>> mult_arg;  // empty => 1
  std::function<cplx(const Vecd&)> mult_out;               // null  => 1
  std::vector<CoreTerm> core;
  double C_chi = 1.0;  // norm bound in the (2pi)^{-(m-1)d}-weighted convention

  using DenseFn = std::function<void(const Vecd& kout, const std::vector<Vecd>& kin,
                                     const std::vector<VecXc>& uin, VecXc& accum)>;
  DenseFn dense;

  bool separable() const { return !core.empty(); }
  const std::function<cplx(const Vecd&)>* arg_mult(int j) const {
    if (mult_arg.empty()) return nullptr;
    return mult_arg.size() == 1 ? &mult_arg[0] : &mult_arg[j];
  }
};

/// Padding factor that keeps an m-fold product alias-free in the retained
/// window. Torus models use 1: the wrapped sum is the exact modal convolution.
int default_pad(const Grid& g, int degree);

/// Discrete (Fmintr) evaluation: convolution over the grid with the
/// dk^{(m-1)d}/(2pi)^{(m-1)d} weight, fast path through padded r-space
/// products for separable chi, direct summation for dense chi.
ModalField nonlinear_term(const ChiTensor& chi, const std::vector<const ModalField*>& fields,
                          int pad = 0);

ChiTensor fpu_quadratic_chi(double alpha2);
ChiTensor fpu_cubic_chi(double alpha3);
ChiTensor kg_cubic_chi(double q, int d);
std::vector<ChiTensor> sine_gordon_chis(double beta, int order, int d);
ChiTensor nls_cubic_chi(cplx alpha, int d);
ChiTensor wave_cubic_chi(cplx alpha, int d);
ChiTensor toy_quadratic_chi(int d);

}  // namespace wplab
