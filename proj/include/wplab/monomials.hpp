#pragma once

#include <map>
#include <set>

#include "wplab/evolve.hpp"

namespace wplab {

/// Ordered rooted tree stored as its preorder arity sequence (0 = end node).
/// Non-end nodes of class-T2 trees have arity >= 2.
struct OrderedTree {
  std::vector<int> arity;

  int nodes() const { return int(arity.size()); }
  int leaves() const;           // homogeneity index m
  int incidence() const;        // non-end nodes i
  int edges() const { return nodes() - 1; }
  int rank() const;             // depth
  std::vector<int> parents() const;  // -1 for the root
  std::vector<int> depths() const;
  std::string label() const;    // digit string of the preorder arities
  static OrderedTree from_label(const std::string& s);
  bool operator<(const OrderedTree& o) const { return label() < o.label(); }
};

/// All class-T2 ordered trees with m end nodes, label-lexicographic order.
std::vector<OrderedTree> enumerate_trees(int m);

/// Multiplicity coefficients c_T of the solution-operator expansion with the
/// operator degrees restricted to S; trees outside the generated set have 0.
std::map<std::string, long long> multiplicity_coefficients(int m, const std::set<int>& S);

/// Node decoration: +1 / -1 select the n0-band zeta channels, 0 is the
/// complementary (infinity) channel.
struct Decoration {
  std::vector<int> gamma;  // one value per preorder node
};

struct DecorationClass {
  bool fm = false;   // frequency matched
  bool afm = false;  // alternative matching (odd arities, sign rule)
};

DecorationClass classify_decoration(const OrderedTree& t, const Decoration& d);

enum class InteractionKind { SI, CI };
InteractionKind si_ci_classify(const std::vector<int>& multiindex);

/// Phase of the total oscillatory factor for a per-node k assignment and
/// optional per-node time weights (defaulting to 1 at every internal node).
double interaction_phase(const DispersionModel& m, const OrderedTree& t,
                         const Decoration& d, const std::vector<Vecd>& k_nodes,
                         const std::vector<double>& tau_nodes = {}, int n0 = 1);

/// Constrained FD gradient: leaf j varies, the last leaf compensates so every
/// internal wavevector keeps its phase matching; one d-vector per free leaf.
std::vector<Vecd> phase_gradient(const DispersionModel& m, const OrderedTree& t,
                                 const Decoration& d, const std::vector<Vecd>& k_nodes,
                                 double h = 1e-4, int n0 = 1);

/// Fill internal wavevectors bottom-up from leaf values (phase matching).
std::vector<Vecd> propagate_k_assignment(const OrderedTree& t,
                                         const std::vector<Vecd>& k_leaves);

struct MonomialContext {
  const DispersionModel* model = nullptr;
  std::map<int, const ChiTensor*> chi_by_degree;
  double rho = 1.0;
  int n0 = 1;
};

/// Appendix-A evaluation of one composition monomial: recursive decorated
/// oscillatory integrals over the nested time simplex, Gauss-Legendre panels
/// of width rho/4. Pass no decoration for the undecorated operator.
ModalField evaluate_monomial(const MonomialContext& ctx, const OrderedTree& t,
                             const Decoration* deco,
                             const std::vector<const ModalField*>& leaf_fields,
                             double tau);

struct ProbeResult {
  std::vector<double> rho_values;
  std::vector<double> magnitudes;   // L1 at tau
  double fitted_exponent = 0.0;
  double ratio_max_min = 0.0;
};

ProbeResult nfm_magnitude_probe(const MonomialContext& ctx_template, const OrderedTree& t,
                                const Decoration& d,
                                const std::vector<const ModalField*>& leaf_fields,
                                const std::vector<double>& rho_list, double tau);

/// Standard signed polarization of a degree-n homogeneous polynomial.
VecXc polar_form(const std::function<VecXc(const VecXc&)>& P, int n,
                 const std::vector<VecXc>& args);

}  // namespace wplab
