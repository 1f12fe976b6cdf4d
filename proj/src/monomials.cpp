#include "wplab/monomials.hpp"

#include <algorithm>

namespace wplab {

int OrderedTree::leaves() const {
  int m = 0;
  for (int a : arity) m += (a == 0);
  return m;
}

int OrderedTree::incidence() const { return nodes() - leaves(); }

std::vector<int> OrderedTree::parents() const {
  std::vector<int> par(nodes(), -1);
  std::vector<std::pair<int, int>> stack;  // (node, remaining children)
  for (int i = 0; i < nodes(); ++i) {
    if (!stack.empty()) {
      par[i] = stack.back().first;
      if (--stack.back().second == 0) stack.pop_back();
    }
    if (arity[i] > 0) stack.emplace_back(i, arity[i]);
  }
  return par;
}

std::vector<int> OrderedTree::depths() const {
  auto par = parents();
  std::vector<int> d(nodes(), 0);
  for (int i = 1; i < nodes(); ++i) d[i] = d[par[i]] + 1;
  return d;
}

int OrderedTree::rank() const {
  auto d = depths();
  int r = 0;
  for (int i = 0; i < nodes(); ++i)
    if (arity[i] == 0) r = std::max(r, d[i]);
  return r;
}

std::string OrderedTree::label() const {
  std::string s;
  s.reserve(arity.size());
  for (int a : arity) s.push_back(char('0' + a));
  return s;
}

OrderedTree OrderedTree::from_label(const std::string& s) {
  OrderedTree t;
  for (char c : s) t.arity.push_back(c - '0');
  return t;
}

std::vector<OrderedTree> enumerate_trees(int m) {
  if (m < 1 || m > 8) throw std::invalid_argument("enumerate_trees: m must be 1..8");
  static std::map<int, std::vector<OrderedTree>> memo;
  auto it = memo.find(m);
  if (it != memo.end()) return it->second;

  std::vector<OrderedTree> out;
  if (m == 1) {
    out.push_back(OrderedTree{{0}});
  } else {
    for (int s = 2; s <= m; ++s) {
      // ordered compositions of m into s positive parts
      std::vector<int> comp(s, 1);
      auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == s - 1) {
          comp[pos] = left;
          // cartesian product of subtree lists
          std::vector<std::vector<OrderedTree>> subs;
          for (int j = 0; j < s; ++j) subs.push_back(enumerate_trees(comp[j]));
          std::vector<size_t> pick(s, 0);
          while (true) {
            OrderedTree t;
            t.arity.push_back(s);
            for (int j = 0; j < s; ++j)
              for (int a : subs[j][pick[j]].arity) t.arity.push_back(a);
            out.push_back(std::move(t));
            int j = s - 1;
            while (j >= 0 && ++pick[j] == subs[j].size()) pick[j--] = 0;
            if (j < 0) break;
          }
          return;
        }
        for (int v = 1; v <= left - (s - 1 - pos); ++v) {
          comp[pos] = v;
          self(self, pos + 1, left - v);
        }
      };
      rec(rec, 0, m);
    }
    std::sort(out.begin(), out.end());
  }
  memo[m] = out;
  return out;
}

std::map<std::string, long long> multiplicity_coefficients(int m, const std::set<int>& S) {
  if (m < 1 || m > 8) throw std::invalid_argument("multiplicity: m must be 1..8");
  // G[i] maps label -> coefficient for homogeneity i
  std::vector<std::map<std::string, long long>> G(m + 1);
  G[1]["0"] = 1;
  for (int mm = 2; mm <= m; ++mm) {
    for (int s : S) {
      if (s < 2 || s > mm) continue;
      std::vector<int> comp(s, 1);
      auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == s - 1) {
          comp[pos] = left;
          // combine all coefficient products over the composition
          std::vector<std::pair<std::string, long long>> acc = {{"", 1}};
          for (int j = 0; j < s; ++j) {
            std::vector<std::pair<std::string, long long>> next;
            for (const auto& [lab, co] : acc)
              for (const auto& [sub, sc] : G[comp[j]])
                next.emplace_back(lab + sub, co * sc);
            acc = std::move(next);
          }
          const std::string root(1, char('0' + s));
          for (const auto& [lab, co] : acc) G[mm][root + lab] += co;
          return;
        }
        for (int v = 1; v <= left - (s - 1 - pos); ++v) {
          comp[pos] = v;
          self(self, pos + 1, left - v);
        }
      };
      rec(rec, 0, mm);
    }
  }
  // include zero rows for trees that never arise with these degrees
  std::map<std::string, long long> out;
  for (const auto& t : enumerate_trees(m)) out[t.label()] = 0;
  for (const auto& [lab, co] : G[m]) out[lab] = co;
  return out;
}

DecorationClass classify_decoration(const OrderedTree& t, const Decoration& d) {
  if ((int)d.gamma.size() != t.nodes())
    throw std::invalid_argument("decoration size mismatch");
  for (int v : d.gamma)
    if (v != 1 && v != -1 && v != 0)
      throw std::invalid_argument("decoration values must be +1, -1 or infinity");
  DecorationClass cls;
  bool has_inf = false;
  for (int v : d.gamma) has_inf = has_inf || v == 0;
  auto par = t.parents();
  bool fm = !has_inf, afm = !has_inf;
  std::vector<int> child_sum(t.nodes(), 0);
  for (int i = 1; i < t.nodes(); ++i) child_sum[par[i]] += d.gamma[i];
  for (int i = 0; i < t.nodes(); ++i) {
    if (t.arity[i] == 0) continue;
    if (child_sum[i] != d.gamma[i]) fm = false;
    if (t.arity[i] % 2 == 0 || t.arity[i] < 3)
      afm = false;
    else if ((child_sum[i] > 0 ? 1 : -1) != d.gamma[i])
      afm = false;
  }
  cls.fm = fm;
  cls.afm = afm;
  return cls;
}

InteractionKind si_ci_classify(const std::vector<int>& multiindex) {
  for (size_t i = 1; i < multiindex.size(); ++i)
    if (multiindex[i] != multiindex[0]) return InteractionKind::CI;
  return InteractionKind::SI;
}

std::vector<Vecd> propagate_k_assignment(const OrderedTree& t,
                                         const std::vector<Vecd>& k_leaves) {
  if ((int)k_leaves.size() != t.leaves())
    throw std::invalid_argument("leaf assignment size mismatch");
  std::vector<Vecd> k(t.nodes());
  auto par = t.parents();
  int leaf = 0;
  for (int i = 0; i < t.nodes(); ++i)
    if (t.arity[i] == 0) k[i] = k_leaves[leaf++];
  // accumulate leaves upward (preorder reversed visits children before parents)
  for (int i = t.nodes() - 1; i >= 1; --i) {
    if (k[par[i]].size() == 0) k[par[i]] = Vecd::Zero(k[i].size());
    k[par[i]] += k[i];
  }
  return k;
}

double interaction_phase(const DispersionModel& m, const OrderedTree& t,
                         const Decoration& d, const std::vector<Vecd>& k_nodes,
                         const std::vector<double>& tau_nodes, int n0) {
  if ((int)k_nodes.size() != t.nodes())
    throw std::invalid_argument("k assignment size mismatch");
  for (int v : d.gamma)
    if (v == 0)
      throw std::invalid_argument("interaction phase is defined on the finite channels");
  auto par = t.parents();
  // phase matching at every internal node
  for (int i = 0; i < t.nodes(); ++i) {
    if (t.arity[i] == 0) continue;
    Vecd sum = Vecd::Zero(m.d);
    for (int j = 0; j < t.nodes(); ++j)
      if (par[j] == i) sum += k_nodes[j];
    for (int c = 0; c < m.d; ++c) {
      double diff = k_nodes[i][c] - sum[c];
      if (m.domain == Domain::torus) diff = wrap_to_pi(diff);
      if (std::abs(diff) > 1e-12)
        throw std::invalid_argument("phase matching violated at an internal node");
    }
  }
  double phi = 0;
  for (int i = 0; i < t.nodes(); ++i) {
    if (t.arity[i] == 0) continue;
    const double tw = tau_nodes.empty() ? 1.0 : tau_nodes[i];
    double node = d.gamma[i] * band_omega(m, n0, k_nodes[i]);
    for (int j = 0; j < t.nodes(); ++j)
      if (par[j] == i) node -= d.gamma[j] * band_omega(m, n0, k_nodes[j]);
    phi += tw * node;
  }
  return phi;
}

std::vector<Vecd> phase_gradient(const DispersionModel& m, const OrderedTree& t,
                                 const Decoration& d, const std::vector<Vecd>& k_nodes,
                                 double h, int n0) {
  const int nleaf = t.leaves();
  if (nleaf < 2) return {};
  std::vector<int> leaf_pos;
  for (int i = 0; i < t.nodes(); ++i)
    if (t.arity[i] == 0) leaf_pos.push_back(i);

  std::vector<Vecd> leaves(nleaf);
  for (int j = 0; j < nleaf; ++j) leaves[j] = k_nodes[leaf_pos[j]];

  std::vector<Vecd> grads;
  for (int j = 0; j + 1 < nleaf; ++j) {
    Vecd gj(m.d);
    for (int c = 0; c < m.d; ++c) {
      auto eval = [&](double sign) {
        auto pert = leaves;
        pert[j][c] += sign * h;
        pert[nleaf - 1][c] -= sign * h;  // keep the root wavevector fixed
        auto kk = propagate_k_assignment(t, pert);
        return interaction_phase(m, t, d, kk, {}, n0);
      };
      gj[c] = (eval(+1.0) - eval(-1.0)) / (2.0 * h);
    }
    grads.push_back(gj);
  }
  return grads;
}

namespace {

/// Recursive sampled evaluation of one node of the monomial.
TimeSampled eval_node(const MonomialContext& ctx, const PropagatorTable& table,
                      const TimeGrid& tg, const OrderedTree& t,
                      const std::vector<int>& par, const Decoration* deco, int node,
                      const std::vector<const ModalField*>& leaf_fields, int& leaf_cursor) {
  const int Q = tg.nnodes();
  if (t.arity[node] == 0) {
    TimeSampled leaf;
    MatXc v = leaf_fields[leaf_cursor++]->v;
    if (deco) table.project(v, ctx.n0, deco->gamma[node]);
    leaf.s.assign(Q, v);
    leaf.final = v;
    return leaf;
  }
  std::vector<TimeSampled> children;
  for (int j = node + 1; j < t.nodes(); ++j)
    if (par[j] == node)
      children.push_back(
          eval_node(ctx, table, tg, t, par, deco, j, leaf_fields, leaf_cursor));

  const int s = t.arity[node];
  auto chi_it = ctx.chi_by_degree.find(s);
  if (chi_it == ctx.chi_by_degree.end())
    throw std::invalid_argument("no chi tensor of degree " + std::to_string(s));
  const ChiTensor& chi = *chi_it->second;

  const Grid& g = leaf_fields[0]->grid;
  const int nc = leaf_fields[0]->ncomp();
  std::vector<MatXc> integrand(Q);
  for (int q = 0; q < Q; ++q) {
    const double tq = tg.nodes[q];
    std::vector<ModalField> args(s, ModalField(g, nc, tq));
    std::vector<const ModalField*> ptrs(s);
    for (int j = 0; j < s; ++j) {
      args[j].v = children[j].s[q];
      table.apply_phase(args[j].v, tq / ctx.rho);
      ptrs[j] = &args[j];
    }
    MatXc w = nonlinear_term(chi, ptrs).v;
    if (deco) table.project(w, ctx.n0, deco->gamma[node]);
    ModalField tmp(g, nc, tq);
    tmp.v = std::move(w);
    table.apply_phase(tmp.v, -tq / ctx.rho);
    integrand[q] = std::move(tmp.v);
  }
  return prefix_integrate(tg, integrand);
}

}  // namespace

ModalField evaluate_monomial(const MonomialContext& ctx, const OrderedTree& t,
                             const Decoration* deco,
                             const std::vector<const ModalField*>& leaf_fields,
                             double tau) {
  if (t.rank() > 3 || t.leaves() > 4)
    throw std::invalid_argument("monomial evaluation is desk-scale: rank <= 3, m <= 4");
  if ((int)leaf_fields.size() != t.leaves())
    throw std::invalid_argument("leaf field count mismatch");
  const Grid& g = leaf_fields[0]->grid;
  for (auto* f : leaf_fields)
    if (!f->grid.same_as(g)) throw std::invalid_argument("leaf grids differ");
  for (const auto& [deg, chi] : ctx.chi_by_degree)
    if (!chi->separable() && std::pow(double(g.npoints()), deg - 1) > double(1 << 26))
      throw std::invalid_argument("dense evaluation limited to small grids");

  PropagatorTable table(*ctx.model, g);
  TimeGrid tg(tau, ctx.rho / 4.0);
  auto par = t.parents();
  int cursor = 0;
  TimeSampled root = eval_node(ctx, table, tg, t, par, deco, 0, leaf_fields, cursor);
  ModalField out(g, leaf_fields[0]->ncomp(), tau);
  out.v = t.arity[0] == 0 ? root.s[0] : root.final;
  return out;
}

ProbeResult nfm_magnitude_probe(const MonomialContext& ctx_template, const OrderedTree& t,
                                const Decoration& d,
                                const std::vector<const ModalField*>& leaf_fields,
                                const std::vector<double>& rho_list, double tau) {
  const auto cls = classify_decoration(t, d);
  if (cls.fm)
    throw std::invalid_argument("probe expects an NFM decoration (FM has no decay)");
  ProbeResult res;
  for (double rho : rho_list) {
    MonomialContext ctx = ctx_template;
    ctx.rho = rho;
    ModalField v = evaluate_monomial(ctx, t, &d, leaf_fields, tau);
    res.rho_values.push_back(rho);
    res.magnitudes.push_back(l1_norm_k(v));
  }
  // least-squares slope of log magnitude vs log rho
  const int n = int(res.rho_values.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(res.rho_values[i]);
    const double y = std::log(std::max(res.magnitudes[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  res.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const auto [mn, mx] = std::minmax_element(res.magnitudes.begin(), res.magnitudes.end());
  res.ratio_max_min = *mx / std::max(*mn, 1e-300);
  return res;
}

VecXc polar_form(const std::function<VecXc(const VecXc&)>& P, int n,
                 const std::vector<VecXc>& args) {
  if (n < 1 || n > 5) throw std::invalid_argument("polar_form: degree 1..5");
  if ((int)args.size() != n) throw std::invalid_argument("polar_form: argument count");
  double fact = 1;
  for (int j = 2; j <= n; ++j) fact *= j;
  VecXc acc = VecXc::Zero(args[0].size());
  for (int mask = 0; mask < (1 << n); ++mask) {
    VecXc x = VecXc::Zero(args[0].size());
    double sign = 1;
    for (int j = 0; j < n; ++j) {
      const double xi = (mask >> j) & 1 ? 1.0 : -1.0;
      sign *= xi;
      x += xi * args[j];
    }
    acc += sign * P(x);
  }
  return acc / (std::pow(2.0, n) * fact);
}

}  // namespace wplab
