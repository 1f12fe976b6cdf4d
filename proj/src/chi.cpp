#include "wplab/chi.hpp"

#include <map>

namespace wplab {

namespace {

const cplx I{0.0, 1.0};

Grid padded_grid(const Grid& g, int pad) {
  Grid pg = g;
  for (auto& s : pg.n) s *= pad;
  return pg;
}

// Embed an N-spectrum into a pad*N spectrum by signed index (zero fill).
VecXc embed_spectrum(const Grid& g, const Grid& pg, const VecXc& a) {
  VecXc out = VecXc::Zero(pg.npoints());
  int idx[4], pidx[4];
  for (long p = 0; p < g.npoints(); ++p) {
    g.unflatten(p, idx);
    for (int i = 0; i < g.d; ++i) {
      int s = Grid::wrap_index(idx[i], g.n[i]);
      pidx[i] = (s % pg.n[i] + pg.n[i]) % pg.n[i];
    }
    out[pg.flatten(pidx)] = a[p];
  }
  return out;
}

VecXc extract_spectrum(const Grid& g, const Grid& pg, const VecXc& a) {
  VecXc out(g.npoints());
  int idx[4], pidx[4];
  for (long p = 0; p < g.npoints(); ++p) {
    g.unflatten(p, idx);
    for (int i = 0; i < g.d; ++i) {
      int s = Grid::wrap_index(idx[i], g.n[i]);
      pidx[i] = (s % pg.n[i] + pg.n[i]) % pg.n[i];
    }
    out[p] = a[pg.flatten(pidx)];
  }
  return out;
}

ModalField nonlinear_term_dense(const ChiTensor& chi, const std::vector<const ModalField*>& f) {
  const Grid& g = f[0]->grid;
  const int m = chi.degree;
  const int nc = f[0]->ncomp();
  double combos = std::pow(double(g.npoints()), m - 1);
  if (combos > double(1 << 26))
    throw std::invalid_argument("dense chi on a grid with too many convolution points");
  ModalField out(g, nc, f[0]->tau);
  const double weight = std::pow(g.cell_k() / std::pow(2.0 * pi, g.d), m - 1);

  std::vector<long> j(m, 0);
  std::vector<Vecd> kin(m);
  std::vector<VecXc> uin(m);
  int idx[4];
  const long npts = g.npoints();
  for (long p = 0; p < npts; ++p) {
    Vecd kout = g.k_at(p);
    VecXc acc = VecXc::Zero(nc);
    // iterate the m-1 free argument indices; the last is fixed by matching
    std::vector<long> free_idx(m - 1, 0);
    bool done = false;
    while (!done) {
      int sum_idx[4] = {0, 0, 0, 0};
      g.unflatten(p, idx);
      int out_idx[4];
      for (int i = 0; i < g.d; ++i) out_idx[i] = idx[i];
      for (int a = 0; a < m - 1; ++a) {
        g.unflatten(free_idx[a], idx);
        for (int i = 0; i < g.d; ++i) sum_idx[i] += idx[i];
      }
      int last[4];
      for (int i = 0; i < g.d; ++i)
        last[i] = ((out_idx[i] - sum_idx[i]) % g.n[i] + g.n[i]) % g.n[i];
      long plast = g.flatten(last);
      for (int a = 0; a < m - 1; ++a) {
        kin[a] = g.k_at(free_idx[a]);
        uin[a] = f[a]->v.col(free_idx[a]);
      }
      kin[m - 1] = g.k_at(plast);
      uin[m - 1] = f[m - 1]->v.col(plast);
      chi.dense(kout, kin, uin, acc);
      // advance
      int a = m - 2;
      while (a >= 0) {
        if (++free_idx[a] < npts) break;
        free_idx[a] = 0;
        --a;
      }
      done = (a < 0);
      if (m == 1) done = true;
    }
    out.v.col(p) = weight * acc;
  }
  return out;
}

}  // namespace

int default_pad(const Grid& g, int degree) {
  if (g.domain == Domain::torus) return 1;
  return (degree + 2) / 2;  // smallest p with p*N >= (m+1)N/2
}

ModalField nonlinear_term(const ChiTensor& chi, const std::vector<const ModalField*>& fields,
                          int pad) {
  if ((int)fields.size() != chi.degree)
    throw std::invalid_argument("nonlinear_term: argument count vs degree mismatch");
  const Grid& g = fields[0]->grid;
  for (auto* f : fields)
    if (!f->grid.same_as(g)) throw std::invalid_argument("nonlinear_term: grid mismatch");
  if (!chi.separable()) return nonlinear_term_dense(chi, fields);

  if (pad <= 0) pad = default_pad(g, chi.degree);
  const Grid pg = padded_grid(g, pad);
  const int m = chi.degree;
  const int nc = fields[0]->ncomp();
  const long pnpts = pg.npoints();

  // r-space transforms of mult_j(k) * field_j[comp], memoized within the call
  std::map<std::tuple<const ModalField*, int, int>, MatXc> cache;
  auto arg_rspace = [&](int j, int comp) -> const MatXc& {
    const auto* mult = chi.arg_mult(j);
    const int mult_id = chi.mult_arg.size() <= 1 ? 0 : j;
    auto key = std::make_tuple(fields[j], comp, mult ? mult_id : -1);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    VecXc spec = fields[j]->v.row(comp).transpose();
    if (mult)
      for (long p = 0; p < g.npoints(); ++p) spec[p] *= (*mult)(g.k_at(p));
    MatXc padded = embed_spectrum(g, pg, spec).transpose();
    dft_grid(pg, padded, false);  // to r-space, 1/P^d convention
    return cache.emplace(key, std::move(padded)).first->second;
  };

  double scale = 1.0;
  for (int i = 0; i < g.d; ++i)
    scale *= std::pow(g.dk(i) * pg.n[i] / (2.0 * pi), m - 1);

  ModalField out(g, nc, fields[0]->tau);
  for (const auto& term : chi.core) {
    Eigen::RowVectorXcd prod = Eigen::RowVectorXcd::Ones(pnpts);
    for (int j = 0; j < m; ++j) prod.array() *= arg_rspace(j, term.in[j]).row(0).array();
    MatXc spec = prod;
    dft_grid(pg, spec, true);
    VecXc reduced = extract_spectrum(g, pg, spec.row(0).transpose());
    out.v.row(term.out) += (term.coef * scale) * reduced.transpose();
  }
  if (chi.mult_out)
    for (long p = 0; p < g.npoints(); ++p) out.v.col(p) *= chi.mult_out(g.k_at(p));
  return out;
}

ChiTensor fpu_quadratic_chi(double alpha2) {
  ChiTensor c;
  c.degree = 2;
  c.mult_arg = {[](const Vecd& k) { return std::exp(I * k[0]) - 1.0; }};
  c.core = {{alpha2, 1, {0, 0}}};
  c.C_chi = 4.0 * std::abs(alpha2) / (2.0 * pi);
  return c;
}

ChiTensor fpu_cubic_chi(double alpha3) {
  ChiTensor c;
  c.degree = 3;
  c.mult_arg = {[](const Vecd& k) { return std::exp(I * k[0]) - 1.0; }};
  c.core = {{alpha3, 1, {0, 0, 0}}};
  c.C_chi = 8.0 * std::abs(alpha3) / std::pow(2.0 * pi, 2);
  return c;
}

ChiTensor kg_cubic_chi(double q, int d) {
  ChiTensor c;
  c.degree = 3;
  c.mult_out = [](const Vecd& k) { return 1.0 / std::sqrt(1.0 + k.squaredNorm()); };
  c.core = {{q, 1, {0, 0, 0}}};
  c.C_chi = std::abs(q) / std::pow(2.0 * pi, 2 * d);
  return c;
}

std::vector<ChiTensor> sine_gordon_chis(double beta, int order, int d) {
  // sin(beta u)/beta^3 rescaling leaves odd terms (-1)^{j+1} beta^{2(j-1)} u^{2j+1}/(2j+1)!
  std::vector<ChiTensor> out;
  double fact = 6.0;  // 3!
  double sign = 1.0;
  double bpow = 1.0;
  for (int deg = 3; deg <= order; deg += 2) {
    ChiTensor c;
    c.degree = deg;
    c.mult_out = [](const Vecd& k) { return 1.0 / std::sqrt(1.0 + k.squaredNorm()); };
    const double coef = sign * bpow / fact;
    c.core = {{coef, 1, std::vector<int>(deg, 0)}};
    c.C_chi = std::abs(coef) / std::pow(2.0 * pi, (deg - 1) * d);
    out.push_back(std::move(c));
    fact *= double(deg + 1) * double(deg + 2);
    sign = -sign;
    bpow *= beta * beta;
  }
  return out;
}

ChiTensor nls_cubic_chi(cplx alpha, int d) {
  ChiTensor c;
  c.degree = 3;
  const cplx a3 = alpha / 3.0;
  const cplx a3c = std::conj(alpha) / 3.0;
  c.core = {{a3, 0, {0, 0, 1}},  {a3, 0, {0, 1, 0}},  {a3, 0, {1, 0, 0}},
            {a3c, 1, {1, 1, 0}}, {a3c, 1, {1, 0, 1}}, {a3c, 1, {0, 1, 1}}};
  c.C_chi = std::abs(alpha) / std::pow(2.0 * pi, 2 * d);
  return c;
}

ChiTensor wave_cubic_chi(cplx alpha, int d) {
  ChiTensor c;
  c.degree = 3;
  c.mult_out = [alpha](const Vecd& k) {
    const double r = k.norm();
    return r > 0 ? -I * alpha * k[0] / r : cplx(0.0);
  };
  c.core = {{1.0, 1, {0, 0, 0}}};
  c.C_chi = std::abs(alpha) / std::pow(2.0 * pi, 2 * d);
  return c;
}

ChiTensor toy_quadratic_chi(int d) {
  ChiTensor c;
  c.degree = 2;
  c.core = {{1.0, 0, {0, 0}}};
  c.C_chi = 1.0 / std::pow(2.0 * pi, d);
  return c;
}

}  // namespace wplab
