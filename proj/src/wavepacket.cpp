#include "wplab/wavepacket.hpp"

namespace wplab {

namespace {
const cplx I{0.0, 1.0};

double torus_dist(const Grid& g, const Vecd& k, const Vecd& c) {
  double acc = 0;
  for (int i = 0; i < g.d; ++i) {
    double di = k[i] - c[i];
    if (g.domain == Domain::torus) di = wrap_to_pi(di);
    acc += di * di;
  }
  return std::sqrt(acc);
}

}  // namespace

cplx Envelope::fourier(const Vecd& kappa) const {
  const int d = int(kappa.size());
  switch (family) {
    case Family::gaussian: {
      const double w2 = width * width;
      return amplitude * std::pow(2.0 * pi, 0.5 * d) * std::pow(width, d) *
             std::exp(-0.5 * w2 * kappa.squaredNorm());
    }
    case Family::sech: {
      cplx v = amplitude;
      for (int i = 0; i < d; ++i)
        v *= pi * width / std::cosh(0.5 * pi * width * kappa[i]);
      return v;
    }
    case Family::custom:
      return custom_fourier(kappa);
  }
  return 0.0;
}

cplx Envelope::profile(const Vecd& r) const {
  switch (family) {
    case Family::gaussian:
      return amplitude * std::exp(-0.5 * r.squaredNorm() / (width * width));
    case Family::sech: {
      cplx v = amplitude;
      for (int i = 0; i < r.size(); ++i) v /= std::cosh(r[i] / width);
      return v;
    }
    case Family::custom:
      throw std::invalid_argument("custom envelopes have no closed r-space profile");
  }
  return 0.0;
}

Grid default_grid(const DispersionModel& m, const std::vector<Vecd>& centers,
                  double beta, double max_width, int min_n) {
  const double w = std::max(max_width, 1.0);
  double kmax_center = 0;
  for (const auto& c : centers) kmax_center = std::max(kmax_center, c.norm());

  auto round_pow2 = [](double x) {
    int n = 8;
    while (n < x && n < (1 << 22)) n *= 2;
    return n;
  };

  if (m.domain == Domain::torus) {
    int n = round_pow2(std::max(double(min_n), 40.0 * w / beta));
    return Grid(m.d, Domain::torus, std::vector<int>(m.d, n));
  }
  const double K = std::max(4.0 * kmax_center + 20.0 * w / beta, 8.0);
  const int reach = std::max(m.theta_cap(), 1);
  const double k_need = reach * (kmax_center + 8.0 * beta / w) + 2.0;
  int n = round_pow2(std::max(double(min_n), 2.0 * k_need * K / pi));
  return Grid(m.d, Domain::euclidean, std::vector<int>(m.d, n), K);
}

ModalField synthesize_modal(const WavepacketSpec& spec, const DispersionModel& m,
                            const Grid& g) {
  if (is_band_crossing(m, spec.kstar))
    throw DegeneratePointError("wavepacket center on the band-crossing set");
  const double wmin = std::min(spec.env_plus.width, spec.env_minus.width);
  if (spec.beta / (wmin * g.dk()) < 8.0 * (1.0 - 1e-12))
    throw std::invalid_argument("grid too coarse for the requested beta");
  if (spec.amp_plus == 0.0 && spec.amp_minus == 0.0)
    throw std::invalid_argument("wavepacket needs a nonzero zeta component");

  ModalField f(g, m.ncomp());
  const double bscale = std::pow(spec.beta, -g.d);
  Vecd r0 = spec.r0.size() ? spec.r0 : Vecd::Zero(g.d);
  for (long p = 0; p < g.npoints(); ++p) {
    const Vecd k = g.k_at(p);
    for (int zeta : {+1, -1}) {
      const cplx amp = zeta > 0 ? spec.amp_plus : spec.amp_minus;
      if (amp == 0.0) continue;
      const Envelope& env = zeta > 0 ? spec.env_plus : spec.env_minus;
      Vecd dk(g.d);
      for (int i = 0; i < g.d; ++i) {
        double di = k[i] - zeta * spec.kstar[i];
        if (g.domain == Domain::torus) di = wrap_to_pi(di);
        dk[i] = di;
      }
      cplx val = amp * bscale * env.fourier((dk / spec.beta).eval());
      val *= std::exp(-I * dk.dot(r0) / spec.beta);
      if (std::abs(val) == 0.0) continue;
      f.v.col(p) += val * m.eigvec(spec.band, zeta, k);
    }
  }
  return f;
}

ModalField synthesize_modal(const MultiWavepacket& mw, const DispersionModel& m,
                            const Grid& g) {
  if (mw.packets.empty()) throw std::invalid_argument("empty multi-wavepacket");
  ModalField f = synthesize_modal(mw.packets[0], m, g);
  for (size_t i = 1; i < mw.packets.size(); ++i)
    f.v += synthesize_modal(mw.packets[i], m, g).v;
  return f;
}

ModalField synthesize_modal_rspace(const WavepacketSpec& spec, const DispersionModel& m,
                                   const Grid& g) {
  SpatialField s(g, m.ncomp());
  Vecd r0 = spec.r0.size() ? spec.r0 : Vecd::Zero(g.d);
  for (long p = 0; p < g.npoints(); ++p) {
    const Vecd r = g.r_at(p);
    for (int zeta : {+1, -1}) {
      const cplx amp = zeta > 0 ? spec.amp_plus : spec.amp_minus;
      if (amp == 0.0) continue;
      const Envelope& env = zeta > 0 ? spec.env_plus : spec.env_minus;
      const cplx phase = std::exp(I * double(zeta) * spec.kstar.dot(r));
      const cplx val = amp * phase * env.profile((spec.beta * r - r0).eval());
      s.v.col(p) += val * m.eigvec(spec.band, zeta, spec.kstar);
    }
  }
  ModalField f = forward_transform(s);
  // project every mode onto its own-band pair, as (ex0) prescribes
  for (long p = 0; p < g.npoints(); ++p) {
    const Vecd k = g.k_at(p);
    if (is_band_crossing(m, k)) continue;
    VecXc acc = VecXc::Zero(m.ncomp());
    for (int zeta : {+1, -1}) {
      const VecXc gv = m.eigvec(spec.band, zeta, k);
      acc += gv * (gv.adjoint() * f.v.col(p));
    }
    f.v.col(p) = acc;
  }
  return f;
}

WavepacketDiagnostics verify_wavepacket(const ModalField& f, const DispersionModel& m,
                                        const Vecd& kstar, int band, double beta,
                                        double eps) {
  if (!(eps > 0 && eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2)");
  const Grid& g = f.grid;
  WavepacketDiagnostics diag;
  diag.l1 = l1_norm_k(f);
  const double radius = std::pow(beta, 1.0 - eps);

  ModalField proj_sum(g, f.ncomp());
  const double cell = g.cell_k();
  for (int zeta : {+1, -1}) {
    ModalField hz(g, f.ncomp());
    const Vecd center = (double(zeta) * kstar).eval();
    for (long p = 0; p < g.npoints(); ++p) {
      const Vecd k = g.k_at(p);
      if (!is_band_crossing(m, k)) {
        const VecXc gv = m.eigvec(band, zeta, k);
        hz.v.col(p) = gv * (gv.adjoint() * f.v.col(p));
      }
    }
    proj_sum.v += hz.v;
    for (long p = 0; p < g.npoints(); ++p)
      if (torus_dist(g, g.k_at(p), center) >= radius)
        diag.tail_mass += hz.v.col(p).norm() * cell;

    // grid gradient of h_z, central differences per dimension
    for (long p = 0; p < g.npoints(); ++p) {
      if (torus_dist(g, g.k_at(p), center) > radius) continue;
      double g2 = 0;
      int idx[4], nb[4];
      g.unflatten(p, idx);
      for (int dim = 0; dim < g.d; ++dim) {
        for (int i = 0; i < g.d; ++i) nb[i] = idx[i];
        nb[dim] = (idx[dim] + 1) % g.n[dim];
        const long pp = g.flatten(nb);
        nb[dim] = (idx[dim] - 1 + g.n[dim]) % g.n[dim];
        const long pm = g.flatten(nb);
        g2 += ((hz.v.col(pp) - hz.v.col(pm)) / (2.0 * g.dk(dim))).squaredNorm();
      }
      diag.grad_bound += std::sqrt(g2) * cell;
    }
  }
  ModalField leak = f;
  leak.v -= proj_sum.v;
  diag.band_leakage = l1_norm_k(leak);
  return diag;
}

double bump_psi(double eta_norm, double pi0) {
  const double a = std::abs(eta_norm);
  if (a <= pi0 / 2) return 1.0;
  if (a >= pi0) return 0.0;
  const double t = 2.0 * a / pi0 - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double default_pi0(const DispersionModel& m, const Vecd& kstar) {
  double dist = m.dist_to_sigma ? m.dist_to_sigma(kstar)
                                : std::numeric_limits<double>::infinity();
  return std::min(0.5, dist / 2.0 - 1e-6);
}

ModalField apply_cutoff(const ModalField& f, const DispersionModel& m, const Vecd& kstar,
                        int band, double beta, double eps, double pi0) {
  const double dist = m.dist_to_sigma ? m.dist_to_sigma(kstar)
                                      : std::numeric_limits<double>::infinity();
  if (!(pi0 > 0) || pi0 >= dist / 2.0)
    throw std::invalid_argument("pi0 must satisfy 0 < pi0 < dist(k*, sigma)/2");
  const Grid& g = f.grid;
  const double radius = std::pow(beta, 1.0 - eps);
  ModalField out(g, f.ncomp(), f.tau);
  for (int zeta : {+1, -1}) {
    const Vecd center = (double(zeta) * kstar).eval();
    for (long p = 0; p < g.npoints(); ++p) {
      const double psi = bump_psi(torus_dist(g, g.k_at(p), center) / radius, pi0);
      if (psi == 0.0) continue;
      const Vecd k = g.k_at(p);
      if (is_band_crossing(m, k)) continue;
      const VecXc gv = m.eigvec(band, zeta, k);
      out.v.col(p) += psi * (gv * (gv.adjoint() * f.v.col(p)));
    }
  }
  return out;
}

}  // namespace wplab
