#pragma once

#include "wplab/dispersion.hpp"
#include "wplab/evolve.hpp"

namespace wplab {

struct Envelope {
  enum class Family { gaussian, sech, custom };
  Family family = Family::gaussian;
  double width = 1.0;     // r-space scale
  cplx amplitude = 1.0;
  std::function<cplx(const Vecd&)> custom_fourier;

  /// hhat(kappa): Fourier transform of the r-space profile Phi.
  cplx fourier(const Vecd& kappa) const;
  /// Phi(r) in r-space (closed form; unused for custom envelopes).
  cplx profile(const Vecd& r) const;
};

struct WavepacketSpec {
  Vecd kstar;
  int band = 1;
  cplx amp_plus{1.0, 0.0};
  cplx amp_minus{0.0, 0.0};
  Envelope env_plus;
  Envelope env_minus;
  Vecd r0;          // position shift, empty = origin
  double beta = 0.1;
};

struct MultiWavepacket {
  std::vector<WavepacketSpec> packets;
  double beta = 0.1;
};

/// Grid sized so the envelope decays below 1e-10 before wrap-around and the
/// nonlinear harmonics of the centers stay inside the resolved band.
Grid default_grid(const DispersionModel& m, const std::vector<Vecd>& centers,
                  double beta, double max_width, int min_n = 256);

/// (h0) construction: beta^{-d} hhat_z((k - z k*)/beta) e^{-i (k - z k*).r0/beta}
/// g_{n,z}(k) summed over the zeta components.
ModalField synthesize_modal(const WavepacketSpec& spec, const DispersionModel& m,
                            const Grid& g);
ModalField synthesize_modal(const MultiWavepacket& mw, const DispersionModel& m,
                            const Grid& g);

/// (ex) construction: sample e^{i z k*.r} Phi(beta r - r0) g in r-space, then
/// lattice-transform and band-project. Agrees with the k-space form within
/// aliasing error.
ModalField synthesize_modal_rspace(const WavepacketSpec& spec, const DispersionModel& m,
                                   const Grid& g);

struct WavepacketDiagnostics {
  double l1 = 0;            // total L1(k) mass
  double tail_mass = 0;     // mass outside the beta^{1-eps} balls
  double band_leakage = 0;  // L1 of h - h_+ - h_-
  double grad_bound = 0;    // integral of |grad h_z| inside the balls
};

WavepacketDiagnostics verify_wavepacket(const ModalField& f, const DispersionModel& m,
                                        const Vecd& kstar, int band, double beta,
                                        double eps);

/// Smooth bump: 1 on |eta| <= pi0/2, 0 on |eta| >= pi0, exp(1 - 1/(1-t^2))
/// in between with t = 2|eta|/pi0 - 1.
double bump_psi(double eta_norm, double pi0);

double default_pi0(const DispersionModel& m, const Vecd& kstar);

/// (hpsi) modified wavepacket: multiply each zeta component by the bump
/// centered at zeta k* with radius pi0 beta^{1-eps}; output vanishes exactly
/// outside the support balls.
ModalField apply_cutoff(const ModalField& f, const DispersionModel& m, const Vecd& kstar,
                        int band, double beta, double eps, double pi0);

}  // namespace wplab
