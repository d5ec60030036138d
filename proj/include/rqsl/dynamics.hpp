#pragma once

// Exact unitary time evolution for time-independent Hamiltonians, energy
// variance, state change, and overlap diagnostics.

#include <optional>
#include <vector>

#include "rqsl/hilbert.hpp"

namespace rqsl::dynamics {

using hilbert::Complex;
using hilbert::HermitianOperator;
using hilbert::SpectralDecomposition;
using hilbert::StateVector;

// The closed system under study: Hamiltonian, initial state and hbar, with the
// spectral decomposition computed once and cached. Immutable after
// construction; all operations on it are pure.
class EvolutionContext {
 public:
  EvolutionContext(HermitianOperator hamiltonian, StateVector psi0, double hbar,
                   const hilbert::JacobiOptions& opts = {});

  const HermitianOperator& hamiltonian() const { return hamiltonian_; }
  const StateVector& psi0() const { return psi0_; }
  double hbar() const { return hbar_; }
  const SpectralDecomposition& spectral() const { return spectral_; }
  // psi0 expressed in the eigenbasis (V^dagger psi0).
  const std::vector<Complex>& eigenbasis_amplitudes() const { return projections_; }
  std::size_t dim() const { return psi0_.dim(); }

 private:
  HermitianOperator hamiltonian_;
  StateVector psi0_;
  double hbar_;
  SpectralDecomposition spectral_;
  std::vector<Complex> projections_;
};

// z = 1 + <delta_psi(dt)|psi(0)> and the derived gap |z| - Re z, which is
// nonnegative for any complex z up to roundoff.
struct OverlapDiagnostics {
  Complex z;
  double abs_z;
  double re_z;
  double gap;
};

// |psi(t)> = V diag(e^{-i E_k t / hbar}) V^dagger |psi(0)>. Negative t is the
// inverse evolution.
StateVector propagate(const EvolutionContext& ctx, double t);

// Clamp window for the variance radicand: a value in (-1e-14, 0) is roundoff
// and clamps to zero; below that the computation is faulty.
double variance_from_moments(double mean, double second_moment);

// Delta H = (<H^2> - <H>^2)^{1/2} in psi0 (time-independent here, so t=0 is
// as good as any other time).
double energy_variance(const EvolutionContext& ctx);

// <psi0|H^2|psi0>^{1/2}; always >= energy_variance.
double second_moment_root(const EvolutionContext& ctx);

// |psi(dt)> - |psi(0)>, flagged non-physical.
StateVector delta_psi(const EvolutionContext& ctx, double dt);

OverlapDiagnostics overlap_diagnostics(const EvolutionContext& ctx, double dt);

// 2 pi hbar / max|E_k|; nullopt when the spectrum is flat at zero (the state
// is stationary up to a global phase and no time scale exists).
std::optional<double> characteristic_time(const EvolutionContext& ctx);

}  // namespace rqsl::dynamics
