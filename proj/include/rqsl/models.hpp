#pragma once

// Closed-form model systems (a two-level system and a system-observer
// detector) with exact evolution formulas, plus seeded random ensembles for
// property verification.

#include <cstdint>

#include "rqsl/dynamics.hpp"

namespace rqsl::models {

using dynamics::EvolutionContext;
using hilbert::Complex;
using hilbert::HermitianOperator;
using hilbert::StateVector;

// Two-level system with Hamiltonian diag(e1, e2) and initial state
// c1|S1> + c2|S2>.
struct TwoStateModel {
  Complex c1{1.0, 0.0};
  Complex c2{0.0, 0.0};
  double e1 = 0.0;
  double e2 = 0.0;

  void validate() const;
};

// System-observer pair: the observer rotates from |O1> toward |O2> at rate
// kappa/hbar precisely on the |S2> component. Initial state
// (c1|S1> + c2|S2>) tensor |O1>.
struct DetectorModel {
  Complex c1{1.0, 0.0};
  Complex c2{0.0, 0.0};
  double kappa = 1.0;

  void validate() const;
};

// Seeded ensemble of random Hermitian systems with unit random initial states.
struct EnsembleSpec {
  std::size_t dim = 4;
  std::uint64_t seed = 0;
  std::size_t count = 1;
  double energy_scale = 1.0;

  void validate() const;
};

EvolutionContext two_state_context(const TwoStateModel& m, double hbar);

// ||psi(dt) - psi(0)|| in closed form:
// 2 (|c1|^2 sin^2(e1 dt / 2 hbar) + |c2|^2 sin^2(e2 dt / 2 hbar))^{1/2},
// the numerically stable rewrite of (2 - 2 sum |c_k|^2 cos(e_k dt/hbar))^{1/2}.
double two_state_exact_norm(const TwoStateModel& m, double hbar, double dt);

// dt_min * DeltaH / hbar with DeltaH from the two-point spectrum.
double two_state_norm_limit(const TwoStateModel& m, double hbar, double dt_min);

EvolutionContext detector_context(const DetectorModel& m, double hbar);

// c1|S1 O1> + c2 cos(kappa t/hbar)|S2 O1> + c2 sin(kappa t/hbar)|S2 O2>.
StateVector detector_exact_state(const DetectorModel& m, double hbar, double t);

// |c2| (2 - 2 cos(kappa t/hbar))^{1/2} = 2 |c2 sin(kappa t / 2 hbar)|.
double detector_exact_norm(const DetectorModel& m, double hbar, double t);

// |c2| |kappa| dt_min / hbar; |kappa| keeps it identical to the
// energy-variance pipeline for either sign of the coupling.
double detector_norm_limit(const DetectorModel& m, double hbar, double dt_min);

// pi hbar / (2 kappa), the time at which the observer has fully flipped on
// the |S2> component. Requires kappa > 0.
double measurement_time(const DetectorModel& m, double hbar);

// The random draws are deterministic functions of (seed, index) with no
// sequential generator state, so samples can be produced in any order or in
// parallel. Algorithm: a splitmix64-style finalizer folds (seed, index,
// stream) into an mt19937_64 seed; Gaussians come from Box-Muller over 53-bit
// uniforms. Matrix and state use separate streams.
StateVector random_state(std::size_t dim, std::uint64_t seed, std::uint64_t index);
HermitianOperator random_hermitian(std::size_t dim, std::uint64_t seed, std::uint64_t index,
                                   double energy_scale);
EvolutionContext random_system(const EnsembleSpec& spec, std::uint64_t index, double hbar = 1.0);

}  // namespace rqsl::models
