#pragma once

// Reference section chi(t), its length functional, the reverse-speed-limit
// inequality T <= hbar * length / DeltaH, and the minimum-norm bound
// norm_lim = dt_min * DeltaH / hbar with its verification report.

#include "rqsl/dynamics.hpp"

namespace rqsl::bounds {

using dynamics::EvolutionContext;
using hilbert::StateVector;

inline constexpr double kOverlapFloor = 1e-10;
inline constexpr double kTolReport = 1e-6;
inline constexpr double kRegimeFraction = 1e-2;

struct QuadratureConfig {
  double abs_tol = 1e-8;
  int max_depth = 40;
  // Finite-difference step for the chi derivative, as a fraction of the
  // characteristic time.
  double fd_step_fraction = 1e-6;

  void validate() const;
};

enum class BoundVerdict { Satisfied, Violated, ZeroVariance };

struct BoundReport {
  double T = 0.0;
  double length = 0.0;
  double delta_h = 0.0;
  double rqsl_upper_bound = 0.0;
  double margin = 0.0;  // rqsl_upper_bound - T
  bool satisfied = false;
  BoundVerdict verdict = BoundVerdict::Violated;
};

struct NormLimitReport {
  double dt_min = 0.0;
  double delta_h = 0.0;
  double norm_lim = 0.0;       // dt_min * delta_h / hbar
  double exact_norm = 0.0;     // ||psi(dt_min) - psi(0)||
  double hsu_estimate = 0.0;   // dt_min * <H^2>^{1/2} / hbar, always >= norm_lim
  bool regime_ok = false;      // dt_min <= regime_fraction * characteristic time
  bool satisfied = false;
};

// chi(t) = (<psi(t)|psi(0)> / |<psi(t)|psi(0)>|) |psi(t)>, the phase-anchored
// representative whose overlap with psi(0) is real and nonnegative. Undefined
// when the overlap magnitude falls below overlap_floor.
StateVector reference_section(const EvolutionContext& ctx, double t,
                              double overlap_floor = kOverlapFloor);

// Integral of ||d chi/dt|| over [0, T] by adaptive Simpson quadrature; the
// derivative uses a central difference with one Richardson refinement. A probe
// grid of 65 points guards against overlap zero crossings before any
// subdivision starts (magnitude floor plus a direction-reversal check between
// neighbors); a crossing between probe points still surfaces as
// OrthogonalOverlap from the integrand's own stencil.
double reference_section_length(const EvolutionContext& ctx, double T,
                                const QuadratureConfig& q = {});

// (2 - 2|<psi(dt)|psi(0)>|)^{1/2}: the small-step form of the length, equal to
// ||delta_psi|| exactly when the overlap is real.
double discrete_length(const EvolutionContext& ctx, double dt);

// Checks T <= hbar * length / DeltaH + tol_report. A variance at roundoff
// scale makes the bound vacuous; that comes back as the ZeroVariance verdict
// with an infinite upper bound, not as a failure.
BoundReport rqsl_check(const EvolutionContext& ctx, double T,
                       const QuadratureConfig& q = {}, double tol_report = kTolReport);

// dt_min * delta_h / hbar.
double norm_limit(double delta_h, double dt_min, double hbar);

// Full report on ||delta_psi(dt_min)|| >= norm_lim. The inequality holds in
// the small-step regime dt_min <= regime_fraction * characteristic time; the
// report flags whether that regime applies.
NormLimitReport verify_norm_inequality(const EvolutionContext& ctx, double dt_min,
                                       double regime_fraction = kRegimeFraction,
                                       double tol_report = kTolReport);

}  // namespace rqsl::bounds
