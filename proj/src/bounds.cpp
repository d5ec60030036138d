#include "rqsl/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rqsl/errors.hpp"

namespace rqsl::bounds {

using dynamics::propagate;
using hilbert::Complex;
using hilbert::inner_product;

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
    throw InvalidArgument("QuadratureConfig: abs_tol must be positive");
  if (max_depth < 1) throw InvalidArgument("QuadratureConfig: max_depth must be at least 1");
  if (!(fd_step_fraction > 0.0) || !(fd_step_fraction < 1e-2))
    throw InvalidArgument("QuadratureConfig: fd_step_fraction must lie in (0, 1e-2)");
}

namespace {

Complex overlap_with_initial(const EvolutionContext& ctx, double t) {
  return inner_product(propagate(ctx, t), ctx.psi0());
}

struct AnchoredState {
  std::vector<Complex> amps;
  Complex overlap;
};

AnchoredState anchored_state(const EvolutionContext& ctx, double t, double overlap_floor) {
  const StateVector psi_t = propagate(ctx, t);
  const Complex overlap = inner_product(psi_t, ctx.psi0());
  const double mag = std::abs(overlap);
  if (mag <= overlap_floor)
    throw OrthogonalOverlap("reference section undefined at t = " + std::to_string(t) +
                            ": overlap magnitude " + std::to_string(mag));
  const Complex phase = overlap / mag;
  std::vector<Complex> amps(ctx.dim());
  for (std::size_t k = 0; k < ctx.dim(); ++k) amps[k] = phase * psi_t[k];
  return {std::move(amps), overlap};
}

std::vector<Complex> section_amps(const EvolutionContext& ctx, double t, double overlap_floor) {
  return anchored_state(ctx, t, overlap_floor).amps;
}

// The overlap traces a smooth curve in the complex plane. A direction turn of
// 90 degrees or more between two samples means either a fast benign dip in
// magnitude or a pass through zero; bisection tells them apart, because a
// genuine crossing drags the magnitude below the floor as the interval
// shrinks while a dip resolves into sub-90-degree turns. The depth cap only
// fires for turns that never resolve (a jump discontinuity at the working
// precision), which is the crossing case again.
void verify_overlap_continuity(const EvolutionContext& ctx, double ta, Complex za, double tb,
                               Complex zb, int depth = 0) {
  if ((std::conj(za) * zb).real() > 0.0) return;
  if (depth >= 48)
    throw OrthogonalOverlap("overlap direction reverses near t = " + std::to_string(0.5 * (ta + tb)) +
                            ": zero crossing inside the interval");
  const double tm = 0.5 * (ta + tb);
  const Complex zm = overlap_with_initial(ctx, tm);
  if (std::abs(zm) <= kOverlapFloor)
    throw OrthogonalOverlap("overlap magnitude at t = " + std::to_string(tm) +
                            " is below the floor: zero crossing inside the interval");
  verify_overlap_continuity(ctx, ta, za, tm, zm, depth + 1);
  verify_overlap_continuity(ctx, tm, zm, tb, zb, depth + 1);
}

// ||d chi/dt|| by central differences, refined once by Richardson
// extrapolation: (4 D(h/2) - D(h)) / 3 cancels the O(h^2) term.
class SectionSpeed {
 public:
  SectionSpeed(const EvolutionContext& ctx, double h) : ctx_(ctx), h_(h) {}

  double operator()(double t) const {
    const auto wide = difference(t, h_);
    const auto narrow = difference(t, 0.5 * h_);
    double sum = 0.0;
    for (std::size_t k = 0; k < wide.size(); ++k)
      sum += std::norm((4.0 * narrow[k] - wide[k]) / 3.0);
    return std::sqrt(sum);
  }

 private:
  std::vector<Complex> difference(double t, double h) const {
    const auto plus = anchored_state(ctx_, t + h, kOverlapFloor);
    const auto minus = anchored_state(ctx_, t - h, kOverlapFloor);
    verify_overlap_continuity(ctx_, t - h, minus.overlap, t + h, plus.overlap);
    std::vector<Complex> d(plus.amps.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = (plus.amps[k] - minus.amps[k]) / (2.0 * h);
    return d;
  }

  const EvolutionContext& ctx_;
  double h_;
};

double simpson(double fa, double fm, double fb, double width) {
  return width / 6.0 * (fa + 4.0 * fm + fb);
}

// Adaptive Simpson with the usual 15x acceptance test. A few levels of
// subdivision are forced so a symmetric integrand cannot fake convergence on
// the first probe.
double adapt(const SectionSpeed& f, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth >= 4 && std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= max_depth)
    throw DepthExceeded("quadrature subdivision limit reached on [" + std::to_string(a) + ", " +
                        std::to_string(b) + "]");
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

StateVector reference_section(const EvolutionContext& ctx, double t, double overlap_floor) {
  if (!std::isfinite(t)) throw InvalidArgument("reference_section: t must be finite");
  return StateVector::physical(section_amps(ctx, t, overlap_floor));
}

double reference_section_length(const EvolutionContext& ctx, double T, const QuadratureConfig& q) {
  q.validate();
  if (!std::isfinite(T) || T < 0.0)
    throw InvalidArgument("reference_section_length: T must be finite and nonnegative");
  if (T == 0.0) return 0.0;

  constexpr int kProbePoints = 65;
  Complex previous{1.0, 0.0};
  for (int i = 0; i < kProbePoints; ++i) {
    const double t = T * static_cast<double>(i) / (kProbePoints - 1);
    const Complex z = overlap_with_initial(ctx, t);
    if (std::abs(z) <= kOverlapFloor)
      throw OrthogonalOverlap("overlap magnitude at probe point t = " + std::to_string(t) +
                              " is below the floor; length undefined on [0, T]");
    if (i > 0) {
      const double t_prev = T * static_cast<double>(i - 1) / (kProbePoints - 1);
      verify_overlap_continuity(ctx, t_prev, previous, t, z);
    }
    previous = z;
  }

  const auto t_char = dynamics::characteristic_time(ctx);
  const double h = q.fd_step_fraction * (t_char ? *t_char : T);
  const SectionSpeed f(ctx, h);
  const double fa = f(0.0);
  const double fm = f(0.5 * T);
  const double fb = f(T);
  return adapt(f, 0.0, T, fa, fm, fb, simpson(fa, fm, fb, T), q.abs_tol, 0, q.max_depth);
}

double discrete_length(const EvolutionContext& ctx, double dt) {
  if (!std::isfinite(dt) || dt < 0.0)
    throw InvalidArgument("discrete_length: dt must be finite and nonnegative");
  if (dt == 0.0) return 0.0;
  const double abs_overlap = std::abs(overlap_with_initial(ctx, dt));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * abs_overlap));
}

BoundReport rqsl_check(const EvolutionContext& ctx, double T, const QuadratureConfig& q,
                       double tol_report) {
  if (!std::isfinite(T) || T <= 0.0) throw InvalidArgument("rqsl_check: T must be positive");
  BoundReport report;
  report.T = T;
  report.delta_h = dynamics::energy_variance(ctx);
  report.length = reference_section_length(ctx, T, q);
  if (report.delta_h <= 1e-14) {
    report.rqsl_upper_bound = std::numeric_limits<double>::infinity();
    report.margin = std::numeric_limits<double>::infinity();
    report.satisfied = true;
    report.verdict = BoundVerdict::ZeroVariance;
    return report;
  }
  report.rqsl_upper_bound = ctx.hbar() * report.length / report.delta_h;
  report.margin = report.rqsl_upper_bound - T;
  report.satisfied = report.margin >= -tol_report;
  report.verdict = report.satisfied ? BoundVerdict::Satisfied : BoundVerdict::Violated;
  return report;
}

double norm_limit(double delta_h, double dt_min, double hbar) {
  if (!std::isfinite(delta_h) || delta_h < 0.0)
    throw InvalidArgument("norm_limit: delta_h must be finite and nonnegative");
  if (!std::isfinite(dt_min) || dt_min <= 0.0)
    throw InvalidArgument("norm_limit: dt_min must be positive");
  if (!std::isfinite(hbar) || hbar <= 0.0)
    throw InvalidArgument("norm_limit: hbar must be positive");
  return dt_min * delta_h / hbar;
}

NormLimitReport verify_norm_inequality(const EvolutionContext& ctx, double dt_min,
                                       double regime_fraction, double tol_report) {
  if (!std::isfinite(dt_min) || dt_min <= 0.0)
    throw InvalidArgument("verify_norm_inequality: dt_min must be positive");
  if (!std::isfinite(regime_fraction) || regime_fraction <= 0.0)
    throw InvalidArgument("verify_norm_inequality: regime_fraction must be positive");
  NormLimitReport report;
  report.dt_min = dt_min;
  report.delta_h = dynamics::energy_variance(ctx);
  report.norm_lim = dt_min * report.delta_h / ctx.hbar();
  report.exact_norm = dynamics::delta_psi(ctx, dt_min).norm();
  report.hsu_estimate = dt_min * dynamics::second_moment_root(ctx) / ctx.hbar();
  const auto t_char = dynamics::characteristic_time(ctx);
  report.regime_ok = !t_char || dt_min <= regime_fraction * *t_char;
  report.satisfied = report.exact_norm >= report.norm_lim - tol_report;
  return report;
}

}  // namespace rqsl::bounds
