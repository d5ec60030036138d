#include "rqsl/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace rqsl::dynamics {

EvolutionContext::EvolutionContext(HermitianOperator hamiltonian, StateVector psi0, double hbar,
                                   const hilbert::JacobiOptions& opts)
    : hamiltonian_(std::move(hamiltonian)), psi0_(std::move(psi0)), hbar_(hbar) {
  if (psi0_.dim() != hamiltonian_.dim())
    throw DimensionMismatch("EvolutionContext: state and Hamiltonian dimensions differ");
  if (!psi0_.is_physical())
    throw InvalidArgument("EvolutionContext: initial state must be physical");
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_))
    throw InvalidArgument("EvolutionContext: hbar must be positive");
  spectral_ = hilbert::eigendecompose(hamiltonian_, opts);

  const std::size_t n = dim();
  projections_.assign(n, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (std::size_t row = 0; row < n; ++row)
      acc += std::conj(spectral_.vec(row, k)) * psi0_[row];
    projections_[k] = acc;
  }
}

StateVector propagate(const EvolutionContext& ctx, double t) {
  if (!std::isfinite(t)) throw InvalidArgument("propagate: t must be finite");
  const std::size_t n = ctx.dim();
  const SpectralDecomposition& sd = ctx.spectral();
  std::vector<Complex> phased(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = -sd.eigenvalues[k] * t / ctx.hbar();
    phased[k] = ctx.eigenbasis_amplitudes()[k] * std::polar(1.0, angle);
  }
  std::vector<Complex> amps(n, Complex(0.0, 0.0));
  for (std::size_t row = 0; row < n; ++row) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) acc += sd.vec(row, k) * phased[k];
    amps[row] = acc;
  }
  return StateVector::physical(std::move(amps));
}

double variance_from_moments(double mean, double second_moment) {
  const double radicand = second_moment - mean * mean;
  if (radicand < -1e-14)
    throw NegativeVariance("energy variance radicand " + std::to_string(radicand) +
                           " below the roundoff window");
  return std::sqrt(std::max(0.0, radicand));
}

namespace {

std::pair<double, double> first_two_moments(const EvolutionContext& ctx) {
  const std::vector<Complex> hv = ctx.hamiltonian().apply(ctx.psi0().amps());
  Complex mean(0.0, 0.0);
  double second = 0.0;
  for (std::size_t k = 0; k < ctx.dim(); ++k) {
    mean += std::conj(ctx.psi0()[k]) * hv[k];
    second += std::norm(hv[k]);  // <H psi|H psi> = <H^2>
  }
  return {mean.real(), second};
}

}  // namespace

double energy_variance(const EvolutionContext& ctx) {
  const auto [mean, second] = first_two_moments(ctx);
  return variance_from_moments(mean, second);
}

double second_moment_root(const EvolutionContext& ctx) {
  return std::sqrt(first_two_moments(ctx).second);
}

StateVector delta_psi(const EvolutionContext& ctx, double dt) {
  return propagate(ctx, dt) - ctx.psi0();
}

OverlapDiagnostics overlap_diagnostics(const EvolutionContext& ctx, double dt) {
  const Complex z = 1.0 + hilbert::inner_product(delta_psi(ctx, dt), ctx.psi0());
  OverlapDiagnostics diag;
  diag.z = z;
  diag.abs_z = std::abs(z);
  diag.re_z = z.real();
  diag.gap = diag.abs_z - diag.re_z;
  if (diag.gap < -1e-12)
    throw Error("overlap_diagnostics: |z| - Re z = " + std::to_string(diag.gap) +
                " breaches the nonnegativity slack");
  return diag;
}

std::optional<double> characteristic_time(const EvolutionContext& ctx) {
  double max_abs = 0.0;
  for (double e : ctx.spectral().eigenvalues) max_abs = std::max(max_abs, std::abs(e));
  const double scale = std::max(1.0, ctx.hamiltonian().frobenius_norm());
  if (max_abs <= 1e-14 * scale) return std::nullopt;
  return 2.0 * std::numbers::pi * ctx.hbar() / max_abs;
}

}  // namespace rqsl::dynamics
