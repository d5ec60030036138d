#include "rqsl/models.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "rqsl/errors.hpp"

namespace rqsl::models {

namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

void check_amplitudes(Complex c1, Complex c2, const char* who) {
  if (!finite(c1) || !finite(c2))
    throw NonFiniteValue(std::string(who) + ": amplitudes must be finite");
  const double total = std::norm(c1) + std::norm(c2);
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidArgument(std::string(who) + ": |c1|^2 + |c2|^2 = " + std::to_string(total) +
                          ", expected 1");
}

void check_hbar(double hbar, const char* who) {
  if (!(hbar > 0.0) || !std::isfinite(hbar))
    throw InvalidArgument(std::string(who) + ": hbar must be positive");
}

void check_time(double t, const char* who) {
  if (!std::isfinite(t)) throw InvalidArgument(std::string(who) + ": time must be finite");
}

}  // namespace

void TwoStateModel::validate() const {
  check_amplitudes(c1, c2, "TwoStateModel");
  if (!std::isfinite(e1) || !std::isfinite(e2))
    throw NonFiniteValue("TwoStateModel: energies must be finite");
}

void DetectorModel::validate() const {
  check_amplitudes(c1, c2, "DetectorModel");
  if (!std::isfinite(kappa)) throw NonFiniteValue("DetectorModel: kappa must be finite");
}

void EnsembleSpec::validate() const {
  if (dim < 2 || dim > 16) throw InvalidArgument("EnsembleSpec: dim must lie in [2, 16]");
  if (count == 0) throw InvalidArgument("EnsembleSpec: count must be positive");
  if (!(energy_scale > 0.0) || !std::isfinite(energy_scale))
    throw InvalidArgument("EnsembleSpec: energy_scale must be positive");
}

EvolutionContext two_state_context(const TwoStateModel& m, double hbar) {
  m.validate();
  return EvolutionContext(HermitianOperator::diagonal({m.e1, m.e2}),
                          StateVector::physical({m.c1, m.c2}), hbar);
}

double two_state_exact_norm(const TwoStateModel& m, double hbar, double dt) {
  m.validate();
  check_hbar(hbar, "two_state_exact_norm");
  check_time(dt, "two_state_exact_norm");
  const double s1 = std::sin(0.5 * m.e1 * dt / hbar);
  const double s2 = std::sin(0.5 * m.e2 * dt / hbar);
  return 2.0 * std::sqrt(std::norm(m.c1) * s1 * s1 + std::norm(m.c2) * s2 * s2);
}

double two_state_norm_limit(const TwoStateModel& m, double hbar, double dt_min) {
  m.validate();
  check_hbar(hbar, "two_state_norm_limit");
  if (!(dt_min > 0.0) || !std::isfinite(dt_min))
    throw InvalidArgument("two_state_norm_limit: dt_min must be positive");
  const double p1 = std::norm(m.c1);
  const double p2 = std::norm(m.c2);
  const double mean = p1 * m.e1 + p2 * m.e2;
  const double second = p1 * m.e1 * m.e1 + p2 * m.e2 * m.e2;
  return dynamics::variance_from_moments(mean, second) * dt_min / hbar;
}

EvolutionContext detector_context(const DetectorModel& m, double hbar) {
  m.validate();
  const HermitianOperator projector_s2 =
      HermitianOperator::from_entries(2, {0.0, 0.0, 0.0, 1.0});
  const HermitianOperator observer = HermitianOperator::from_entries(
      2, {Complex(0.0, 0.0), Complex(0.0, -m.kappa), Complex(0.0, m.kappa), Complex(0.0, 0.0)});
  const HermitianOperator h = hilbert::tensor_product_operator(projector_s2, observer);
  const StateVector psi0 = hilbert::tensor_product_state(
      StateVector::physical({m.c1, m.c2}), StateVector::basis_state(2, 0));
  return EvolutionContext(h, psi0, hbar);
}

StateVector detector_exact_state(const DetectorModel& m, double hbar, double t) {
  m.validate();
  check_hbar(hbar, "detector_exact_state");
  check_time(t, "detector_exact_state");
  const double angle = m.kappa * t / hbar;
  return StateVector::physical(
      {m.c1, Complex(0.0, 0.0), m.c2 * std::cos(angle), m.c2 * std::sin(angle)});
}

double detector_exact_norm(const DetectorModel& m, double hbar, double t) {
  m.validate();
  check_hbar(hbar, "detector_exact_norm");
  check_time(t, "detector_exact_norm");
  return 2.0 * std::abs(m.c2) * std::abs(std::sin(0.5 * m.kappa * t / hbar));
}

double detector_norm_limit(const DetectorModel& m, double hbar, double dt_min) {
  m.validate();
  check_hbar(hbar, "detector_norm_limit");
  if (!(dt_min > 0.0) || !std::isfinite(dt_min))
    throw InvalidArgument("detector_norm_limit: dt_min must be positive");
  return std::abs(m.c2) * std::abs(m.kappa) * dt_min / hbar;
}

double measurement_time(const DetectorModel& m, double hbar) {
  m.validate();
  check_hbar(hbar, "measurement_time");
  if (!(m.kappa > 0.0))
    throw NonPositiveKappa("measurement_time: kappa = " + std::to_string(m.kappa) +
                           ", need kappa > 0");
  return 0.5 * std::numbers::pi * hbar / m.kappa;
}

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kMatrixStream = 0;
constexpr std::uint64_t kStateStream = 1;

std::uint64_t mix_word(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  std::uint64_t x = mix_word(seed + kGolden);
  x = mix_word(x ^ (index + kGolden));
  return mix_word(x ^ (stream + kGolden));
}

// Box-Muller over 53-bit uniforms from mt19937_64. The engine sequence is
// pinned by the standard; sqrt/log/sin/cos follow the platform libm, so
// cross-platform agreement is to the last ulp rather than bitwise.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;          // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Complex next_complex() {
    const double re = next();
    const double im = next();
    return {re, im};
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

StateVector random_state(std::size_t dim, std::uint64_t seed, std::uint64_t index) {
  if (dim == 0) throw InvalidArgument("random_state: dim must be positive");
  GaussianStream g(derived_seed(seed, index, kStateStream));
  std::vector<Complex> amps(dim);
  for (auto& a : amps) a = g.next_complex();
  return hilbert::normalize(StateVector::difference(std::move(amps)));
}

HermitianOperator random_hermitian(std::size_t dim, std::uint64_t seed, std::uint64_t index,
                                   double energy_scale) {
  if (dim == 0) throw InvalidArgument("random_hermitian: dim must be positive");
  if (!(energy_scale > 0.0) || !std::isfinite(energy_scale))
    throw InvalidArgument("random_hermitian: energy_scale must be positive");
  GaussianStream g(derived_seed(seed, index, kMatrixStream));
  std::vector<Complex> a(dim * dim);
  for (auto& entry : a) entry = g.next_complex();
  std::vector<Complex> entries(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      entries[i * dim + j] = 0.5 * energy_scale * (a[i * dim + j] + std::conj(a[j * dim + i]));
  return HermitianOperator::from_entries(dim, std::move(entries));
}

EvolutionContext random_system(const EnsembleSpec& spec, std::uint64_t index, double hbar) {
  spec.validate();
  return EvolutionContext(random_hermitian(spec.dim, spec.seed, index, spec.energy_scale),
                          random_state(spec.dim, spec.seed, index), hbar);
}

}  // namespace rqsl::models
