#include "rqsl/preclusion.hpp"

#include <cmath>
#include <utility>

#include "rqsl/errors.hpp"

namespace rqsl::preclusion {

using hilbert::Complex;

namespace {

constexpr double kPartitionTol = 1e-10;

std::vector<Complex> multiply(std::size_t n, const std::vector<Complex>& a,
                              const std::vector<Complex>& b) {
  std::vector<Complex> c(n * n, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a[i * n + k];
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  return c;
}

double frobenius(const std::vector<Complex>& a) {
  double sum = 0.0;
  for (const Complex& x : a) sum += std::norm(x);
  return std::sqrt(sum);
}

}  // namespace

std::size_t PartitionSpec::dim() const {
  return entries.empty() ? 0 : entries.front().projector.dim();
}

void PartitionSpec::validate() const {
  if (entries.empty()) throw InvalidPartition("partition has no projectors");
  const std::size_t n = dim();
  for (const Entry& e : entries)
    if (e.projector.dim() != n)
      throw InvalidPartition("projector '" + e.label + "' has mismatched dimension");

  std::vector<Complex> sum(n * n, Complex(0.0, 0.0));
  for (const Entry& e : entries) {
    const std::vector<Complex>& p = e.projector.entries();
    std::vector<Complex> square = multiply(n, p, p);
    for (std::size_t k = 0; k < n * n; ++k) square[k] -= p[k];
    if (frobenius(square) > kPartitionTol)
      throw InvalidPartition("projector '" + e.label + "' is not idempotent");
    for (std::size_t k = 0; k < n * n; ++k) sum[k] += p[k];
  }
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const auto cross =
          multiply(n, entries[i].projector.entries(), entries[j].projector.entries());
      if (frobenius(cross) > kPartitionTol)
        throw InvalidPartition("projectors '" + entries[i].label + "' and '" + entries[j].label +
                               "' are not orthogonal");
    }
  for (std::size_t k = 0; k < n; ++k) sum[k * n + k] -= 1.0;
  if (frobenius(sum) > kPartitionTol)
    throw InvalidPartition("projectors do not sum to the identity");
}

std::vector<Branch> branch_decompose(const StateVector& state, const PartitionSpec& partition) {
  partition.validate();
  if (state.dim() != partition.dim())
    throw DimensionMismatch("branch_decompose: state and partition dimensions differ");
  std::vector<Branch> branches;
  branches.reserve(partition.entries.size());
  for (const PartitionSpec::Entry& e : partition.entries) {
    StateVector component = StateVector::difference(e.projector.apply(state.amps()));
    const double norm = component.norm();
    branches.push_back(Branch{e.label, std::move(component), norm});
  }
  return branches;
}

PreclusionResult preclude(const std::vector<Branch>& branches, double norm_min,
                          bool renormalize) {
  if (branches.empty()) throw InvalidArgument("preclude: no branches given");
  if (!(norm_min >= 0.0) || !std::isfinite(norm_min))
    throw InvalidArgument("preclude: norm_min must be finite and nonnegative");
  const std::size_t n = branches.front().component.dim();
  for (const Branch& b : branches) {
    if (b.component.dim() != n)
      throw DimensionMismatch("preclude: branch '" + b.label + "' has mismatched dimension");
    if (std::abs(b.norm - b.component.norm()) > 1e-12)
      throw InvalidArgument("preclude: branch '" + b.label +
                            "' carries a norm field inconsistent with its component");
  }

  PreclusionResult result;
  std::vector<Complex> amps(n, Complex(0.0, 0.0));
  bool any_survived = false;
  for (const Branch& b : branches) {
    if (b.norm >= norm_min) {
      any_survived = true;
      for (std::size_t k = 0; k < n; ++k) amps[k] += b.component[k];
    } else {
      result.report.removed_labels.push_back(b.label);
    }
  }

  if (!any_survived) {
    result.state = StateVector::zero(n);
    result.report.survived_norm = 0.0;
    result.report.all_precluded = true;
    return result;
  }

  StateVector survived = StateVector::difference(std::move(amps));
  result.report.survived_norm = survived.norm();
  if (renormalize && result.report.survived_norm > 1e-14)
    result.state = hilbert::normalize(survived);
  else
    result.state = std::move(survived);
  return result;
}

}  // namespace rqsl::preclusion
