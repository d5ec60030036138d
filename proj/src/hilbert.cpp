#include "rqsl/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace rqsl::hilbert {

namespace {

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(const std::vector<Complex>& values, const char* what) {
  for (const Complex& z : values) {
    if (!finite(z)) throw NonFiniteValue(std::string(what) + ": non-finite entry");
  }
}

double norm_of(const std::vector<Complex>& amps) {
  double sum = 0.0;
  for (const Complex& z : amps) sum += std::norm(z);
  return std::sqrt(sum);
}

}  // namespace

StateVector::StateVector(std::vector<Complex> amps, bool physical)
    : amps_(std::move(amps)), is_physical_(physical) {}

StateVector StateVector::physical(std::vector<Complex> amps, const Tolerances& tol) {
  if (amps.empty()) throw DimensionMismatch("StateVector: dimension must be positive");
  require_finite(amps, "StateVector");
  const double n = norm_of(amps);
  if (n <= tol.zero_vector) throw ZeroVector("StateVector: physical state has zero norm");
  if (std::abs(n - 1.0) > tol.unit_norm)
    throw InvalidArgument("StateVector: physical state norm deviates from 1 by " +
                          std::to_string(std::abs(n - 1.0)));
  return StateVector(std::move(amps), true);
}

StateVector StateVector::difference(std::vector<Complex> amps) {
  if (amps.empty()) throw DimensionMismatch("StateVector: dimension must be positive");
  require_finite(amps, "StateVector");
  return StateVector(std::move(amps), false);
}

StateVector StateVector::basis_state(std::size_t dim, std::size_t index) {
  if (dim == 0) throw DimensionMismatch("basis_state: dimension must be positive");
  if (index >= dim) throw DimensionMismatch("basis_state: index out of range");
  std::vector<Complex> amps(dim, Complex(0.0, 0.0));
  amps[index] = Complex(1.0, 0.0);
  return StateVector(std::move(amps), true);
}

StateVector StateVector::zero(std::size_t dim) {
  if (dim == 0) throw DimensionMismatch("zero: dimension must be positive");
  return StateVector(std::vector<Complex>(dim, Complex(0.0, 0.0)), false);
}

double StateVector::norm() const { return norm_of(amps_); }

StateVector operator-(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("StateVector difference: dimensions differ");
  std::vector<Complex> amps(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) amps[k] = a[k] - b[k];
  return StateVector::difference(std::move(amps));
}

HermitianOperator::HermitianOperator(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {}

HermitianOperator HermitianOperator::from_entries(std::size_t dim, std::vector<Complex> row_major,
                                                  const Tolerances& tol) {
  if (dim == 0) throw DimensionMismatch("HermitianOperator: dimension must be positive");
  if (row_major.size() != dim * dim)
    throw DimensionMismatch("HermitianOperator: entry count does not match dim^2");
  require_finite(row_major, "HermitianOperator");
  double max_asym = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j)
      max_asym = std::max(max_asym,
                          std::abs(row_major[i * dim + j] - std::conj(row_major[j * dim + i])));
  if (max_asym > tol.hermiticity)
    throw NotHermitian("HermitianOperator: max |H(i,j) - conj(H(j,i))| = " +
                       std::to_string(max_asym));
  return HermitianOperator(dim, std::move(row_major));
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& values) {
  const std::size_t dim = values.size();
  if (dim == 0) throw DimensionMismatch("HermitianOperator: dimension must be positive");
  std::vector<Complex> entries(dim * dim, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < dim; ++i) {
    if (!std::isfinite(values[i])) throw NonFiniteValue("HermitianOperator: non-finite entry");
    entries[i * dim + i] = Complex(values[i], 0.0);
  }
  return HermitianOperator(dim, std::move(entries));
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  return diagonal(std::vector<double>(dim, 1.0));
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  return diagonal(std::vector<double>(dim, 0.0));
}

std::vector<Complex> HermitianOperator::apply(const std::vector<Complex>& v) const {
  if (v.size() != dim_) throw DimensionMismatch("HermitianOperator::apply: dimensions differ");
  std::vector<Complex> out(dim_, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < dim_; ++i) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < dim_; ++j) acc += entries_[i * dim_ + j] * v[j];
    out[i] = acc;
  }
  return out;
}

double HermitianOperator::frobenius_norm() const {
  double sum = 0.0;
  for (const Complex& z : entries_) sum += std::norm(z);
  return std::sqrt(sum);
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("inner_product: dimensions differ");
  Complex acc(0.0, 0.0);
  for (std::size_t k = 0; k < a.dim(); ++k) acc += std::conj(a[k]) * b[k];
  return acc;
}

namespace {

// Sum of |off-diagonal|^2, upper triangle doubled.
double offdiag_sq(const std::vector<Complex>& a, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sum += 2.0 * std::norm(a[i * n + j]);
  return sum;
}

}  // namespace

SpectralDecomposition eigendecompose(const HermitianOperator& h, const JacobiOptions& opts) {
  const std::size_t n = h.dim();

  // Work on the exactly Hermitian part; construction allows |asymmetry| up to
  // the tolerance.
  std::vector<Complex> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a[i * n + j] = 0.5 * (h.at(i, j) + std::conj(h.at(j, i)));

  std::vector<Complex> v(n * n, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = Complex(1.0, 0.0);

  const double hnorm = h.frobenius_norm();
  const double threshold = opts.offdiag_factor * hnorm;

  bool converged = std::sqrt(offdiag_sq(a, n)) <= threshold;
  for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a[p * n + q];
        const double r = std::abs(apq);
        if (r == 0.0) continue;

        // Unitary plane rotation G on columns (p,q): the phase of a_pq is
        // absorbed first, then a real Jacobi rotation zeroes the pair.
        //   G_pp = c, G_pq = s, G_qp = -s e^{-i phi}, G_qq = c e^{-i phi}
        const Complex phase = apq / r;  // e^{i phi}
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = a[k * n + p];
          const Complex akq = a[k * n + q];
          a[k * n + p] = c * akp + gqp * akq;
          a[k * n + q] = s * akp + gqq * akq;
          a[p * n + k] = std::conj(a[k * n + p]);
          a[q * n + k] = std::conj(a[k * n + q]);
        }
        a[p * n + p] = Complex(app - t * r, 0.0);
        a[q * n + q] = Complex(aqq + t * r, 0.0);
        a[p * n + q] = Complex(0.0, 0.0);
        a[q * n + p] = Complex(0.0, 0.0);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v[k * n + p];
          const Complex vkq = v[k * n + q];
          v[k * n + p] = c * vkp + gqp * vkq;
          v[k * n + q] = s * vkp + gqq * vkq;
        }
      }
    }
    converged = std::sqrt(offdiag_sq(a, n)) <= threshold;
  }
  if (!converged)
    throw ConvergenceFailure("eigendecompose: sweep cap reached at " +
                             std::to_string(opts.max_sweeps));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a[i * n + i].real() < a[j * n + j].real(); });

  SpectralDecomposition out;
  out.dim = n;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a[order[k] * n + order[k]].real();
    for (std::size_t row = 0; row < n; ++row) out.eigenvectors[row * n + k] = v[row * n + order[k]];
  }
  return out;
}

StateVector tensor_product_state(const StateVector& a, const StateVector& b) {
  std::vector<Complex> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
  if (a.is_physical() && b.is_physical()) return StateVector::physical(std::move(amps));
  return StateVector::difference(std::move(amps));
}

HermitianOperator tensor_product_operator(const HermitianOperator& a, const HermitianOperator& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  const std::size_t n = na * nb;
  std::vector<Complex> entries(n * n);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = 0; k < na; ++k)
        for (std::size_t l = 0; l < nb; ++l)
          entries[(i * nb + j) * n + (k * nb + l)] = a.at(i, k) * b.at(j, l);
  return HermitianOperator::from_entries(n, std::move(entries));
}

StateVector normalize(const StateVector& v, const Tolerances& tol) {
  const double n = v.norm();
  if (n <= tol.zero_vector) throw ZeroVector("normalize: vector norm below threshold");
  std::vector<Complex> amps(v.dim());
  for (std::size_t k = 0; k < v.dim(); ++k) amps[k] = v[k] / n;
  return StateVector::physical(std::move(amps), tol);
}

}  // namespace rqsl::hilbert
