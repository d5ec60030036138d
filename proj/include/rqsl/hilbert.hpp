#pragma once

// Dense complex linear algebra for small Hilbert spaces: state vectors,
// Hermitian operators, spectral decomposition, tensor products.

#include <complex>
#include <cstddef>
#include <vector>

#include "rqsl/errors.hpp"

namespace rqsl::hilbert {

using Complex = std::complex<double>;

// Default tolerances; every entry point that checks an invariant accepts an
// override.
struct Tolerances {
  double hermiticity = 1e-12;  // max |H(i,j) - conj(H(j,i))|
  double unit_norm = 1e-12;    // allowed deviation of a physical state's norm
  double zero_vector = 1e-14;  // smallest norm normalize() accepts
};

// State vector of a fixed dimension. Physical states are unit-norm; difference
// vectors (e.g. psi(t) - psi(0)) carry is_physical() == false and are exempt
// from the unit-norm invariant. Immutable after construction.
class StateVector {
 public:
  // Unit-norm state; throws NonFiniteValue / DimensionMismatch / ZeroVector
  // when amps are unusable, InvalidArgument when the norm is off by more than
  // tol.unit_norm.
  static StateVector physical(std::vector<Complex> amps, const Tolerances& tol = {});
  // Arbitrary-norm vector flagged non-physical.
  static StateVector difference(std::vector<Complex> amps);
  static StateVector basis_state(std::size_t dim, std::size_t index);
  static StateVector zero(std::size_t dim);

  std::size_t dim() const { return amps_.size(); }
  bool is_physical() const { return is_physical_; }
  const std::vector<Complex>& amps() const { return amps_; }
  Complex operator[](std::size_t k) const { return amps_[k]; }
  double norm() const;

 private:
  StateVector(std::vector<Complex> amps, bool physical);

  std::vector<Complex> amps_;
  bool is_physical_;
};

// Componentwise difference, flagged non-physical.
StateVector operator-(const StateVector& a, const StateVector& b);

// Dense Hermitian matrix in energy units, row-major storage. Construction
// validates finiteness and Hermiticity; entries are stored as given.
class HermitianOperator {
 public:
  static HermitianOperator from_entries(std::size_t dim, std::vector<Complex> row_major,
                                        const Tolerances& tol = {});
  static HermitianOperator diagonal(const std::vector<double>& values);
  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator zero(std::size_t dim);

  std::size_t dim() const { return dim_; }
  Complex at(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  const std::vector<Complex>& entries() const { return entries_; }

  std::vector<Complex> apply(const std::vector<Complex>& v) const;  // H v
  double frobenius_norm() const;

 private:
  HermitianOperator(std::size_t dim, std::vector<Complex> entries);

  std::size_t dim_;
  std::vector<Complex> entries_;  // row-major
};

// Eigensystem of a Hermitian operator: H = V diag(eigenvalues) V^dagger with
// orthonormal columns of V. Eigenvalues ascending.
struct SpectralDecomposition {
  std::size_t dim = 0;
  std::vector<double> eigenvalues;
  std::vector<Complex> eigenvectors;  // row-major; column k <-> eigenvalues[k]

  Complex vec(std::size_t row, std::size_t col) const { return eigenvectors[row * dim + col]; }
};

struct JacobiOptions {
  int max_sweeps = 100;
  double offdiag_factor = 1e-14;  // converged when off(H) <= factor * ||H||_F
};

// <a|b> with conjugation on the first argument.
Complex inner_product(const StateVector& a, const StateVector& b);

// Cyclic Jacobi rotations; throws ConvergenceFailure when the sweep cap is
// reached before the off-diagonal norm drops below threshold.
SpectralDecomposition eigendecompose(const HermitianOperator& h, const JacobiOptions& opts = {});

// Kronecker products, row-major with the first factor slowest
// (index = i_a * b.dim + i_b).
StateVector tensor_product_state(const StateVector& a, const StateVector& b);
HermitianOperator tensor_product_operator(const HermitianOperator& a, const HermitianOperator& b);

// Rescale to unit norm; throws ZeroVector below tol.zero_vector.
StateVector normalize(const StateVector& v, const Tolerances& tol = {});

}  // namespace rqsl::hilbert
