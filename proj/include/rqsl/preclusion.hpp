#pragma once

// Branch decomposition of a state against an orthogonal projector partition,
// and removal of branches whose norm falls below a minimum threshold.

#include <string>
#include <vector>

#include "rqsl/hilbert.hpp"

namespace rqsl::preclusion {

using hilbert::HermitianOperator;
using hilbert::StateVector;

// One projected component P_k |psi>. The component is non-physical in general;
// norm mirrors ||component||.
struct Branch {
  std::string label;
  StateVector component = StateVector::zero(1);
  double norm = 0.0;
};

// Ordered list of labeled orthogonal projectors. Valid when every projector is
// idempotent, each pair is mutually orthogonal, and the sum is the identity,
// all to Frobenius norm 1e-10.
struct PartitionSpec {
  struct Entry {
    std::string label;
    HermitianOperator projector;
  };

  std::vector<Entry> entries;

  std::size_t dim() const;
  void validate() const;  // throws InvalidPartition
};

struct PreclusionReport {
  std::vector<std::string> removed_labels;
  double survived_norm = 0.0;
  // Every branch fell below the threshold. A verdict, not an error: the
  // returned state is the zero vector.
  bool all_precluded = false;
};

struct PreclusionResult {
  StateVector state = StateVector::zero(1);
  PreclusionReport report;
};

std::vector<Branch> branch_decompose(const StateVector& state, const PartitionSpec& partition);

// Keeps branches with norm >= norm_min (equality survives) and reassembles
// them. With renormalize, a surviving remainder of norm above 1e-14 is scaled
// back to a physical state; otherwise the raw sum is returned.
PreclusionResult preclude(const std::vector<Branch>& branches, double norm_min,
                          bool renormalize = true);

}  // namespace rqsl::preclusion
