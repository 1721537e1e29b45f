#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "partlab/core.hpp"
#include "partlab/rng.hpp"

namespace partlab {

/// q(n, m) for 1 <= m <= n <= n_max: law of the size of the deleted block.
template <Scalar S>
class DecrementMatrix {
 public:
  explicit DecrementMatrix(unsigned n_max);

  unsigned n_max() const { return n_max_; }
  const S& operator()(unsigned n, unsigned m) const { return rows_[n - 1][m - 1]; }
  S& at(unsigned n, unsigned m);
  const std::vector<S>& row(unsigned n) const { return rows_[n - 1]; }
  S row_sum(unsigned n) const;

 private:
  unsigned n_max_;
  std::vector<std::vector<S>> rows_;
};

/// d(lambda; j) = [theta lambda_j + alpha (n - lambda_j)] / [n (theta + alpha (k-1))],
/// j 0-based. Needs alpha, theta >= 0, not both zero.
template <Scalar S>
S deletion_kernel(const ExtParams<S>& params, const Composition& lambda, std::size_t j);

/// q(n,m) = C(n,m) (1-alpha)_{m-1} / (theta+n-m)_m * [(n-m) alpha + m theta] / n.
template <Scalar S>
DecrementMatrix<S> decrement_matrix(const ExtParams<S>& params, unsigned n_max);

/// Value of d(lambda;1) C(n, l1) (1-alpha)_{l1-1} (theta+(k-1)alpha) / (theta+n-l1)_{l1}
/// for one composition.
template <Scalar S>
S regeneration_ratio(const ExtParams<S>& params, const Composition& lambda);

/// Spread (max - min) of regeneration_ratio over every composition of n with
/// first part `first`; zero exactly when the kernel makes the family regenerative.
template <Scalar S>
S f1_consistency(const ExtParams<S>& params, unsigned n, unsigned first);

struct TauDeletion {
  unsigned deleted_size = 0;
  SetPartition remainder;
};

/// Deletes a tau-biased pick among the blocks of the partition.
TauDeletion tau_delete(const SetPartition& partition, double tau, RngHandle& rng);

struct BulkDeletion {
  std::vector<double> deleted;                      ///< P_1 .. P_J
  std::optional<FrequencyVector<double>> remainder; ///< empty when nothing is left
};

/// Chooses J with P(J = j) = P_j, removes P_1..P_J and renormalises the
/// rest. Throws DegenerateMass when J falls in the untracked residual.
BulkDeletion bulk_delete(const FrequencyVector<double>& frequencies, RngHandle& rng);

}  // namespace partlab
