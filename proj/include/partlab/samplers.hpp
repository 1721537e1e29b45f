#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "partlab/core.hpp"
#include "partlab/rng.hpp"

namespace partlab {

/// Chinese restaurant seating of n customers; the coupon limit seats each
/// customer at one of M equally likely types.
SetPartition crp_sample(const ExtParams<double>& params, unsigned n, RngHandle& rng);

struct GemDraw {
  ResidualFractions<double> fractions;
  FrequencyVector<double> frequencies;
};

/// Independent W_k ~ beta(1 - alpha, theta + k alpha) until the unbroken
/// remainder drops below `residual_cap`; in the negative-alpha range the
/// sequence stops at W_M = 1.
/// The first `count` residual fractions W_1..W_count (fewer once W = 1).
ResidualFractions<double> gem_fractions(const ExtParams<double>& params, std::size_t count, RngHandle& rng);

/// What gem_sample does once max_sticks sticks are drawn with the residual
/// still above the cap: throw NonConvergence, or stop and report it.
enum class OnBudget { Throw, Truncate };

GemDraw gem_sample(const ExtParams<double>& params, double residual_cap, RngHandle& rng,
                   std::size_t max_sticks = 50'000'000, OnBudget on_budget = OnBudget::Throw);

/// Kingman paintbox: points in the same interval share a block, points
/// outside every interval are singletons.
SetPartition paintbox_sample(const IntervalSet& set, unsigned n, RngHandle& rng);
SetPartition paintbox_sample(const RankedFrequencies<double>& ranked, unsigned n, RngHandle& rng);

/// Paintbox over GEM sticks without truncation: points still unplaced after
/// `sticks` sticks are seated by the CRP of the shifted parameters.
SetPartition gem_paintbox_sample(const ExtParams<double>& params, unsigned n, RngHandle& rng,
                                 std::size_t sticks = 4096);

/// Lays ranked frequencies out left to right; dust and residual stay
/// uncovered at the right end.
IntervalSet paintbox_layout(const RankedFrequencies<double>& ranked);

/// Index j with probability x[j]; nothing with probability 1 - sum(x).
std::optional<std::size_t> size_biased_pick(std::span<const double> x, RngHandle& rng);

/// P(T = j) = [(1-tau) x_j + tau (s - x_j)] / [s (1 - tau + tau (k-1))].
template <Scalar S>
S tau_pick_probability(std::span<const S> x, const S& tau, std::size_t j);

std::size_t tau_biased_pick(std::span<const double> x, double tau, RngHandle& rng);

/// Visit order obtained by repeated tau-biased picks without replacement.
std::vector<std::size_t> tau_biased_perm(std::span<const double> x, double tau, RngHandle& rng);

/// Exact probability that tau_biased_perm returns `order`.
template <Scalar S>
S tau_perm_probability(std::span<const S> x, const S& tau, std::span<const std::size_t> order);

/// Random total order on {0..k-1} through its initial ranks: rank[j] is the
/// 1-based position of j among 0..j.
class XiOrder {
 public:
  explicit XiOrder(std::vector<unsigned> initial_ranks);

  static XiOrder from_arrangement(std::span<const std::size_t> arrangement);

  std::size_t k() const { return ranks_.size(); }
  const std::vector<unsigned>& initial_ranks() const { return ranks_; }

  /// Elements listed from smallest to largest in the order.
  std::vector<std::size_t> arrangement() const;

  /// Elements ranked last among their predecessors (rank[j] = j + 1).
  unsigned record_count() const;

 private:
  std::vector<unsigned> ranks_;
};

XiOrder xi_order(std::size_t k, const RecordTilt<double>& xi, RngHandle& rng);

/// P(rank of the j-th element = r) for j, r 1-based.
template <Scalar S>
S initial_rank_probability(const RecordTilt<S>& xi, unsigned j, unsigned r);

/// xi^r / (xi (xi+1) ... (xi+n-1)) with r the record count of the
/// arrangement (elements that follow every smaller label).
template <Scalar S>
S order_probability(const RecordTilt<S>& xi, std::span<const std::size_t> arrangement);

unsigned record_count(std::span<const std::size_t> arrangement);

}  // namespace partlab
