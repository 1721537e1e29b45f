#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "partlab/error.hpp"
#include "partlab/scalar.hpp"

namespace partlab {

// ---------------------------------------------------------------------------
// Parameters of the extended two-parameter family.

enum class Family { TwoParam, NegAlpha, Coupon };

/// Tilt parameter of the random record order; `infinite` encodes the
/// deterministic standard order.
template <Scalar S>
struct RecordTilt {
  bool infinite = false;
  S value{};

  static RecordTilt finite(S v) { return {false, std::move(v)}; }
  static RecordTilt standard_order() { return {true, S{}}; }

  /// xi = (1 - tau) / tau, with tau = 0 mapped to the infinite tilt.
  static RecordTilt from_tau(const S& tau);
};

/// A point of the extended family: the (alpha, theta) continuum, the
/// negative-alpha range theta = -M alpha, or the coupon limit with M types.
template <Scalar S>
class ExtParams {
 public:
  static ExtParams two_param(S alpha, S theta);
  static ExtParams neg_alpha(S alpha, unsigned types);
  static ExtParams coupon(unsigned types);

  Family family() const { return family_; }

  /// Throws InvalidParams for the coupon limit.
  const S& alpha() const;
  /// Throws InvalidParams for the coupon limit.
  const S& theta() const;
  /// Number of types M; throws for TwoParam.
  unsigned types() const;

  /// Upper bound on the number of blocks, if any.
  std::optional<unsigned> max_blocks() const;

  /// Both alpha and theta non-negative and not both zero (TwoParam only).
  bool has_deletion_kernel() const;

  /// tau = alpha / (alpha + theta); requires has_deletion_kernel().
  S tau() const;
  /// xi = theta / alpha (infinite when alpha = 0); requires has_deletion_kernel().
  RecordTilt<S> xi() const;

  /// Parameters of the partition left after deleting the block of 1:
  /// (alpha, theta + alpha), or M - 1 types.
  ExtParams shifted() const;

  /// p(2,2,1) > 0 and p(n) -> 0.
  bool is_regular() const;

  std::string describe() const;

  friend bool operator==(const ExtParams&, const ExtParams&) = default;

 private:
  ExtParams() = default;

  Family family_ = Family::TwoParam;
  S alpha_{};
  S theta_{};
  unsigned types_ = 0;
};

ExtParams<double> to_double(const ExtParams<Rational>& p);
inline const ExtParams<double>& to_double(const ExtParams<double>& p) { return p; }

// ---------------------------------------------------------------------------
// Compositions and set partitions.

class Composition {
 public:
  Composition() = default;
  explicit Composition(std::vector<unsigned> parts);

  const std::vector<unsigned>& parts() const { return parts_; }
  unsigned operator[](std::size_t i) const { return parts_[i]; }
  std::size_t k() const { return parts_.size(); }
  unsigned n() const { return n_; }
  /// Lambda_j = lambda_j + ... + lambda_k with j 0-based; tail_sum(k()) = 0.
  unsigned tail_sum(std::size_t j) const;

  std::string to_string() const;

  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition&, const Composition&) = default;

 private:
  std::vector<unsigned> parts_;
  unsigned n_ = 0;
};

/// Restricted growth string: rgs[i] is the block index of element i+1.
/// For canonical partitions rgs[0] = 0 and rgs[i] <= 1 + max(rgs[0..i)).
using Rgs = std::vector<std::uint8_t>;
inline constexpr unsigned kMaxRgsSize = 255;

/// Partition of [n] = {1..n} with blocks in order of appearance, each block
/// sorted ascending.
class SetPartition {
 public:
  SetPartition() = default;

  /// Validates and stores blocks that are already canonical.
  SetPartition(unsigned n, std::vector<std::vector<unsigned>> blocks);

  static SetPartition from_rgs(std::span<const std::uint8_t> rgs);

  unsigned n() const { return n_; }
  std::size_t k() const { return blocks_.size(); }
  const std::vector<std::vector<unsigned>>& blocks() const { return blocks_; }
  const std::vector<unsigned>& block(std::size_t i) const { return blocks_[i]; }

  Composition sizes() const;
  Rgs rgs() const;

  std::string to_string() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;
  friend auto operator<=>(const SetPartition&, const SetPartition&) = default;

 private:
  unsigned n_ = 0;
  std::vector<std::vector<unsigned>> blocks_;
};

/// Reorders an arbitrary family of disjoint blocks covering [n] into order
/// of appearance. Throws MalformedPartition on overlap, gaps or empty blocks.
SetPartition canonicalize(unsigned n, std::vector<std::vector<unsigned>> blocks);

/// Deletes block j (0-based) and relabels the rest by the increasing
/// bijection onto [n - |B_j|]. Deleting the only block gives the empty
/// partition of [0].
SetPartition delete_block(const SetPartition& partition, std::size_t j);

// ---------------------------------------------------------------------------
// Frequencies.

template <Scalar S>
struct FrequencyVector {
  std::vector<S> p;
  S dust{};
  S residual{};

  S mass() const;
  /// Checks non-negativity and the unit-mass identity (exact for rationals).
  void validate(double tolerance = 1e-9) const;
};

template <Scalar S>
struct RankedFrequencies {
  std::vector<S> p;
  S dust{};
  S residual{};

  void validate(double tolerance = 1e-9) const;
};

template <Scalar S>
struct ResidualFractions {
  std::vector<S> w;
  bool terminated = false;

  /// Appends a fraction, enforcing the termination convention at W = 1.
  void push(S value);
};

template <Scalar S>
FrequencyVector<S> stick_breaking(const ResidualFractions<S>& fractions);

/// Recovers W_i = P_i / (1 - P_1 - ... - P_{i-1}) while prefix sums are < 1.
template <Scalar S>
ResidualFractions<S> residual_fractions(const FrequencyVector<S>& frequencies);

template <Scalar S>
RankedFrequencies<S> rank(const FrequencyVector<S>& frequencies);

// ---------------------------------------------------------------------------
// Interval sets in [0, 1].

struct Interval {
  double left = 0.0;
  double right = 0.0;
  double length() const { return right - left; }
};

/// Sorted disjoint open intervals; whatever [0,1] does not cover is either
/// Lebesgue-null or accounted for by `residual` (untracked mass).
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::vector<Interval> intervals, double residual, double tolerance = 1e-9);

  const std::vector<Interval>& intervals() const { return intervals_; }
  double residual() const { return residual_; }
  double total_length() const;

  /// Index of the interval containing u, if any.
  std::optional<std::size_t> locate(double u) const;

 private:
  std::vector<Interval> intervals_;
  double residual_ = 0.0;
};

}  // namespace partlab
