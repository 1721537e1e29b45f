#include "partlab/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace partlab {

namespace {

// Fenwick tree over slot occupancy, used to turn initial ranks into
// positions (and back) in O(k log k).
class SlotTree {
 public:
  explicit SlotTree(std::size_t size, bool filled) : tree_(size + 1, 0) {
    if (filled) {
      for (std::size_t i = 1; i <= size; ++i) {
        tree_[i] += 1;
        std::size_t parent = i + (i & (~i + 1));
        if (parent <= size) tree_[parent] += tree_[i];
      }
    }
  }

  void add(std::size_t slot, int delta) {
    for (std::size_t i = slot + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }

  /// Number of occupied slots in [0, slot).
  int prefix(std::size_t slot) const {
    int s = 0;
    for (std::size_t i = slot; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

  /// Slot holding the r-th (1-based) occupied position.
  std::size_t find(int r) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] < r) {
        pos += step;
        r -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<int> tree_;
};

double checked_sum(std::span<const double> x, bool strictly_positive) {
  double s = 0.0;
  for (double v : x) {
    if (strictly_positive ? !(v > 0.0) : !(v >= 0.0)) {
      throw Error(ErrorKind::OutOfRange, strictly_positive ? "entries must be positive" : "negative entry");
    }
    s += v;
  }
  return s;
}

}  // namespace

SetPartition crp_sample(const ExtParams<double>& params, unsigned n, RngHandle& rng) {
  if (n < 1 || n > kMaxRgsSize) throw Error(ErrorKind::OutOfRange, "crp needs 1 <= n <= 255");
  Rgs rgs(n, 0);
  if (params.family() == Family::Coupon) {
    const unsigned types = params.types();
    std::vector<int> block_of_type(types, -1);
    int blocks = 0;
    for (unsigned c = 0; c < n; ++c) {
      const auto t = rng.uniform_index(types);
      if (block_of_type[t] < 0) block_of_type[t] = blocks++;
      rgs[c] = static_cast<std::uint8_t>(block_of_type[t]);
    }
    return SetPartition::from_rgs(rgs);
  }
  const double alpha = params.alpha();
  const double theta = params.theta();
  std::vector<unsigned> tables{1};
  for (unsigned c = 1; c < n; ++c) {
    const double k = static_cast<double>(tables.size());
    // Weights lambda_i - alpha for old tables, theta + k alpha for a new one;
    // they sum to c + theta.
    double u = rng.uniform() * (static_cast<double>(c) + theta);
    std::size_t chosen = tables.size();
    for (std::size_t i = 0; i < tables.size(); ++i) {
      u -= static_cast<double>(tables[i]) - alpha;
      if (u < 0.0) {
        chosen = i;
        break;
      }
    }
    if (chosen == tables.size()) {
      if (!(theta + k * alpha > 0.0)) chosen = tables.size() - 1;  // rounding at the M-th table
      else tables.push_back(0);
    }
    ++tables[chosen];
    rgs[c] = static_cast<std::uint8_t>(chosen);
  }
  return SetPartition::from_rgs(rgs);
}

namespace {

void check_gem_params(const ExtParams<double>& params) {
  if (params.family() == Family::Coupon) {
    throw Error(ErrorKind::InvalidParams, "GEM sampling needs the two-parameter or negative-alpha range");
  }
}

double gem_fraction(const ExtParams<double>& params, std::size_t k, RngHandle& rng) {
  const auto bound = params.max_blocks();
  if (bound && k == *bound) return 1.0;
  return rng.beta(1.0 - params.alpha(), params.theta() + static_cast<double>(k) * params.alpha());
}

}  // namespace

ResidualFractions<double> gem_fractions(const ExtParams<double>& params, std::size_t count, RngHandle& rng) {
  check_gem_params(params);
  ResidualFractions<double> out;
  for (std::size_t k = 1; k <= count && !out.terminated; ++k) out.push(gem_fraction(params, k, rng));
  return out;
}

GemDraw gem_sample(const ExtParams<double>& params, double residual_cap, RngHandle& rng,
                   std::size_t max_sticks, OnBudget on_budget) {
  check_gem_params(params);
  if (!(residual_cap > 0.0)) throw Error(ErrorKind::OutOfRange, "residual cap must be positive");

  GemDraw out;
  double remaining = 1.0;
  for (std::size_t k = 1; remaining >= residual_cap; ++k) {
    if (k > max_sticks) {
      if (on_budget == OnBudget::Truncate) break;
      throw Error(ErrorKind::NonConvergence, "GEM residual above cap after max_sticks");
    }
    const double w = gem_fraction(params, k, rng);
    out.fractions.push(w);
    out.frequencies.p.push_back(w * remaining);
    remaining *= 1.0 - w;
    if (out.fractions.terminated) {
      remaining = 0.0;
      break;
    }
  }
  out.frequencies.dust = 0.0;
  out.frequencies.residual = remaining;
  return out;
}

SetPartition gem_paintbox_sample(const ExtParams<double>& params, unsigned n, RngHandle& rng, std::size_t sticks) {
  check_gem_params(params);
  if (n > kMaxRgsSize) throw Error(ErrorKind::OutOfRange, "paintbox sampling supports n <= 255");
  // Given the fractions, an unplaced point lands in stick k with probability W_k.
  std::vector<long> stick_of(n, -1);
  std::vector<unsigned> open(n);
  for (unsigned i = 0; i < n; ++i) open[i] = i;
  std::size_t k = 1;
  const bool bounded = params.max_blocks().has_value();
  for (; !open.empty() && (bounded || k <= sticks); ++k) {
    const double w = gem_fraction(params, k, rng);
    std::vector<unsigned> rest;
    for (unsigned i : open) {
      if (w >= 1.0 || rng.uniform() < w) {
        stick_of[i] = static_cast<long>(k);
      } else {
        rest.push_back(i);
      }
    }
    open.swap(rest);
  }
  if (!open.empty()) {
    // Sticks k, k+1, ... are GEM(alpha, theta + (k-1) alpha).
    const double shift = static_cast<double>(k - 1) * params.alpha();
    const auto tail = ExtParams<double>::two_param(params.alpha(), params.theta() + shift);
    const Rgs seated = crp_sample(tail, static_cast<unsigned>(open.size()), rng).rgs();
    for (std::size_t i = 0; i < open.size(); ++i) stick_of[open[i]] = static_cast<long>(k + seated[i]);
  }
  Rgs rgs(n, 0);
  std::map<long, std::uint8_t> label;
  for (unsigned i = 0; i < n; ++i) {
    const auto [it, fresh] = label.emplace(stick_of[i], static_cast<std::uint8_t>(label.size()));
    rgs[i] = it->second;
  }
  return SetPartition::from_rgs(rgs);
}

SetPartition paintbox_sample(const IntervalSet& set, unsigned n, RngHandle& rng) {
  if (n > kMaxRgsSize) throw Error(ErrorKind::OutOfRange, "paintbox sampling supports n <= 255");
  Rgs rgs(n, 0);
  std::vector<int> block_of_interval(set.intervals().size(), -1);
  int blocks = 0;
  for (unsigned i = 0; i < n; ++i) {
    const auto where = set.locate(rng.uniform());
    if (!where) {
      rgs[i] = static_cast<std::uint8_t>(blocks++);
      continue;
    }
    int& b = block_of_interval[*where];
    if (b < 0) b = blocks++;
    rgs[i] = static_cast<std::uint8_t>(b);
  }
  return SetPartition::from_rgs(rgs);
}

IntervalSet paintbox_layout(const RankedFrequencies<double>& ranked) {
  std::vector<Interval> intervals;
  intervals.reserve(ranked.p.size());
  double left = 0.0;
  for (double p : ranked.p) {
    if (p <= 0.0) continue;
    const double right = std::min(1.0, left + p);
    intervals.push_back({left, right});
    left = right;
  }
  return IntervalSet(std::move(intervals), ranked.dust + ranked.residual);
}

SetPartition paintbox_sample(const RankedFrequencies<double>& ranked, unsigned n, RngHandle& rng) {
  return paintbox_sample(paintbox_layout(ranked), n, rng);
}

std::optional<std::size_t> size_biased_pick(std::span<const double> x, RngHandle& rng) {
  const double s = checked_sum(x, false);
  if (s > 1.0 + 1e-9) throw Error(ErrorKind::OutOfRange, "size-biased pick needs sum <= 1");
  double u = rng.uniform();
  for (std::size_t j = 0; j < x.size(); ++j) {
    u -= x[j];
    if (u < 0.0) return j;
  }
  return std::nullopt;
}

template <Scalar S>
S tau_pick_probability(std::span<const S> x, const S& tau, std::size_t j) {
  const std::size_t k = x.size();
  if (k == 0) throw Error(ErrorKind::OutOfRange, "tau-biased pick from an empty sequence");
  if (j >= k) throw Error(ErrorKind::OutOfRange, "pick index out of range");
  if (k == 1) return from_int<S>(1);
  S s = from_int<S>(0);
  for (const S& v : x) s += v;
  const S numerator = (1 - tau) * x[j] + tau * (s - x[j]);
  const S denominator = s * (1 - tau + tau * from_int<S>(static_cast<long long>(k - 1)));
  return S(numerator / denominator);
}

std::size_t tau_biased_pick(std::span<const double> x, double tau, RngHandle& rng) {
  if (x.empty()) throw Error(ErrorKind::OutOfRange, "tau-biased pick from an empty sequence");
  if (tau < 0.0 || tau > 1.0) throw Error(ErrorKind::InvalidParams, "tau must lie in [0,1]");
  const double s = checked_sum(x, true);
  const std::size_t k = x.size();
  if (k == 1) return 0;
  double u = rng.uniform();
  if (tau == 0.0) {
    u *= s;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      u -= x[j];
      if (u < 0.0) return j;
    }
    return k - 1;
  }
  u *= s * (1.0 - tau + tau * static_cast<double>(k - 1));
  for (std::size_t j = 0; j + 1 < k; ++j) {
    u -= (1.0 - tau) * x[j] + tau * (s - x[j]);
    if (u < 0.0) return j;
  }
  return k - 1;
}

std::vector<std::size_t> tau_biased_perm(std::span<const double> x, double tau, RngHandle& rng) {
  std::vector<double> remaining(x.begin(), x.end());
  std::vector<std::size_t> labels(x.size());
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  std::vector<std::size_t> order;
  order.reserve(x.size());
  while (!remaining.empty()) {
    const std::size_t j = tau_biased_pick(remaining, tau, rng);
    order.push_back(labels[j]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(j));
    labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return order;
}

template <Scalar S>
S tau_perm_probability(std::span<const S> x, const S& tau, std::span<const std::size_t> order) {
  if (order.size() != x.size()) throw Error(ErrorKind::OutOfRange, "order is not a permutation of x");
  std::vector<S> remaining(x.begin(), x.end());
  std::vector<std::size_t> labels(x.size());
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  S out = from_int<S>(1);
  for (std::size_t label : order) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw Error(ErrorKind::OutOfRange, "order is not a permutation of x");
    const auto j = static_cast<std::size_t>(it - labels.begin());
    out *= tau_pick_probability<S>(remaining, tau, j);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(j));
    labels.erase(it);
  }
  return out;
}

// ---------------------------------------------------------------------------

XiOrder::XiOrder(std::vector<unsigned> initial_ranks) : ranks_(std::move(initial_ranks)) {
  for (std::size_t j = 0; j < ranks_.size(); ++j) {
    if (ranks_[j] < 1 || ranks_[j] > j + 1) throw Error(ErrorKind::OutOfRange, "initial rank out of range");
  }
}

XiOrder XiOrder::from_arrangement(std::span<const std::size_t> arrangement) {
  const std::size_t k = arrangement.size();
  std::vector<std::size_t> position(k, k);
  for (std::size_t p = 0; p < k; ++p) {
    if (arrangement[p] >= k || position[arrangement[p]] != k) {
      throw Error(ErrorKind::OutOfRange, "arrangement is not a permutation");
    }
    position[arrangement[p]] = p;
  }
  SlotTree placed(k, false);
  std::vector<unsigned> ranks(k);
  for (std::size_t j = 0; j < k; ++j) {
    ranks[j] = static_cast<unsigned>(placed.prefix(position[j]) + 1);
    placed.add(position[j], 1);
  }
  return XiOrder(std::move(ranks));
}

std::vector<std::size_t> XiOrder::arrangement() const {
  const std::size_t k = ranks_.size();
  // Element j takes the rank_j-th free slot once all later elements are placed.
  SlotTree free_slots(k, true);
  std::vector<std::size_t> out(k);
  for (std::size_t j = k; j-- > 0;) {
    const std::size_t slot = free_slots.find(static_cast<int>(ranks_[j]));
    out[slot] = j;
    free_slots.add(slot, -1);
  }
  return out;
}

unsigned XiOrder::record_count() const {
  unsigned r = 0;
  for (std::size_t j = 0; j < ranks_.size(); ++j) r += ranks_[j] == j + 1 ? 1U : 0U;
  return r;
}

XiOrder xi_order(std::size_t k, const RecordTilt<double>& xi, RngHandle& rng) {
  if (!xi.infinite && xi.value < 0.0) throw Error(ErrorKind::InvalidParams, "xi must be non-negative");
  std::vector<unsigned> ranks(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto top = static_cast<unsigned>(j + 1);
    if (j == 0 || xi.infinite) {
      ranks[j] = top;
      continue;
    }
    // P(rank = top) = xi / (j + xi); otherwise uniform on 1..j.
    const double jj = static_cast<double>(j);
    if (xi.value > 0.0 && rng.uniform() * (jj + xi.value) < xi.value) {
      ranks[j] = top;
    } else {
      ranks[j] = static_cast<unsigned>(rng.uniform_index(j) + 1);
    }
  }
  return XiOrder(std::move(ranks));
}

template <Scalar S>
S initial_rank_probability(const RecordTilt<S>& xi, unsigned j, unsigned r) {
  if (j < 1 || r < 1 || r > j) throw Error(ErrorKind::OutOfRange, "initial rank out of range");
  if (j == 1) return from_int<S>(1);
  if (xi.infinite) return from_int<S>(r == j ? 1 : 0);
  const S denominator = from_int<S>(j - 1) + xi.value;
  if (r == j) return S(xi.value / denominator);
  return S(1 / denominator);
}

unsigned record_count(std::span<const std::size_t> arrangement) {
  return XiOrder::from_arrangement(arrangement).record_count();
}

template <Scalar S>
S order_probability(const RecordTilt<S>& xi, std::span<const std::size_t> arrangement) {
  const XiOrder order = XiOrder::from_arrangement(arrangement);
  const std::size_t n = order.k();
  if (n == 0) return from_int<S>(1);
  const unsigned r = order.record_count();
  if (xi.infinite) return from_int<S>(r == n ? 1 : 0);
  // Element 0 is always a record, so cancel one factor of xi (covers xi = 0).
  return S(power(xi.value, r - 1) / rising_factorial(S(xi.value + 1), n - 1));
}

#define PARTLAB_INSTANTIATE(S)                                                                   \
  template S tau_pick_probability(std::span<const S>, const S&, std::size_t);                    \
  template S tau_perm_probability(std::span<const S>, const S&, std::span<const std::size_t>);   \
  template S initial_rank_probability(const RecordTilt<S>&, unsigned, unsigned);                 \
  template S order_probability(const RecordTilt<S>&, std::span<const std::size_t>);

PARTLAB_INSTANTIATE(Rational)
PARTLAB_INSTANTIATE(double)

#undef PARTLAB_INSTANTIATE

}  // namespace partlab
