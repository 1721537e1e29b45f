#include "partlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace partlab {

template <Scalar S>
RecordTilt<S> RecordTilt<S>::from_tau(const S& tau) {
  if (tau < 0 || tau > 1) throw Error(ErrorKind::InvalidParams, "tau must lie in [0,1]");
  if (is_zero(tau)) return standard_order();
  return finite(S((1 - tau) / tau));
}

// ---------------------------------------------------------------------------
// ExtParams

template <Scalar S>
ExtParams<S> ExtParams<S>::two_param(S alpha, S theta) {
  if (alpha < 0 || alpha >= 1) {
    throw Error(ErrorKind::InvalidParams, "two-parameter range needs 0 <= alpha < 1");
  }
  if (!(theta + alpha > 0)) {
    throw Error(ErrorKind::InvalidParams, "two-parameter range needs theta > -alpha");
  }
  ExtParams p;
  p.family_ = Family::TwoParam;
  p.alpha_ = std::move(alpha);
  p.theta_ = std::move(theta);
  return p;
}

template <Scalar S>
ExtParams<S> ExtParams<S>::neg_alpha(S alpha, unsigned types) {
  if (!(alpha < 0)) throw Error(ErrorKind::InvalidParams, "negative-alpha range needs alpha < 0");
  if (types < 1) throw Error(ErrorKind::InvalidParams, "negative-alpha range needs M >= 1");
  ExtParams p;
  p.family_ = Family::NegAlpha;
  p.theta_ = S(-from_int<S>(types) * alpha);
  p.alpha_ = std::move(alpha);
  p.types_ = types;
  return p;
}

template <Scalar S>
ExtParams<S> ExtParams<S>::coupon(unsigned types) {
  if (types < 1) throw Error(ErrorKind::InvalidParams, "coupon limit needs M >= 1");
  ExtParams p;
  p.family_ = Family::Coupon;
  p.types_ = types;
  return p;
}

template <Scalar S>
const S& ExtParams<S>::alpha() const {
  if (family_ == Family::Coupon) throw Error(ErrorKind::InvalidParams, "coupon limit has no alpha");
  return alpha_;
}

template <Scalar S>
const S& ExtParams<S>::theta() const {
  if (family_ == Family::Coupon) throw Error(ErrorKind::InvalidParams, "coupon limit has no theta");
  return theta_;
}

template <Scalar S>
unsigned ExtParams<S>::types() const {
  if (family_ == Family::TwoParam) throw Error(ErrorKind::InvalidParams, "two-parameter range has no M");
  return types_;
}

template <Scalar S>
std::optional<unsigned> ExtParams<S>::max_blocks() const {
  if (family_ == Family::TwoParam) return std::nullopt;
  return types_;
}

template <Scalar S>
bool ExtParams<S>::has_deletion_kernel() const {
  return family_ == Family::TwoParam && alpha_ >= 0 && theta_ >= 0 && !(is_zero(alpha_) && is_zero(theta_));
}

template <Scalar S>
S ExtParams<S>::tau() const {
  if (!has_deletion_kernel()) {
    throw Error(ErrorKind::UnsupportedKernel, "tau needs alpha, theta >= 0, not both zero: " + describe());
  }
  return S(alpha_ / (alpha_ + theta_));
}

template <Scalar S>
RecordTilt<S> ExtParams<S>::xi() const {
  if (!has_deletion_kernel()) {
    throw Error(ErrorKind::UnsupportedKernel, "xi needs alpha, theta >= 0, not both zero: " + describe());
  }
  if (is_zero(alpha_)) return RecordTilt<S>::standard_order();
  return RecordTilt<S>::finite(S(theta_ / alpha_));
}

template <Scalar S>
ExtParams<S> ExtParams<S>::shifted() const {
  switch (family_) {
    case Family::TwoParam:
      return two_param(alpha_, S(theta_ + alpha_));
    case Family::NegAlpha:
      if (types_ < 2) throw Error(ErrorKind::InvalidParams, "cannot shift M = 1");
      return neg_alpha(alpha_, types_ - 1);
    case Family::Coupon:
      if (types_ < 2) throw Error(ErrorKind::InvalidParams, "cannot shift M = 1");
      return coupon(types_ - 1);
  }
  return *this;
}

template <Scalar S>
bool ExtParams<S>::is_regular() const {
  return family_ == Family::TwoParam || types_ >= 3;
}

template <Scalar S>
std::string ExtParams<S>::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::TwoParam:
      os << "(alpha=" << format_scalar(alpha_) << ", theta=" << format_scalar(theta_) << ")";
      break;
    case Family::NegAlpha:
      os << "(alpha=" << format_scalar(alpha_) << ", M=" << types_ << ")";
      break;
    case Family::Coupon:
      os << "(coupon M=" << types_ << ")";
      break;
  }
  return os.str();
}

ExtParams<double> to_double(const ExtParams<Rational>& p) {
  switch (p.family()) {
    case Family::TwoParam:
      return ExtParams<double>::two_param(p.alpha().get_d(), p.theta().get_d());
    case Family::NegAlpha:
      return ExtParams<double>::neg_alpha(p.alpha().get_d(), p.types());
    case Family::Coupon:
      break;
  }
  return ExtParams<double>::coupon(p.types());
}

// ---------------------------------------------------------------------------
// Composition

Composition::Composition(std::vector<unsigned> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw Error(ErrorKind::OutOfRange, "composition needs at least one part");
  for (unsigned part : parts_) {
    if (part == 0) throw Error(ErrorKind::OutOfRange, "composition parts must be positive");
    n_ += part;
  }
}

unsigned Composition::tail_sum(std::size_t j) const {
  unsigned s = 0;
  for (std::size_t i = j; i < parts_.size(); ++i) s += parts_[i];
  return s;
}

std::string Composition::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(parts_[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// SetPartition

SetPartition::SetPartition(unsigned n, std::vector<std::vector<unsigned>> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  std::vector<bool> seen(n_ + 1, false);
  unsigned count = 0;
  unsigned previous_min = 0;
  for (const auto& b : blocks_) {
    if (b.empty()) throw Error(ErrorKind::MalformedPartition, "empty block");
    if (!std::is_sorted(b.begin(), b.end())) throw Error(ErrorKind::MalformedPartition, "block not sorted");
    if (b.front() <= previous_min) {
      throw Error(ErrorKind::MalformedPartition, "blocks not in order of appearance");
    }
    previous_min = b.front();
    for (unsigned e : b) {
      if (e < 1 || e > n_) throw Error(ErrorKind::MalformedPartition, "element outside [n]");
      if (seen[e]) throw Error(ErrorKind::MalformedPartition, "overlapping blocks");
      seen[e] = true;
      ++count;
    }
  }
  if (count != n_) throw Error(ErrorKind::MalformedPartition, "blocks do not cover [n]");
}

SetPartition SetPartition::from_rgs(std::span<const std::uint8_t> rgs) {
  SetPartition out;
  out.n_ = static_cast<unsigned>(rgs.size());
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    std::size_t b = rgs[i];
    if (b > out.blocks_.size()) throw Error(ErrorKind::MalformedPartition, "not a restricted growth string");
    if (b == out.blocks_.size()) out.blocks_.emplace_back();
    out.blocks_[b].push_back(static_cast<unsigned>(i + 1));
  }
  return out;
}

Composition SetPartition::sizes() const {
  std::vector<unsigned> parts;
  parts.reserve(blocks_.size());
  for (const auto& b : blocks_) parts.push_back(static_cast<unsigned>(b.size()));
  return Composition(std::move(parts));
}

Rgs SetPartition::rgs() const {
  Rgs out(n_, 0);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    for (unsigned e : blocks_[i]) out[e - 1] = static_cast<std::uint8_t>(i);
  }
  return out;
}

std::string SetPartition::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) out += ",";
    out += "{";
    for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
      if (j) out += ",";
      out += std::to_string(blocks_[i][j]);
    }
    out += "}";
  }
  return out + ")";
}

SetPartition canonicalize(unsigned n, std::vector<std::vector<unsigned>> blocks) {
  for (auto& b : blocks) {
    if (b.empty()) throw Error(ErrorKind::MalformedPartition, "empty block");
    std::sort(b.begin(), b.end());
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return SetPartition(n, std::move(blocks));
}

SetPartition delete_block(const SetPartition& partition, std::size_t j) {
  if (j >= partition.k()) throw Error(ErrorKind::OutOfRange, "block index out of range");
  const unsigned n = partition.n();
  std::vector<unsigned> relabel(n + 1, 0);
  std::vector<bool> removed(n + 1, false);
  for (unsigned e : partition.block(j)) removed[e] = true;
  unsigned next = 0;
  for (unsigned e = 1; e <= n; ++e) {
    if (!removed[e]) relabel[e] = ++next;
  }
  std::vector<std::vector<unsigned>> blocks;
  blocks.reserve(partition.k() - 1);
  for (std::size_t i = 0; i < partition.k(); ++i) {
    if (i == j) continue;
    auto& b = blocks.emplace_back();
    b.reserve(partition.block(i).size());
    for (unsigned e : partition.block(i)) b.push_back(relabel[e]);
  }
  // The increasing relabelling keeps the order of appearance intact.
  return SetPartition(next, std::move(blocks));
}

// ---------------------------------------------------------------------------
// Frequencies

namespace {

template <Scalar S>
void check_mass(const std::vector<S>& p, const S& dust, const S& residual, double tolerance) {
  S total = dust + residual;
  if (dust < 0 || residual < 0) throw Error(ErrorKind::OutOfRange, "negative dust or residual");
  for (const S& x : p) {
    if (x < 0) throw Error(ErrorKind::OutOfRange, "negative frequency");
    total += x;
  }
  if constexpr (is_exact_v<S>) {
    if (total != 1) throw Error(ErrorKind::OutOfRange, "frequencies do not sum to 1");
  } else {
    if (std::abs(total - 1.0) > tolerance) throw Error(ErrorKind::OutOfRange, "frequencies do not sum to 1");
  }
}

}  // namespace

template <Scalar S>
S FrequencyVector<S>::mass() const {
  S total = dust + residual;
  for (const S& x : p) total += x;
  return total;
}

template <Scalar S>
void FrequencyVector<S>::validate(double tolerance) const {
  check_mass(p, dust, residual, tolerance);
}

template <Scalar S>
void RankedFrequencies<S>::validate(double tolerance) const {
  check_mass(p, dust, residual, tolerance);
  if (!std::is_sorted(p.begin(), p.end(), [](const S& a, const S& b) { return a > b; })) {
    throw Error(ErrorKind::OutOfRange, "ranked frequencies not nonincreasing");
  }
}

template <Scalar S>
void ResidualFractions<S>::push(S value) {
  if (value < 0 || value > 1) throw Error(ErrorKind::OutOfRange, "residual fraction outside [0,1]");
  if (terminated) return;
  if (value == 1) terminated = true;
  w.push_back(std::move(value));
}

template <Scalar S>
FrequencyVector<S> stick_breaking(const ResidualFractions<S>& fractions) {
  FrequencyVector<S> out;
  S remaining = from_int<S>(1);
  for (const S& w : fractions.w) {
    if (w < 0 || w > 1) throw Error(ErrorKind::OutOfRange, "residual fraction outside [0,1]");
    out.p.push_back(S(w * remaining));
    remaining *= S(1 - w);
    if (w == 1) break;
  }
  out.dust = from_int<S>(0);
  out.residual = remaining;
  return out;
}

template <Scalar S>
ResidualFractions<S> residual_fractions(const FrequencyVector<S>& frequencies) {
  ResidualFractions<S> out;
  S remaining = from_int<S>(1);
  for (const S& p : frequencies.p) {
    if (!(remaining > 0)) break;
    out.push(S(p / remaining));
    if (out.terminated) break;
    remaining -= p;
  }
  return out;
}

template <Scalar S>
RankedFrequencies<S> rank(const FrequencyVector<S>& frequencies) {
  RankedFrequencies<S> out{frequencies.p, frequencies.dust, frequencies.residual};
  std::sort(out.p.begin(), out.p.end(), [](const S& a, const S& b) { return a > b; });
  return out;
}

// ---------------------------------------------------------------------------
// IntervalSet

IntervalSet::IntervalSet(std::vector<Interval> intervals, double residual, double tolerance)
    : intervals_(std::move(intervals)), residual_(residual) {
  if (residual_ < 0.0) throw Error(ErrorKind::OutOfRange, "negative residual");
  double previous_right = 0.0;
  for (const auto& iv : intervals_) {
    if (!(iv.left >= previous_right) || !(iv.right >= iv.left) || iv.right > 1.0) {
      throw Error(ErrorKind::OutOfRange, "intervals must be sorted, disjoint and inside [0,1]");
    }
    previous_right = iv.right;
  }
  if (std::abs(total_length() + residual_ - 1.0) > tolerance) {
    throw Error(ErrorKind::OutOfRange, "interval lengths and residual do not sum to 1");
  }
}

double IntervalSet::total_length() const {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

std::optional<std::size_t> IntervalSet::locate(double u) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), u,
                             [](double x, const Interval& iv) { return x < iv.left; });
  if (it == intervals_.begin()) return std::nullopt;
  --it;
  if (u > it->left && u < it->right) return static_cast<std::size_t>(it - intervals_.begin());
  return std::nullopt;
}

// ---------------------------------------------------------------------------

#define PARTLAB_INSTANTIATE(S)                                                  \
  template struct RecordTilt<S>;                                                \
  template class ExtParams<S>;                                                  \
  template struct FrequencyVector<S>;                                           \
  template struct RankedFrequencies<S>;                                         \
  template struct ResidualFractions<S>;                                         \
  template FrequencyVector<S> stick_breaking(const ResidualFractions<S>&);      \
  template ResidualFractions<S> residual_fractions(const FrequencyVector<S>&);  \
  template RankedFrequencies<S> rank(const FrequencyVector<S>&);

PARTLAB_INSTANTIATE(Rational)
PARTLAB_INSTANTIATE(double)

#undef PARTLAB_INSTANTIATE

}  // namespace partlab
