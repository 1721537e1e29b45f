#include "partlab/regen.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>

#include "partlab/samplers.hpp"

namespace partlab {

namespace {

void check_cap(double residual_cap) {
  if (!(residual_cap > 0.0 && residual_cap <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "residual cap must lie in (0, 1]");
  }
}

template <Scalar S>
std::uint64_t integer_argument(const S& a) {
  if (a < 0) throw Error(ErrorKind::OutOfRange, "Laplace exponent needs a >= 0");
  if constexpr (is_exact_v<S>) {
    if (a.get_den() != 1 || !a.get_num().fits_ulong_p()) {
      throw Error(ErrorKind::NotExact, "exact Laplace exponent needs an integer argument");
    }
    return a.get_num().get_ui();
  } else {
    return static_cast<std::uint64_t>(a);
  }
}

}  // namespace

template <Scalar S>
LevyImageMeasure<S> LevyImageMeasure<S>::alpha_theta(S alpha, S theta) {
  if (alpha < 0 || theta < 0) throw Error(ErrorKind::InvalidParams, "the (alpha, theta) measure needs alpha, theta >= 0");
  if (alpha >= 1) throw Error(ErrorKind::DivergentMeasure, "Phi(1) is infinite for alpha >= 1");
  LevyImageMeasure out;
  out.closed_form_ = true;
  out.alpha_ = std::move(alpha);
  out.theta_ = std::move(theta);
  return out;
}

template <Scalar S>
LevyImageMeasure<S> LevyImageMeasure<S>::finite_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw Error(ErrorKind::InvalidParams, "a measure needs at least one atom");
  for (const auto& atom : atoms) {
    if (!(atom.u > 0) || atom.u > 1) throw Error(ErrorKind::OutOfRange, "atoms must lie in (0, 1]");
    if (!(atom.w > 0)) throw Error(ErrorKind::InvalidParams, "atom weights must be positive");
  }
  LevyImageMeasure out;
  out.atoms_ = std::move(atoms);
  return out;
}

template <Scalar S>
double LevyImageMeasure<S>::unit() const {
  if (!closed_form_) return 1.0;
  return boost::math::beta(1.0 - to_double(alpha_), 1.0 + to_double(theta_));
}

template <Scalar S>
PhiValue<S> laplace_exponent(const LevyImageMeasure<S>& measure, const S& a) {
  if (a < 0) throw Error(ErrorKind::OutOfRange, "Laplace exponent needs a >= 0");
  if (is_zero(a)) return {from_int<S>(0), measure.unit()};

  if (measure.is_alpha_theta()) {
    const S& alpha = measure.alpha();
    const S& theta = measure.theta();
    if constexpr (is_exact_v<S>) {
      // a B(1-alpha, a+theta) = a (1+theta)_{a-1} / (2-alpha+theta)_{a-1} B(1-alpha, 1+theta)
      const std::uint64_t n = integer_argument(a);
      return {S(a * rising_factorial(S(1 + theta), n - 1) / rising_factorial(S(2 - alpha + theta), n - 1)),
              measure.unit()};
    } else {
      return {a * boost::math::beta(1.0 - alpha, a + theta), 1.0};
    }
  }

  S total = from_int<S>(0);
  for (const auto& atom : measure.atoms()) {
    if constexpr (is_exact_v<S>) {
      total += atom.w * (1 - power(S(1 - atom.u), integer_argument(a)));
    } else {
      total += atom.w * -std::expm1(a * std::log1p(-atom.u));
    }
  }
  return {total, 1.0};
}

template <Scalar S>
PhiValue<S> phi_nm(const LevyImageMeasure<S>& measure, unsigned n, unsigned m) {
  if (m < 1 || m > n) throw Error(ErrorKind::OutOfRange, "Phi(n, m) needs 1 <= m <= n");
  if (measure.is_alpha_theta()) {
    const S& alpha = measure.alpha();
    const S& theta = measure.theta();
    const S one_minus_alpha = 1 - alpha;
    const S one_plus_theta = 1 + theta;
    // alpha B(m-alpha, n-m+theta+1) + theta B(m-alpha+1, n-m+theta), in units
    // of B(1-alpha, 1+theta). At m = n the second term is finite even for
    // theta = 0, where it is the atom at 1.
    S coeff = alpha * rising_factorial(one_minus_alpha, m - 1) * rising_factorial(one_plus_theta, n - m);
    if (m < n) {
      coeff += theta * rising_factorial(one_minus_alpha, m) * rising_factorial(one_plus_theta, n - m - 1);
    } else {
      coeff += rising_factorial(one_minus_alpha, n);
    }
    coeff *= binomial<S>(n, m);
    coeff /= rising_factorial(S(2 - alpha + theta), n - 1);
    return {coeff, measure.unit()};
  }
  S total = from_int<S>(0);
  for (const auto& atom : measure.atoms()) {
    total += atom.w * power(atom.u, m) * power(S(1 - atom.u), n - m);
  }
  return {S(total * binomial<S>(n, m)), 1.0};
}

template <Scalar S>
DecrementMatrix<S> decrement_from_phi(const LevyImageMeasure<S>& measure, unsigned n_max) {
  DecrementMatrix<S> q(n_max);
  for (unsigned n = 1; n <= n_max; ++n) {
    const PhiValue<S> total = laplace_exponent(measure, from_int<S>(n));
    if (is_zero(total.coeff)) throw Error(ErrorKind::DegenerateMass, "Phi(n) = 0");
    for (unsigned m = 1; m <= n; ++m) {
      const PhiValue<S> part = phi_nm(measure, n, m);
      if constexpr (is_exact_v<S>) {
        q.at(n, m) = part.coeff / total.coeff;  // same unit on both sides
      } else {
        q.at(n, m) = part.value() / total.value();
      }
    }
  }
  return q;
}

// ---------------------------------------------------------------------------

SubordinatorPath compound_poisson_path(double theta, double residual_cap, RngHandle& rng) {
  if (!(theta > 0.0)) throw Error(ErrorKind::InvalidParams, "compound Poisson path needs theta > 0");
  check_cap(residual_cap);
  const double level_cap = -std::log(residual_cap);
  SubordinatorPath path;
  double t = 0.0;
  double s = 0.0;
  while (s <= level_cap) {
    t += rng.exponential(1.0);
    s += rng.exponential(theta);
    path.times.push_back(t);
    path.levels.push_back(s);
  }
  return path;
}

IntervalSet stick_breaking_set(double theta, double residual_cap, RngHandle& rng) {
  if (!(theta > 0.0)) throw Error(ErrorKind::InvalidParams, "stick-breaking set needs theta > 0");
  check_cap(residual_cap);
  std::vector<Interval> intervals;
  double remaining = 1.0;
  double left = 0.0;
  while (remaining >= residual_cap) {
    remaining *= 1.0 - rng.beta(1.0, theta);
    const double right = 1.0 - remaining;
    intervals.push_back({left, right});
    left = right;
  }
  return IntervalSet(std::move(intervals), remaining);
}

IntervalSet compound_poisson_set(double theta, double residual_cap, RngHandle& rng) {
  const SubordinatorPath path = compound_poisson_path(theta, residual_cap, rng);
  std::vector<Interval> intervals;
  intervals.reserve(path.levels.size());
  double left = 0.0;
  for (double s : path.levels) {
    const double right = -std::expm1(-s);
    intervals.push_back({left, right});
    left = right;
  }
  return IntervalSet(std::move(intervals), std::exp(-path.levels.back()));
}

IntervalSet ordered_arrangement(const FrequencyVector<double>& frequencies, const RecordTilt<double>& xi,
                                RngHandle& rng) {
  frequencies.validate();
  if (frequencies.dust != 0.0) throw Error(ErrorKind::InvalidParams, "ordered arrangement needs proper frequencies");
  const XiOrder order = xi_order(frequencies.p.size(), xi, rng);
  std::vector<Interval> intervals;
  intervals.reserve(frequencies.p.size());
  double left = 0.0;
  for (std::size_t j : order.arrangement()) {
    const double right = std::min(1.0, left + frequencies.p[j]);
    intervals.push_back({left, right});
    left = right;
  }
  return IntervalSet(std::move(intervals), frequencies.residual);
}

IntervalSet crossbreed_set(double alpha, double theta, double residual_cap, RngHandle& rng) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(theta > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "cross-breed needs 0 < alpha < 1 and theta > 0");
  }
  const IntervalSet outer = stick_breaking_set(theta, residual_cap, rng);
  const auto inner_params = ExtParams<double>::two_param(alpha, 0.0);
  const auto put_first_last = RecordTilt<double>::finite(0.0);

  std::vector<Interval> intervals;
  double uncovered = outer.residual();
  for (const Interval& piece : outer.intervals()) {
    const double a = piece.left;
    const double b = piece.right;
    const double scale = 1.0 - a;
    const GemDraw gem = gem_sample(inner_params, residual_cap, rng);
    const IntervalSet inner = ordered_arrangement(gem.frequencies, put_first_last, rng);
    double covered = 0.0;
    for (const Interval& iv : inner.intervals()) {
      const double left = a + scale * iv.left;
      if (left >= b) break;
      const double right = std::min(b, a + scale * iv.right);
      intervals.push_back({left, right});
      covered += right - left;
    }
    uncovered += std::max(0.0, (b - a) - covered);
  }
  return IntervalSet(std::move(intervals), uncovered, 1e-7);
}

LeftmostDeletion leftmost_delete(const IntervalSet& set, unsigned n, RngHandle& rng) {
  if (n < 1 || n > kMaxRgsSize) throw Error(ErrorKind::OutOfRange, "leftmost deletion needs 1 <= n <= 255");
  Rgs rgs(n, 0);
  std::vector<int> block_of_interval(set.intervals().size(), -1);
  int blocks = 0;
  double smallest = 2.0;
  unsigned first_point = 0;
  for (unsigned i = 0; i < n; ++i) {
    const double u = rng.uniform();
    if (u < smallest) {
      smallest = u;
      first_point = i;
    }
    const auto where = set.locate(u);
    if (!where) {
      rgs[i] = static_cast<std::uint8_t>(blocks++);
      continue;
    }
    int& b = block_of_interval[*where];
    if (b < 0) b = blocks++;
    rgs[i] = static_cast<std::uint8_t>(b);
  }
  // The leftmost occupied interval is the one holding the smallest point.
  const SetPartition partition = SetPartition::from_rgs(rgs);
  const std::size_t j = rgs[first_point];
  return {static_cast<unsigned>(partition.block(j).size()), delete_block(partition, j)};
}

#define PARTLAB_INSTANTIATE(S)                                                               \
  template class LevyImageMeasure<S>;                                                        \
  template PhiValue<S> laplace_exponent(const LevyImageMeasure<S>&, const S&);               \
  template PhiValue<S> phi_nm(const LevyImageMeasure<S>&, unsigned, unsigned);              \
  template DecrementMatrix<S> decrement_from_phi(const LevyImageMeasure<S>&, unsigned);

PARTLAB_INSTANTIATE(Rational)
PARTLAB_INSTANTIATE(double)

#undef PARTLAB_INSTANTIATE

}  // namespace partlab
