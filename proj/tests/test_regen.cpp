#include <doctest.h>

#include <cmath>

#include "partlab/kernels.hpp"
#include "partlab/oracle.hpp"
#include "partlab/regen.hpp"
#include "partlab/samplers.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace partlab;
using support::error_kind;
using Q = Rational;

namespace {

using Measure = LevyImageMeasure<Q>;
using MeasureD = LevyImageMeasure<double>;

// Chi-square p-value of the leftmost-deleted size against row n of q.
template <class Build>
double leftmost_fit(const DecrementMatrix<double>& q, unsigned n, std::uint64_t samples, std::uint64_t seed, Build build) {
  const auto counts = mc_histogram(samples, seed, n, [&](RngHandle& rng) {
    const IntervalSet set = build(rng);
    return static_cast<std::size_t>(leftmost_delete(set, n, rng).deleted_size - 1);
  });
  return chi_square(counts, q.row(n)).p_value;
}

}  // namespace

TEST_CASE("Laplace exponent closed forms") {
  const auto m = Measure::alpha_theta(0, 1);
  CHECK(laplace_exponent(m, Q(0)).coeff == 0);
  // (0, theta): Phi(a) = a / (a + theta).
  const auto md = MeasureD::alpha_theta(0.0, 2.0);
  CHECK(laplace_exponent(md, 2.5).value() == doctest::Approx(2.5 / 4.5).epsilon(1e-14));
  CHECK(laplace_exponent(m, Q(3)).value() == doctest::Approx(0.75).epsilon(1e-14));

  const auto atom = Measure::finite_atoms({{Q(1), Q(5, 2)}});
  for (int a = 1; a <= 4; ++a) CHECK(laplace_exponent(atom, Q(a)).coeff == Q(5, 2));
  CHECK(error_kind([&] { laplace_exponent(atom, Q(1, 2)); }) == ErrorKind::NotExact);
  CHECK(laplace_exponent(MeasureD::finite_atoms({{1.0, 2.5}}), 0.5).value() == doctest::Approx(2.5));
}

TEST_CASE("Laplace exponent agrees with the tail integral") {
  for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 0.5}, {1.0 / 3, 2.0 / 3}, {2.0 / 3, 0.0}, {0.25, 3.0}}) {
    const auto md = MeasureD::alpha_theta(alpha, theta);
    for (double a : {0.5, 1.0, 2.0, 3.7, 7.0}) {
      CHECK(laplace_exponent(md, a).value() == doctest::Approx(ref::phi_by_tail(alpha, theta, a)).epsilon(1e-9));
    }
  }
  // Exact coefficients carry the same value once multiplied by the unit.
  const auto m = Measure::alpha_theta(Q(1, 3), Q(2, 3));
  const auto md = MeasureD::alpha_theta(1.0 / 3, 2.0 / 3);
  for (int a = 1; a <= 8; ++a) {
    CHECK(laplace_exponent(m, Q(a)).value() == doctest::Approx(laplace_exponent(md, double(a)).value()).epsilon(1e-13));
  }
}

TEST_CASE("Phi(n, m) values") {
  const auto m = Measure::alpha_theta(0, 1);
  CHECK(phi_nm(m, 1, 1).value() == doctest::Approx(0.5));
  CHECK(laplace_exponent(m, Q(1)).value() == doctest::Approx(0.5));
  const auto atom = Measure::finite_atoms({{Q(1), Q(1)}});
  CHECK(phi_nm(atom, 4, 4).coeff == 1);
  for (unsigned k = 1; k < 4; ++k) CHECK(phi_nm(atom, 4, k).coeff == 0);
  CHECK(error_kind([&] { phi_nm(m, 3, 4); }) == ErrorKind::OutOfRange);

  // Summing over m recovers Phi(n).
  for (const auto& meas : {Measure::alpha_theta(Q(1, 2), Q(1, 2)), Measure::alpha_theta(Q(2, 3), 0),
                           Measure::finite_atoms({{Q(1, 3), Q(2)}, {Q(3, 4), Q(1, 5)}})}) {
    for (unsigned n = 1; n <= 12; ++n) {
      Q total = 0;
      for (unsigned k = 1; k <= n; ++k) total += phi_nm(meas, n, k).coeff;
      CHECK(total == laplace_exponent(meas, Q(n)).coeff);
    }
  }
}

TEST_CASE("decrement matrix from Phi") {
  const auto half = decrement_from_phi(Measure::alpha_theta(Q(1, 2), Q(1, 2)), 20);
  CHECK(half(1, 1) == 1);
  CHECK(half(2, 1) == 1 - half(2, 2));
  CHECK(half(2, 1) == decrement_matrix(ExtParams<Q>::two_param(Q(1, 2), Q(1, 2)), 2)(2, 1));
  const auto ewens = decrement_from_phi(Measure::alpha_theta(0, 1), 2);
  CHECK(ewens(2, 1) == Q(1, 2));
  CHECK(ewens(2, 2) == Q(1, 2));

  // Atom at 1/2: a binomial row conditioned on m >= 1.
  const auto coin = decrement_from_phi(Measure::finite_atoms({{Q(1, 2), Q(1)}}), 10);
  for (unsigned n = 1; n <= 10; ++n) {
    const Q norm = 1 - power(Q(1, 2), n);
    for (unsigned k = 1; k <= n; ++k) CHECK(coin(n, k) == binomial<Q>(n, k) * power(Q(1, 2), n) / norm);
  }

  for (const auto& [a, t] : {std::pair{Q(0), Q(2)}, {Q(1, 3), Q(2, 3)}, {Q(2, 3), Q(0)}, {Q(1, 4), Q(5)}}) {
    const auto from_phi = decrement_from_phi(Measure::alpha_theta(a, t), 20);
    const auto direct = decrement_matrix(ExtParams<Q>::two_param(a, t), 20);
    for (unsigned n = 1; n <= 20; ++n) {
      for (unsigned k = 1; k <= n; ++k) CHECK(from_phi(n, k) == direct(n, k));
    }
  }

  // Float mode divides values, so the unit cancels too.
  const auto fd = decrement_from_phi(MeasureD::alpha_theta(0.5, 0.5), 12);
  for (unsigned n = 1; n <= 12; ++n) {
    for (unsigned k = 1; k <= n; ++k) CHECK(fd(n, k) == doctest::Approx(to_double(half(n, k))).epsilon(1e-12));
  }
}

TEST_CASE("decrement from atoms is scale invariant") {
  const auto a = decrement_from_phi(Measure::finite_atoms({{Q(1, 3), Q(2)}, {Q(3, 4), Q(1, 5)}, {Q(1), Q(1, 7)}}), 12);
  const auto b = decrement_from_phi(Measure::finite_atoms({{Q(1, 3), Q(6)}, {Q(3, 4), Q(3, 5)}, {Q(1), Q(3, 7)}}), 12);
  for (unsigned n = 1; n <= 12; ++n) {
    CHECK(a.row_sum(n) == 1);
    for (unsigned k = 1; k <= n; ++k) CHECK(a(n, k) == b(n, k));
  }
  // Moving one weight changes the rows: the comparison is not vacuous.
  const auto c = decrement_from_phi(Measure::finite_atoms({{Q(1, 3), Q(6)}, {Q(3, 4), Q(3, 5)}, {Q(1), Q(1, 7)}}), 12);
  CHECK(a(5, 5) != c(5, 5));
}

TEST_CASE("measure validation") {
  CHECK(error_kind([] { Measure::alpha_theta(1, 0); }) == ErrorKind::DivergentMeasure);
  CHECK(error_kind([] { Measure::alpha_theta(Q(-1, 2), 1); }) == ErrorKind::InvalidParams);
  CHECK(error_kind([] { Measure::alpha_theta(Q(1, 2), -1); }) == ErrorKind::InvalidParams);
  CHECK(error_kind([] { Measure::finite_atoms({{Q(0), Q(1)}}); }) == ErrorKind::OutOfRange);
  CHECK(error_kind([] { Measure::finite_atoms({{Q(1, 2), Q(0)}}); }) == ErrorKind::InvalidParams);
  CHECK(error_kind([] { Measure::finite_atoms({}); }) == ErrorKind::InvalidParams);
}

TEST_CASE("stick-breaking and compound Poisson sets") {
  RngHandle rng(3);
  const auto path = compound_poisson_path(2.0, 1e-9, rng);
  for (std::size_t i = 1; i < path.levels.size(); ++i) {
    CHECK(path.levels[i] > path.levels[i - 1]);
    CHECK(path.times[i] > path.times[i - 1]);
  }
  const auto set = compound_poisson_set(2.0, 1e-9, rng);
  CHECK(set.residual() < 1e-9);
  CHECK(set.total_length() + set.residual() == doctest::Approx(1.0));
  CHECK(error_kind([&] { stick_breaking_set(0.0, 1e-3, rng); }) == ErrorKind::InvalidParams);

  // First gap ~ beta(1, theta) for both constructions.
  const double theta = 2.0;
  for (int which = 0; which < 2; ++which) {
    const auto sums = mc_moments(40000, 50 + which, 1, [&](RngHandle& r, std::vector<double>& out) {
      const auto s = which == 0 ? stick_breaking_set(theta, 1e-9, r) : compound_poisson_set(theta, 1e-9, r);
      out[0] = s.intervals()[0].length();
    });
    CHECK(std::abs(sums.mean(0) - 1.0 / (1.0 + theta)) < 4 * sums.standard_error(0));
  }
}

TEST_CASE("leftmost deletion on (0, theta) sets follows the decrement rows") {
  const double theta = 1.5;
  const auto q = decrement_from_phi(MeasureD::alpha_theta(0.0, theta), 6);
  CHECK(leftmost_fit(q, 6, 30000, 61, [&](RngHandle& r) { return stick_breaking_set(theta, 1e-9, r); }) > 1e-4);
  CHECK(leftmost_fit(q, 6, 30000, 62, [&](RngHandle& r) { return compound_poisson_set(theta, 1e-9, r); }) > 1e-4);
  // Negative control: a theta = 4 set against the theta = 1.5 row.
  CHECK(leftmost_fit(q, 6, 30000, 63, [&](RngHandle& r) { return stick_breaking_set(4.0, 1e-9, r); }) < 1e-6);
}

TEST_CASE("leftmost deletion edge cases") {
  RngHandle rng(4);
  const IntervalSet whole({{0.0, 1.0}}, 0.0);
  const auto all = leftmost_delete(whole, 5, rng);
  CHECK(all.deleted_size == 5);
  CHECK(all.remainder.n() == 0);
  const auto set = stick_breaking_set(1.0, 1e-6, rng);
  for (int i = 0; i < 20; ++i) CHECK(leftmost_delete(set, 1, rng).deleted_size == 1);
  CHECK(error_kind([&] { leftmost_delete(set, 0, rng); }) == ErrorKind::OutOfRange);
}

TEST_CASE("ordered arrangements") {
  RngHandle rng(5);
  const auto one = ordered_arrangement(FrequencyVector<double>{{1.0}, 0.0, 0.0}, RecordTilt<double>::finite(1.0), rng);
  REQUIRE(one.intervals().size() == 1);
  CHECK(one.intervals()[0].left == 0.0);
  CHECK(one.intervals()[0].right == 1.0);

  // Standard order of GEM(0, theta) is the stick-breaking set itself.
  const auto p = ExtParams<double>::two_param(0.0, 1.3);
  RngHandle a(77);
  RngHandle b(77);
  const auto arranged = ordered_arrangement(gem_sample(p, 1e-8, a).frequencies, RecordTilt<double>::standard_order(), a);
  const auto sticks = stick_breaking_set(1.3, 1e-8, b);
  REQUIRE(arranged.intervals().size() == sticks.intervals().size());
  for (std::size_t i = 0; i < sticks.intervals().size(); ++i) {
    CHECK(arranged.intervals()[i].left == doctest::Approx(sticks.intervals()[i].left).epsilon(1e-12));
    CHECK(arranged.intervals()[i].right == doctest::Approx(sticks.intervals()[i].right).epsilon(1e-12));
  }

  // xi = 1 shuffles uniformly: the first interval is each frequency with
  // probability 1/3.
  const FrequencyVector<double> f{{0.5, 0.3, 0.2}, 0.0, 0.0};
  const auto counts = mc_histogram(30000, 64, 3, [&](RngHandle& r) {
    const double len = ordered_arrangement(f, RecordTilt<double>::finite(1.0), r).intervals()[0].length();
    return static_cast<std::size_t>(len > 0.45 ? 0 : (len > 0.25 ? 1 : 2));
  });
  CHECK(chi_square(counts, std::vector<double>(3, 1.0 / 3)).p_value > 1e-4);

  CHECK(error_kind([&] { ordered_arrangement(FrequencyVector<double>{{0.5}, 0.5, 0.0}, RecordTilt<double>::finite(1.0), rng); }) ==
        ErrorKind::InvalidParams);
}

TEST_CASE("ordered GEM(alpha, theta) with xi = theta/alpha regenerates") {
  const auto q = decrement_matrix(ExtParams<double>::two_param(0.25, 0.75), 5);
  const auto p = ExtParams<double>::two_param(0.25, 0.75);
  const auto xi = RecordTilt<double>::finite(3.0);
  CHECK(leftmost_fit(q, 5, 20000, 65, [&](RngHandle& r) {
          return ordered_arrangement(gem_sample(p, 1e-5, r).frequencies, xi, r);
        }) > 1e-4);
  // The standard order (xi = infinity) is a different law.
  CHECK(leftmost_fit(q, 5, 20000, 66, [&](RngHandle& r) {
          return ordered_arrangement(gem_sample(p, 1e-5, r).frequencies, RecordTilt<double>::standard_order(), r);
        }) < 1e-6);
}

TEST_CASE("cross-breed sets") {
  RngHandle rng(6);
  const auto set = crossbreed_set(1.0 / 3, 1.0, 1e-6, rng);
  CHECK(set.total_length() + set.residual() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(error_kind([&] { crossbreed_set(0.0, 1.0, 1e-3, rng); }) == ErrorKind::InvalidParams);
  CHECK(error_kind([&] { crossbreed_set(0.5, 0.0, 1e-3, rng); }) == ErrorKind::InvalidParams);

  const auto q = decrement_matrix(ExtParams<double>::two_param(1.0 / 3, 1.0), 5);
  CHECK(leftmost_fit(q, 5, 20000, 67, [&](RngHandle& r) { return crossbreed_set(1.0 / 3, 1.0, 1e-4, r); }) > 1e-4);
}
