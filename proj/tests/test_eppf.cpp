#include <doctest.h>

#include <cmath>

#include "partlab/eppf.hpp"
#include "partlab/oracle.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace partlab;
using support::error_kind;
using Q = Rational;

namespace {

std::vector<ExtParams<Q>> grid() {
  return {ExtParams<Q>::two_param(0, 1),          ExtParams<Q>::two_param(0, 2),
          ExtParams<Q>::two_param(Q(1, 2), Q(1, 2)), ExtParams<Q>::two_param(Q(1, 3), Q(2, 3)),
          ExtParams<Q>::two_param(Q(2, 3), 0),    ExtParams<Q>::neg_alpha(-1, 3),
          ExtParams<Q>::coupon(3),                ExtParams<Q>::coupon(4)};
}

}  // namespace

TEST_CASE("eppf worked values") {
  CHECK(eppf(ExtParams<Q>::two_param(0, 1), Composition({1})) == 1);
  CHECK(eppf(ExtParams<Q>::two_param(0, 1), Composition({2, 1})) == Q(1, 6));
  CHECK(eppf(ExtParams<Q>::coupon(2), Composition({1, 1})) == Q(1, 2));
  CHECK(eppf(ExtParams<Q>::two_param(Q(1, 2), Q(1, 2)), Composition({2})) == Q(1, 3));
  // More blocks than types.
  CHECK(eppf(ExtParams<Q>::coupon(2), Composition({1, 1, 1})) == 0);
  CHECK(eppf(ExtParams<Q>::neg_alpha(-1, 2), Composition({1, 1, 1})) == 0);
}

TEST_CASE("eppf agrees with sequential seating on every partition") {
  for (const auto& p : grid()) {
    for (unsigned n = 1; n <= 6; ++n) {
      for_each_rgs(n, [&](const Rgs& rgs) {
        CHECK(eppf(p, rgs_sizes(rgs)) == ref::seating_probability(p, rgs));
      });
    }
  }
}

TEST_CASE("eppf is symmetric in the block sizes") {
  const auto p = ExtParams<Q>::two_param(Q(1, 3), Q(2, 3));
  CHECK(eppf(p, Composition({3, 1, 2})) == eppf(p, Composition({1, 2, 3})));
  CHECK(eppf(p, Composition({3, 1, 2})) == eppf(p, Composition({2, 3, 1})));
}

TEST_CASE("float eppf tracks the exact value") {
  const auto p = ExtParams<Q>::two_param(Q(1, 3), Q(2, 3));
  const Composition lambda({3, 1, 2});
  CHECK(eppf(to_double(p), lambda) == doctest::Approx(to_double(eppf(p, lambda))).epsilon(1e-14));
}

TEST_CASE("addition rule") {
  CHECK(addition_residual(ExtParams<Q>::two_param(0, 1), Composition({1})) == 0);
  CHECK(addition_residual(ExtParams<Q>::two_param(Q(1, 2), Q(1, 2)), Composition({3, 1, 2})) == 0);
  CHECK(addition_residual(ExtParams<Q>::coupon(3), Composition({2, 1})) == 0);
}

TEST_CASE("beta moments") {
  const BetaParams<Q> b(Q(1, 2), 1);
  CHECK(beta_moment(b, 1, 0) == Q(1, 3));
  CHECK(beta_moment(b, 0, 2) == Q(8, 15));
  CHECK(error_kind([] { BetaParams<Q>(0, 1); }) == ErrorKind::InvalidParams);
  for (auto [a, bb] : {std::pair{0.5, 1.0}, {1.0 / 3, 4.0 / 3}, {2.0, 0.7}}) {
    for (int r = 0; r <= 3; ++r) {
      for (int s = 0; s <= 3; ++s) {
        CHECK(beta_moment(BetaParams<double>(a, bb), r, s) ==
              doctest::Approx(ref::beta_moment_quadrature(a, bb, r, s)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("eppf from residual moments") {
  const auto ewens = ExtParams<Q>::two_param(0, 1);
  CHECK(eppf_from_moments(residual_moment_oracle(ewens), Composition({2, 1})) == Q(1, 6));
  CHECK(eppf_from_moments(residual_moment_oracle(ewens), Composition({1})) == 1);
  const auto half = ExtParams<Q>::two_param(Q(1, 2), Q(1, 2));
  CHECK(eppf_from_moments(residual_moment_oracle(half), Composition({2, 2})) == eppf(half, Composition({2, 2})));
  for (const auto& p : grid()) {
    for (unsigned n = 1; n <= 6; ++n) {
      for (const auto& c : compositions(n)) CHECK(eppf_from_moments(residual_moment_oracle(p), c) == eppf(p, c));
    }
  }
}

TEST_CASE("a wrong residual law is not exchangeable") {
  // beta(1 - alpha, theta) for every block, dropping the i alpha shift: still
  // a probability law on partitions, but not symmetric in the block sizes.
  const MomentOracle<Q> wrong = [](unsigned, std::uint64_t r, std::uint64_t s) -> std::optional<Q> {
    return beta_moment(BetaParams<Q>(Q(1, 2), Q(1, 2)), r, s);
  };
  Q total = 0;
  for_each_rgs(4, [&](const Rgs& rgs) { total += eppf_from_moments(wrong, rgs_sizes(rgs)); });
  CHECK(total == 1);
  CHECK(eppf_from_moments(wrong, Composition({2, 1})) == Q(1, 8));
  CHECK(eppf_from_moments(wrong, Composition({1, 2})) == Q(3, 16));
}

TEST_CASE("first block probabilities") {
  CHECK(q_first_block(ExtParams<Q>::two_param(0, 1), 1, 1) == 1);
  CHECK(q_first_block(ExtParams<Q>::two_param(0, 1), 2, 1) == Q(1, 2));
  CHECK(q_first_block(ExtParams<Q>::two_param(Q(1, 2), Q(1, 2)), 2, 2) == Q(1, 3));
  // Sum over partitions with B_1 cap [n] = [m].
  for (const auto& p : grid()) {
    for (unsigned n = 1; n <= 6; ++n) {
      for (unsigned m = 1; m <= n; ++m) {
        Q total = 0;
        for_each_rgs(n, [&](const Rgs& rgs) {
          for (unsigned i = 0; i < n; ++i) {
            if ((rgs[i] == 0) != (i < m)) return;
          }
          total += ref::seating_probability(p, rgs);
        });
        CHECK(q_first_block(p, n, m) == total);
      }
    }
  }
}

TEST_CASE("first colour count law") {
  CHECK(first_color_count_law(ExtParams<Q>::two_param(0, 1), 1, 1) == Q(1, 2));
  CHECK(first_color_count_law(ExtParams<Q>::two_param(Q(1, 2), Q(1, 2)), 2, 1) == Q(8, 15));
  CHECK(error_kind([] { first_color_count_law(ExtParams<Q>::two_param(0, 1), 0, 1); }) == ErrorKind::OutOfRange);

  for (const auto& p : grid()) {
    for (unsigned n = 1; n <= 4; ++n) {
      Q direct = 0;
      for (unsigned m = 1; m <= 12; ++m) direct += first_color_count_law(p, n, m);
      CHECK(first_color_partial_sum(p, n, 12) == direct);
      CHECK(direct + first_color_tail(p, n, 12) == 1);
      const double tail = to_double(first_color_tail(p, n, 30));
      CHECK(first_color_tail_asymptotic(to_double(p), n, 30) == doctest::Approx(tail).epsilon(1e-12));
    }
  }
}

TEST_CASE("derived eppf") {
  const auto ewens = ExtParams<Q>::two_param(0, 1);
  CHECK(derived_eppf_closed(ewens, Composition({1})) == 1);
  const auto half = ExtParams<Q>::two_param(Q(1, 2), Q(1, 2));
  CHECK(derived_eppf_closed(half, Composition({2})) == Q(1, 4));
  CHECK(derived_eppf_closed(ExtParams<Q>::coupon(3), Composition({1, 1})) == Q(1, 2));

  const auto series = derived_eppf(to_double(ExtParams<Q>::coupon(3)), Composition({1, 1}), 1e-13);
  CHECK(series.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(series.tail_bound < 1e-13);

  const auto ewens2 = derived_eppf(to_double(ExtParams<Q>::two_param(0, 2)), Composition({2, 1}), 1e-9);
  CHECK(ewens2.value == doctest::Approx(to_double(eppf(ExtParams<Q>::two_param(0, 2), Composition({2, 1}))))
                            .epsilon(1e-8));

  // Slow tail: alpha = 1/2, theta = 1/2 decays like l^-1 in the bound.
  const auto slow = derived_eppf(to_double(half), Composition({1}), 1e-4);
  CHECK(slow.value == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(error_kind([&] { derived_eppf(to_double(half), Composition({1}), 1e-12, 1000); }) ==
        ErrorKind::NonConvergence);
}

TEST_CASE("factorization") {
  CHECK(factorization_check(ExtParams<Q>::two_param(0, 1), Composition({2, 1})) == 0);
  CHECK(factorization_check(ExtParams<Q>::two_param(Q(1, 2), Q(1, 2)), Composition({1, 1, 1})) == 0);
  CHECK(factorization_check(ExtParams<Q>::two_param(0, 2), Composition({3, 2})) == 0);
  CHECK(error_kind([] { factorization_check(ExtParams<Q>::two_param(0, 1), Composition({3})); }) ==
        ErrorKind::OutOfRange);
  for (const auto& p : grid()) {
    for (unsigned n = 2; n <= 7; ++n) {
      for (const auto& c : compositions(n)) {
        if (c.k() >= 2) CHECK(factorization_check(p, c) == 0);
      }
    }
  }
}
