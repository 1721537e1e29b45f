#include <doctest.h>

#include "partlab/deletion.hpp"
#include "partlab/kernels.hpp"
#include "partlab/oracle.hpp"
#include "partlab/samplers.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace partlab;
using support::error_kind;
using Q = Rational;

namespace {

std::vector<ExtParams<Q>> kernel_grid() {
  return {ExtParams<Q>::two_param(0, 1), ExtParams<Q>::two_param(0, 2), ExtParams<Q>::two_param(Q(1, 2), Q(1, 2)),
          ExtParams<Q>::two_param(Q(1, 3), Q(2, 3)), ExtParams<Q>::two_param(Q(2, 3), 0)};
}

}  // namespace

TEST_CASE("deletion kernel values") {
  const auto equal = ExtParams<Q>::two_param(Q(1, 3), Q(1, 3));
  const Composition lambda({3, 1, 2, 2});
  for (std::size_t j = 0; j < lambda.k(); ++j) CHECK(deletion_kernel(equal, lambda, j) == Q(1, 4));
  CHECK(deletion_kernel(ExtParams<Q>::two_param(0, 3), Composition({2, 1, 1}), 0) == Q(1, 2));
  CHECK(deletion_kernel(ExtParams<Q>::two_param(Q(1, 2), 0), Composition({2, 1, 1}), 0) == Q(1, 4));
  CHECK(error_kind([] { deletion_kernel(ExtParams<Q>::neg_alpha(-1, 3), Composition({1, 1}), 0); }) ==
        ErrorKind::UnsupportedKernel);
  CHECK(error_kind([] { deletion_kernel(ExtParams<Q>::two_param(Q(1, 2), Q(-1, 4)), Composition({1, 1}), 0); }) ==
        ErrorKind::UnsupportedKernel);
  CHECK(error_kind([] { deletion_kernel(ExtParams<Q>::coupon(3), Composition({1, 1}), 0); }) ==
        ErrorKind::UnsupportedKernel);
}

TEST_CASE("deletion kernel is the tau-biased pick and sums to one") {
  for (const auto& p : kernel_grid()) {
    for (unsigned n = 1; n <= 9; ++n) {
      for (const auto& lambda : compositions(n)) {
        std::vector<Q> sizes(lambda.parts().begin(), lambda.parts().end());
        Q total = 0;
        for (std::size_t j = 0; j < lambda.k(); ++j) {
          const Q d = deletion_kernel(p, lambda, j);
          CHECK(d == tau_pick_probability<Q>(sizes, p.tau(), j));
          total += d;
        }
        CHECK(total == 1);
      }
    }
  }
}

TEST_CASE("decrement matrix rows") {
  const auto q = decrement_matrix(ExtParams<Q>::two_param(0, 1), 50);
  CHECK(q(1, 1) == 1);
  CHECK(q(2, 1) == Q(1, 2));
  CHECK(q(2, 2) == Q(1, 2));
  for (const auto& p : kernel_grid()) {
    const auto m = decrement_matrix(p, 50);
    for (unsigned n = 1; n <= 50; ++n) CHECK(m.row_sum(n) == 1);
  }
  // theta = 0 exercises the (1-alpha)_{n-1} / (n-1)! form of the m = n entry.
  CHECK(decrement_matrix(ExtParams<Q>::two_param(Q(1, 2), 0), 3)(3, 3) == Q(3, 8));
  CHECK(error_kind([] { decrement_matrix(ExtParams<Q>::neg_alpha(-1, 2), 3); }) == ErrorKind::UnsupportedKernel);
}

TEST_CASE("decrement matrix equals the law of the deleted block size") {
  // Independent route: seating probabilities times the kernel, summed over
  // every partition of [n].
  for (const auto& p : kernel_grid()) {
    const auto q = decrement_matrix(p, 7);
    for (unsigned n = 1; n <= 7; ++n) {
      std::vector<Q> row(n, Q(0));
      for_each_rgs(n, [&](const Rgs& rgs) {
        const Composition lambda = rgs_sizes(rgs);
        const Q prob = ref::seating_probability(p, rgs);
        for (std::size_t j = 0; j < lambda.k(); ++j) row[lambda[j] - 1] += prob * deletion_kernel(p, lambda, j);
      });
      for (unsigned m = 1; m <= n; ++m) CHECK(q(n, m) == row[m - 1]);
    }
  }
}

TEST_CASE("float decrement matrix tracks the exact one") {
  const auto exact = decrement_matrix(ExtParams<Q>::two_param(Q(1, 3), Q(2, 3)), 30);
  const auto approx = decrement_matrix(ExtParams<double>::two_param(1.0 / 3, 2.0 / 3), 30);
  for (unsigned n = 1; n <= 30; ++n) {
    for (unsigned m = 1; m <= n; ++m) CHECK(approx(n, m) == doctest::Approx(to_double(exact(n, m))).epsilon(1e-12));
  }
}

TEST_CASE("f1 consistency") {
  CHECK(f1_consistency(ExtParams<Q>::two_param(0, 1), 3, 1) == 0);
  CHECK(f1_consistency(ExtParams<Q>::two_param(Q(1, 2), Q(1, 2)), 4, 2) == 0);
  CHECK(f1_consistency(ExtParams<Q>::two_param(Q(1, 3), Q(2, 3)), 5, 1) == 0);
  for (const auto& p : kernel_grid()) {
    for (unsigned n = 1; n <= 9; ++n) {
      for (unsigned first = 1; first <= n; ++first) CHECK(f1_consistency(p, n, first) == 0);
    }
  }
  CHECK(error_kind([] { f1_consistency(ExtParams<Q>::two_param(0, 1), 13, 1); }) == ErrorKind::OutOfRange);
}

TEST_CASE("regeneration ratio depends on the rest of the composition for a foreign kernel") {
  // Uniform deletion (tau = 1/2) with Ewens weights is not regenerative:
  // the ratio must vary across compositions sharing the first part.
  const auto ewens = ExtParams<Q>::two_param(0, 1);
  const auto kernel = ExtParams<Q>::two_param(Q(1, 2), Q(1, 2));
  const auto ratio = [&](const Composition& lambda) -> Q {
    return deletion_kernel(kernel, lambda, 0) / deletion_kernel(ewens, lambda, 0) * regeneration_ratio(ewens, lambda);
  };
  CHECK(ratio(Composition({1, 3})) != ratio(Composition({1, 1, 1, 1})));
}

TEST_CASE("tau deletion") {
  RngHandle rng(1);
  const auto single = tau_delete(SetPartition(1, {{1}}), 0.3, rng);
  CHECK(single.deleted_size == 1);
  CHECK(single.remainder.n() == 0);

  const SetPartition p(3, {{1, 3}, {2}});
  const auto counts = mc_histogram(30000, 41, 2, [&](RngHandle& r) { return tau_delete(p, 0.0, r).deleted_size == 2 ? 0u : 1u; });
  CHECK(chi_square(counts, std::vector<double>{2.0 / 3, 1.0 / 3}).p_value > 1e-4);

  // Distinct block sizes, so the deleted size names the block.
  const SetPartition four(10, {{1}, {2, 3}, {4, 5, 6}, {7, 8, 9, 10}});
  const auto by_block = mc_histogram(40000, 43, 4, [&](RngHandle& r) { return tau_delete(four, 0.5, r).deleted_size - 1u; });
  CHECK(chi_square(by_block, std::vector<double>(4, 0.25)).p_value > 1e-4);
}

TEST_CASE("bulk deletion") {
  RngHandle rng(2);
  const auto all = bulk_delete(FrequencyVector<double>{{1.0}, 0.0, 0.0}, rng);
  CHECK(all.deleted == std::vector<double>{1.0});
  CHECK_FALSE(all.remainder.has_value());

  const FrequencyVector<double> halves{{0.5, 0.5}, 0.0, 0.0};
  bool saw_first = false;
  for (int i = 0; i < 50; ++i) {
    const auto d = bulk_delete(halves, rng);
    if (d.deleted.size() == 1) {
      saw_first = true;
      REQUIRE(d.remainder.has_value());
      CHECK(d.remainder->p == std::vector<double>{1.0});
    } else {
      CHECK_FALSE(d.remainder.has_value());
    }
  }
  CHECK(saw_first);

  const FrequencyVector<double> leaky{{0.1}, 0.0, 0.9};
  CHECK(error_kind([&] {
          for (int i = 0; i < 200; ++i) bulk_delete(leaky, rng);
        }) == ErrorKind::DegenerateMass);
  CHECK(error_kind([&] { bulk_delete(FrequencyVector<double>{{0.5}, 0.5, 0.0}, rng); }) == ErrorKind::InvalidParams);
}

TEST_CASE("bulk deletion of GEM(0, theta) regenerates") {
  // The first remaining frequency is again beta(1, theta): mean 1/(1+theta),
  // second moment 2/((1+theta)(2+theta)).
  const double theta = 1.5;
  const auto p = ExtParams<double>::two_param(0.0, theta);
  const auto sums = mc_moments(40000, 44, 2, [&](RngHandle& r, std::vector<double>& out) {
    for (;;) {
      const auto d = bulk_delete(gem_sample(p, 1e-12, r).frequencies, r);
      if (!d.remainder) continue;
      out[0] = d.remainder->p[0];
      out[1] = out[0] * out[0];
      return;
    }
  });
  CHECK(std::abs(sums.mean(0) - 1.0 / (1.0 + theta)) < 4 * sums.standard_error(0));
  CHECK(std::abs(sums.mean(1) - 2.0 / ((1.0 + theta) * (2.0 + theta))) < 4 * sums.standard_error(1));
}
