#include <doctest.h>

#include <atomic>
#include <cstdlib>

#include "partlab/kernels.hpp"
#include "partlab/samplers.hpp"
#include "support.hpp"

using namespace partlab;
using support::error_kind;
using Q = Rational;

namespace {

// 3 chunks plus a partial one.
constexpr std::uint64_t kSamples = 3 * kChunkSize + 123;

std::size_t crp_blocks(RngHandle& rng) {
  static const auto p = ExtParams<double>::two_param(0.5, 0.5);
  return crp_sample(p, 8, rng).k() - 1;
}

}  // namespace

TEST_CASE("worker count honours the environment cap") {
  setenv("PARTITION_LAB_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  setenv("PARTITION_LAB_THREADS", "junk", 1);
  const int fallback = worker_count();
  CHECK(fallback >= 1);
  setenv("PARTITION_LAB_THREADS", "100000", 1);
  CHECK(worker_count() == fallback);
  unsetenv("PARTITION_LAB_THREADS");
}

TEST_CASE("parallel histogram equals the serial reference") {
  const auto serial = mc_histogram(kSamples, 5, 8, crp_blocks, Execution::Serial);
  const auto parallel = mc_histogram(kSamples, 5, 8, crp_blocks, Execution::Parallel);
  CHECK(serial == parallel);
  std::uint64_t total = 0;
  for (auto c : serial) total += c;
  CHECK(total == kSamples);
  CHECK(mc_histogram(kSamples, 6, 8, crp_blocks, Execution::Serial) != serial);

  setenv("PARTITION_LAB_THREADS", "1", 1);
  CHECK(mc_histogram(kSamples, 5, 8, crp_blocks, Execution::Parallel) == serial);
  unsetenv("PARTITION_LAB_THREADS");
}

TEST_CASE("parallel moments and collections equal the serial reference") {
  const auto p = ExtParams<double>::two_param(1.0 / 3, 2.0 / 3);
  const DrawVector draw = [&](RngHandle& rng, std::vector<double>& out) {
    const auto w = gem_fractions(p, 2, rng).w;
    out[0] = w[0];
    out[1] = w[1];
  };
  const auto a = mc_moments(kSamples, 9, 2, draw, Execution::Serial);
  const auto b = mc_moments(kSamples, 9, 2, draw, Execution::Parallel);
  CHECK(a.samples == kSamples);
  CHECK(a.sum == b.sum);
  CHECK(a.sum_squares == b.sum_squares);
  CHECK(a.mean(0) == doctest::Approx(0.4).epsilon(0.05));  // beta(2/3, 1)

  const auto c = mc_collect(kSamples, 9, 2, draw, Execution::Serial);
  const auto d = mc_collect(kSamples, 9, 2, draw, Execution::Parallel);
  CHECK(c == d);
  REQUIRE(c.size() == 2);
  CHECK(c[0].size() == kSamples);
}

TEST_CASE("exact totals agree across execution modes") {
  const std::vector<ExtParams<Q>> params{ExtParams<Q>::two_param(Q(1, 2), Q(1, 2)), ExtParams<Q>::neg_alpha(-1, 3),
                                         ExtParams<Q>::coupon(4)};
  for (const auto& p : params) {
    for (unsigned n : {1u, 4u, 6u, 8u}) {
      const Q serial = eppf_total(p, n, Execution::Serial);
      CHECK(serial == 1);
      CHECK(eppf_total(p, n, Execution::Parallel) == serial);
    }
  }
  CHECK(eppf_total(ExtParams<double>::two_param(0.5, 0.5), 8) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("parallel_for visits every index and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), Execution::Parallel, [&](std::uint64_t i) { hits[i]++; });
  bool all_once = true;
  for (auto& h : hits) all_once = all_once && h.load() == 1;
  CHECK(all_once);

  CHECK(error_kind([] {
          parallel_for(100, Execution::Parallel, [](std::uint64_t i) {
            if (i == 57) throw Error(ErrorKind::OracleFailure, "boom");
          });
        }) == ErrorKind::OracleFailure);
  CHECK(error_kind([] { mc_histogram(10, 1, 2, [](RngHandle&) { return std::size_t{5}; }, Execution::Serial); }) ==
        ErrorKind::OutOfRange);
}
