#pragma once

// Parallel Monte Carlo and enumeration kernels. Each has a serial reference
// with the same signature; both produce identical results because work is cut
// into fixed chunks, chunk c draws from RngHandle(split_seed(seed, c)), and
// chunk results are merged in chunk order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "partlab/core.hpp"
#include "partlab/rng.hpp"

namespace partlab {

enum class Execution { Serial, Parallel };

inline constexpr std::uint64_t kChunkSize = 4096;

/// Worker count: PARTITION_LAB_THREADS when set to a positive integer,
/// otherwise the OpenMP default.
int worker_count();

/// Calls body(i) for i in [0, count); exceptions from workers are rethrown.
void parallel_for(std::uint64_t count, Execution execution, const std::function<void(std::uint64_t)>& body);

/// Outcome index of one draw; must be < bins.
using DrawIndex = std::function<std::size_t(RngHandle&)>;

std::vector<std::uint64_t> mc_histogram(std::uint64_t samples, std::uint64_t seed, std::size_t bins,
                                        const DrawIndex& draw, Execution execution = Execution::Parallel);

/// Fills `out` (length dims) with the statistics of one draw.
using DrawVector = std::function<void(RngHandle&, std::vector<double>& out)>;

struct MomentSums {
  std::uint64_t samples = 0;
  std::vector<double> sum;
  std::vector<double> sum_squares;

  double mean(std::size_t i) const { return sum[i] / static_cast<double>(samples); }
  /// Standard error of mean(i).
  double standard_error(std::size_t i) const;
};

MomentSums mc_moments(std::uint64_t samples, std::uint64_t seed, std::size_t dims, const DrawVector& draw,
                      Execution execution = Execution::Parallel);

/// Collects one scalar per draw for each of `dims` coordinates, in draw order.
std::vector<std::vector<double>> mc_collect(std::uint64_t samples, std::uint64_t seed, std::size_t dims,
                                            const DrawVector& draw, Execution execution = Execution::Parallel);

/// Sum of the EPPF over all partitions of [n]; the parallel version splits
/// the growth strings by prefix.
template <Scalar S>
S eppf_total(const ExtParams<S>& params, unsigned n, Execution execution = Execution::Parallel);

}  // namespace partlab
