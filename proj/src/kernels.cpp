#include "partlab/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>

#include "partlab/eppf.hpp"
#include "partlab/oracle.hpp"

namespace partlab {

namespace {

std::uint64_t chunk_count(std::uint64_t samples) { return (samples + kChunkSize - 1) / kChunkSize; }

std::uint64_t chunk_length(std::uint64_t samples, std::uint64_t chunk) {
  const std::uint64_t begin = chunk * kChunkSize;
  return std::min(kChunkSize, samples - begin);
}

// Runs body(c) for every chunk; exceptions thrown by workers are rethrown
// on the calling thread.
template <class Body>
void for_each_chunk(std::uint64_t chunks, Execution execution, Body&& body) {
  if (execution == Execution::Serial) {
    for (std::uint64_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  const auto total = static_cast<std::int64_t>(chunks);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::int64_t c = 0; c < total; ++c) {
    try {
      body(static_cast<std::uint64_t>(c));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

int worker_count() {
  int workers = omp_get_max_threads();
  if (const char* env = std::getenv("PARTITION_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) workers = static_cast<int>(std::min<long>(v, workers));
  }
  return std::max(workers, 1);
}

void parallel_for(std::uint64_t count, Execution execution, const std::function<void(std::uint64_t)>& body) {
  for_each_chunk(count, execution, body);
}

std::vector<std::uint64_t> mc_histogram(std::uint64_t samples, std::uint64_t seed, std::size_t bins,
                                        const DrawIndex& draw, Execution execution) {
  const std::uint64_t chunks = chunk_count(samples);
  std::vector<std::vector<std::uint64_t>> partial(chunks);
  for_each_chunk(chunks, execution, [&](std::uint64_t c) {
    std::vector<std::uint64_t> local(bins, 0);
    RngHandle rng(split_seed(seed, c));
    for (std::uint64_t i = 0, len = chunk_length(samples, c); i < len; ++i) {
      const std::size_t b = draw(rng);
      if (b >= bins) throw Error(ErrorKind::OutOfRange, "draw outside the histogram");
      ++local[b];
    }
    partial[c] = std::move(local);
  });
  std::vector<std::uint64_t> counts(bins, 0);
  for (const auto& local : partial) {
    for (std::size_t b = 0; b < bins; ++b) counts[b] += local[b];
  }
  return counts;
}

double MomentSums::standard_error(std::size_t i) const {
  const double n = static_cast<double>(samples);
  const double m = sum[i] / n;
  const double var = std::max(0.0, (sum_squares[i] / n - m * m) * n / (n - 1.0));
  return std::sqrt(var / n);
}

MomentSums mc_moments(std::uint64_t samples, std::uint64_t seed, std::size_t dims, const DrawVector& draw,
                      Execution execution) {
  const std::uint64_t chunks = chunk_count(samples);
  std::vector<std::vector<double>> partial(chunks);
  for_each_chunk(chunks, execution, [&](std::uint64_t c) {
    std::vector<double> local(2 * dims, 0.0);
    std::vector<double> x(dims, 0.0);
    RngHandle rng(split_seed(seed, c));
    for (std::uint64_t i = 0, len = chunk_length(samples, c); i < len; ++i) {
      draw(rng, x);
      for (std::size_t d = 0; d < dims; ++d) {
        local[d] += x[d];
        local[dims + d] += x[d] * x[d];
      }
    }
    partial[c] = std::move(local);
  });
  MomentSums out;
  out.samples = samples;
  out.sum.assign(dims, 0.0);
  out.sum_squares.assign(dims, 0.0);
  for (const auto& local : partial) {
    for (std::size_t d = 0; d < dims; ++d) {
      out.sum[d] += local[d];
      out.sum_squares[d] += local[dims + d];
    }
  }
  return out;
}

std::vector<std::vector<double>> mc_collect(std::uint64_t samples, std::uint64_t seed, std::size_t dims,
                                            const DrawVector& draw, Execution execution) {
  const std::uint64_t chunks = chunk_count(samples);
  std::vector<std::vector<std::vector<double>>> partial(chunks);
  for_each_chunk(chunks, execution, [&](std::uint64_t c) {
    const std::uint64_t len = chunk_length(samples, c);
    std::vector<std::vector<double>> local(dims);
    for (auto& column : local) column.reserve(len);
    std::vector<double> x(dims, 0.0);
    RngHandle rng(split_seed(seed, c));
    for (std::uint64_t i = 0; i < len; ++i) {
      draw(rng, x);
      for (std::size_t d = 0; d < dims; ++d) local[d].push_back(x[d]);
    }
    partial[c] = std::move(local);
  });
  std::vector<std::vector<double>> out(dims);
  for (auto& column : out) column.reserve(samples);
  for (const auto& local : partial) {
    for (std::size_t d = 0; d < dims; ++d) out[d].insert(out[d].end(), local[d].begin(), local[d].end());
  }
  return out;
}

template <Scalar S>
S eppf_total(const ExtParams<S>& params, unsigned n, Execution execution) {
  if (n < 1 || n > kMaxEnumerationSize) throw Error(ErrorKind::OutOfRange, "enumeration supports 1 <= n <= 12");
  std::vector<Rgs> prefixes;
  for_each_rgs(std::min(n, 5U), [&](const Rgs& rgs) { prefixes.push_back(rgs); });
  std::vector<S> partial(prefixes.size(), from_int<S>(0));
  for_each_chunk(prefixes.size(), execution, [&](std::uint64_t c) {
    std::map<std::vector<unsigned>, S> cache;
    S local = from_int<S>(0);
    for_each_rgs(n, prefixes[c], [&](const Rgs& rgs) {
      const Composition sizes = rgs_sizes(rgs);
      auto it = cache.find(sizes.parts());
      if (it == cache.end()) it = cache.emplace(sizes.parts(), eppf(params, sizes)).first;
      local += it->second;
    });
    partial[c] = std::move(local);
  });
  S total = from_int<S>(0);
  for (const S& v : partial) total += v;
  return total;
}

template Rational eppf_total(const ExtParams<Rational>&, unsigned, Execution);
template double eppf_total(const ExtParams<double>&, unsigned, Execution);

}  // namespace partlab
