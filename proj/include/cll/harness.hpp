#pragma once
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace cll {

// splitmix64 finalizer.
uint64_t mix64(uint64_t x);
// Seed of the RNG stream for a sample block: streams are indexed by block, never by worker.
uint64_t block_seed(uint64_t master, uint64_t block);

// Exact sums of a per-sample integer statistic.
struct StatAccum {
  uint64_t n = 0;
  __int128 s1 = 0, s2 = 0;
  void add(int64_t x) {
    ++n;
    s1 += x;
    s2 += static_cast<__int128>(x) * x;
  }
  void merge(const StatAccum& o) {
    n += o.n;
    s1 += o.s1;
    s2 += o.s2;
  }
  double mean() const;
  double stderr_() const;  // sample standard deviation / sqrt(n)
  bool all_zero() const { return s2 == 0; }
};

constexpr uint64_t kBlockSize = 256;

// Runs samples in blocks of kBlockSize on the given number of threads. fn(rng, values) fills one
// value per statistic for a single sample. Results do not depend on the thread count.
std::vector<StatAccum> run_blocks(uint64_t samples, uint64_t seed, int threads, size_t nstats,
                                  const std::function<void(std::mt19937_64&, std::vector<int64_t>&)>& fn);

// Thread count from CLL_THREADS when set, otherwise the requested value (at least 1).
int effective_threads(int requested);

// Writes content to path through a temporary file and rename.
void atomic_write(const std::string& path, const std::string& content);
// Appends one line atomically (rewrites the file through a temporary).
void atomic_append_line(const std::string& path, const std::string& line);

// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& s);

}  // namespace cll
