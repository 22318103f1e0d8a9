#include "cll/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "cll/errors.hpp"

namespace cll {

uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t block_seed(uint64_t master, uint64_t block) { return mix64(mix64(master) ^ mix64(block + 1)); }

double StatAccum::mean() const { return n ? static_cast<double>(static_cast<long double>(s1) / n) : 0.0; }

double StatAccum::stderr_() const {
  if (n < 2) return 0.0;
  long double m = static_cast<long double>(s1) / n;
  long double var = (static_cast<long double>(s2) - m * static_cast<long double>(s1)) / (n - 1);
  if (var < 0) var = 0;
  return static_cast<double>(std::sqrt(var / n));
}

std::vector<StatAccum> run_blocks(uint64_t samples, uint64_t seed, int threads, size_t nstats,
                                  const std::function<void(std::mt19937_64&, std::vector<int64_t>&)>& fn) {
  const uint64_t nblocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<std::vector<StatAccum>> per_block(nblocks, std::vector<StatAccum>(nstats));
  std::atomic<uint64_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&]() {
    std::vector<int64_t> vals(nstats);
    while (true) {
      uint64_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      {
        std::lock_guard<std::mutex> lk(err_mu);
        if (err) return;
      }
      try {
        std::mt19937_64 rng(block_seed(seed, b));
        const uint64_t lo = b * kBlockSize, hi = std::min(samples, lo + kBlockSize);
        for (uint64_t s = lo; s < hi; ++s) {
          std::fill(vals.begin(), vals.end(), 0);
          fn(rng, vals);
          for (size_t k = 0; k < nstats; ++k) per_block[b][k].add(vals[k]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  const int nt = std::max(1, threads);
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  std::vector<StatAccum> out(nstats);
  for (const auto& blk : per_block)
    for (size_t k = 0; k < nstats; ++k) out[k].merge(blk[k]);
  return out;
}

int effective_threads(int requested) {
  if (const char* env = std::getenv("CLL_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<int>(v);
  }
  return std::max(1, requested);
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(f), Err::IoError, "cannot open " + tmp);
    f << content;
    f.flush();
    require(static_cast<bool>(f), Err::IoError, "write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail(Err::IoError, "cannot rename onto " + path);
  }
}

void atomic_append_line(const std::string& path, const std::string& line) {
  std::string existing;
  {
    std::ifstream f(path, std::ios::binary);
    if (f) {
      std::ostringstream ss;
      ss << f.rdbuf();
      existing = ss.str();
      if (!existing.empty() && existing.back() != '\n') existing.push_back('\n');
    }
  }
  atomic_write(path, existing + line + "\n");
}

std::string fnv1a_hex(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cll
