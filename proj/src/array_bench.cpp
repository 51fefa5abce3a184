#include <string>
#include <type_traits>

#include "facspeed/benchmarks.hpp"

namespace facspeed::bench {

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::parallel: return "parallel";
    case Mode::baseline: return "baseline";
    case Mode::elision: return "elision";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  if (text == "parallel") return Mode::parallel;
  if (text == "baseline") return Mode::baseline;
  if (text == "elision") return Mode::elision;
  throw ConfigError("unknown mode '" + std::string(text) + "'");
}

void ArrayBenchConfig::validate() const {
  if (m == 0 || l == 0 || g == 0 || r == 0) throw ConfigError("array_gap: m, l, g, r must all be >= 1");
  if (grain == 0) throw ConfigError("array_gap: grain must be >= 1");
  if (m % g != 0) {
    throw ConfigError("array_gap: m=" + std::to_string(m) + " is not divisible by g=" +
                      std::to_string(g) + "; the gap permutation would revisit cells");
  }
}

std::size_t sweep_repetitions(std::size_t m) {
  if (m == 0) throw ConfigError("array_gap: m must be >= 1");
  return static_cast<std::size_t>((kSweepOperations + m - 1) / m);
}

std::size_t gap_index(std::size_t i, std::size_t g, std::size_t m) {
  if (g == 0 || m == 0 || m % g != 0) {
    throw ConfigError("gap_index: g=" + std::to_string(g) + " must divide m=" + std::to_string(m));
  }
  if (i >= m) throw ConfigError("gap_index: i out of range");
  const std::size_t ig = i * g;
  return (ig + ig / m) % m;
}

ArrayBench::ArrayBench(const ArrayBenchConfig& config) : config_(config) {
  config_.validate();
  cells_.assign(config_.m, 0);
}

void ArrayBench::reset() { std::fill(cells_.begin(), cells_.end(), 0); }

namespace {
// Baseline: a plain loop over all cells, no recursive splitting.
struct Plain {};
}  // namespace

template <bool Counting, class Fork>
void ArrayBench::run_with(const Fork& fork) {
  const std::size_t m = config_.m;
  const std::size_t g = config_.g;
  const std::size_t l = config_.l;
  std::uint64_t* const cells = cells_.data();
  std::atomic<std::uint64_t>* const counter = counter_;

  // Walks gap_index(lo..hi) incrementally: i*g = q*m + rem, index = (rem + q) mod m.
  auto leaf = [=](std::size_t lo, std::size_t hi) {
    std::size_t q = lo * g / m;
    std::size_t rem = lo * g % m;
    for (std::size_t i = lo; i < hi; ++i) {
      std::size_t idx = rem + q;
      if (idx >= m) idx -= m;
      std::uint64_t v = cells[idx];
      for (std::size_t k = 0; k < l; ++k) {
        v += 1;
        asm volatile("" : "+r"(v));
      }
      cells[idx] = v;
      if constexpr (Counting) counter->fetch_add(1, std::memory_order_relaxed);
      rem += g;
      if (rem >= m) {
        rem -= m;
        ++q;
      }
    }
  };

  for (std::size_t rep = 0; rep < config_.r; ++rep) {
    if constexpr (std::is_same_v<Fork, Plain>) {
      leaf(0, m);
    } else {
      rt::for_range(fork, 0, m, config_.grain, leaf);
    }
  }
}

void ArrayBench::run(Mode mode) {
  const bool counting = counter_ != nullptr;
  switch (mode) {
    case Mode::parallel:
      counting ? run_with<true>(rt::ParallelFork{}) : run_with<false>(rt::ParallelFork{});
      break;
    case Mode::elision:
      counting ? run_with<true>(rt::SequentialFork{}) : run_with<false>(rt::SequentialFork{});
      break;
    case Mode::baseline:
      counting ? run_with<true>(Plain{}) : run_with<false>(Plain{});
      break;
  }
}

std::uint64_t ArrayBench::checksum() const noexcept {
  std::uint64_t sum = 0;
  for (auto v : cells_) sum += v;
  return sum;
}

}  // namespace facspeed::bench
