#pragma once

// Benchmark programs on the fork-join runtime. Each comes in three modes:
//   parallel  - fork2/parallel_for; must run inside rt::launch
//   baseline  - the best plain sequential program
//   elision   - the parallel code with every fork replaced by a sequence

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "facspeed/errors.hpp"
#include "facspeed/runtime.hpp"

namespace facspeed::bench {

enum class Mode { parallel, baseline, elision };

std::string_view to_string(Mode mode) noexcept;
Mode parse_mode(std::string_view text);

// ---------------------------------------------------------------------------
// Array microbenchmark

struct ArrayBenchConfig {
  std::size_t m = 1000;     // cells (64-bit)
  std::size_t l = 1;        // additions per cell
  std::size_t g = 1;        // gap size
  std::size_t r = 1;        // repetitions
  std::size_t grain = 1000;

  void validate() const;
};

/// Total operations m*r fixed by the size sweep.
inline constexpr std::uint64_t kSweepOperations = 400'000'000;

/// r = ceil(4e8 / m): keeps m*r constant across a size sweep.
std::size_t sweep_repetitions(std::size_t m);

/// Index of the i-th processed cell: (i*g + floor(i*g/m)) mod m.
/// A bijection on [0, m) only when g divides m; anything else is rejected.
std::size_t gap_index(std::size_t i, std::size_t g, std::size_t m);

class ArrayBench {
 public:
  explicit ArrayBench(const ArrayBenchConfig& config);

  /// Zeroes every cell.
  void reset();

  /// Processes every cell r times in the given mode.
  void run(Mode mode);

  /// Sum of all cells mod 2^64.
  std::uint64_t checksum() const noexcept;

  std::span<const std::uint64_t> cells() const noexcept { return cells_; }
  const ArrayBenchConfig& config() const noexcept { return config_; }

  /// When set, every cell-body execution increments the counter. Debug only.
  void set_body_counter(std::atomic<std::uint64_t>* counter) noexcept { counter_ = counter; }

 private:
  template <bool Counting, class Fork>
  void run_with(const Fork& fork);

  ArrayBenchConfig config_;
  std::vector<std::uint64_t> cells_;
  std::atomic<std::uint64_t>* counter_ = nullptr;
};

// ---------------------------------------------------------------------------
// Cilksort

inline constexpr std::size_t kInsertionThreshold = 20;
inline constexpr std::size_t kAdaptiveCutoffNumerator = 8000;

struct SortBenchConfig {
  std::size_t n = 1'000'000;
  std::size_t cutoff = 1000;
  bool adaptive_cutoff = false;  // cutoff = round(8000 / P)
  std::size_t insertion_threshold = kInsertionThreshold;
  std::uint64_t seed = 1;

  /// The cutoff used for a run on `p` workers.
  std::size_t effective_cutoff(std::size_t p) const;
  void validate() const;
};

/// Named configurations: a (200k, 200), b (200k, 10k), c (10m, 200),
/// d (10m, 1000), e (100m, 1000), f (10m, 8000/P).
std::optional<SortBenchConfig> sort_preset(std::string_view name);

/// Uniform 32-bit integers from `seed`.
std::vector<std::uint32_t> sort_input(std::size_t n, std::uint64_t seed);

void insertion_sort(std::span<std::uint32_t> a) noexcept;

/// Median-of-three quicksort, insertion sort at or below `insertion_threshold`.
void quicksort(std::span<std::uint32_t> a, std::size_t insertion_threshold = kInsertionThreshold) noexcept;

/// Stable merge, elements of `a` before equal elements of `b`.
void sequential_merge(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                      std::span<std::uint32_t> out) noexcept;

/// Divide-and-conquer merge: at or below `cutoff` total items it merges
/// sequentially; otherwise it splits the larger run at its median, locates the
/// split in the other run by binary search and forks the two halves.
template <class Fork>
void merge_with(const Fork& fork, std::span<const std::uint32_t> a,
                std::span<const std::uint32_t> b, std::span<std::uint32_t> out,
                std::size_t cutoff) {
  // Two single elements would split into an empty half and the same pair.
  if (a.size() + b.size() <= std::max<std::size_t>(cutoff, 2) || a.empty() || b.empty()) {
    sequential_merge(a, b, out);
    return;
  }
  std::size_t split_a;
  std::size_t split_b;
  if (a.size() >= b.size()) {
    split_a = a.size() / 2;
    split_b = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), a[split_a]) - b.begin());
  } else {
    split_b = b.size() / 2;
    split_a = static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), b[split_b]) - a.begin());
  }
  const std::size_t split_out = split_a + split_b;
  fork([&] { merge_with(fork, a.first(split_a), b.first(split_b), out.first(split_out), cutoff); },
       [&] {
         merge_with(fork, a.subspan(split_a), b.subspan(split_b), out.subspan(split_out), cutoff);
       });
}

/// parallel_merge as a runtime operation. cutoff 0 is treated as 1.
void parallel_merge(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                    std::span<std::uint32_t> out, std::size_t cutoff);

/// Sorts `data` in `mode`. Parallel mode must run inside rt::launch (outside
/// it forks degrade to sequences). `cutoff` is the already-resolved cutoff.
void cilksort(std::span<std::uint32_t> data, Mode mode, std::size_t cutoff,
              std::size_t insertion_threshold = kInsertionThreshold);

/// Number of forks the parallel structure executes when sorting `input`.
std::uint64_t cilksort_fork_count(std::span<const std::uint32_t> input, std::size_t cutoff,
                                  std::size_t insertion_threshold = kInsertionThreshold);

/// FNV-1a over the values; identifies a sorted output.
std::uint64_t digest(std::span<const std::uint32_t> values) noexcept;

}  // namespace facspeed::bench
