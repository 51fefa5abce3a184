#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "facspeed/benchmarks.hpp"

namespace facspeed::bench {

std::size_t SortBenchConfig::effective_cutoff(std::size_t p) const {
  if (!adaptive_cutoff) return cutoff;
  if (p == 0) throw ConfigError("cilksort: P must be >= 1");
  const auto rounded = static_cast<std::size_t>(
      std::llround(static_cast<double>(kAdaptiveCutoffNumerator) / static_cast<double>(p)));
  return std::max(rounded, insertion_threshold);
}

void SortBenchConfig::validate() const {
  if (n == 0) throw ConfigError("cilksort: n must be >= 1");
  if (insertion_threshold == 0) throw ConfigError("cilksort: insertion_threshold must be >= 1");
  if (!adaptive_cutoff && cutoff < insertion_threshold) {
    throw ConfigError("cilksort: cutoff " + std::to_string(cutoff) +
                      " is below the insertion threshold " + std::to_string(insertion_threshold));
  }
}

std::optional<SortBenchConfig> sort_preset(std::string_view name) {
  SortBenchConfig c;
  if (name == "a") {
    c.n = 200'000, c.cutoff = 200;
  } else if (name == "b") {
    c.n = 200'000, c.cutoff = 10'000;
  } else if (name == "c") {
    c.n = 10'000'000, c.cutoff = 200;
  } else if (name == "d") {
    c.n = 10'000'000, c.cutoff = 1000;
  } else if (name == "e") {
    c.n = 100'000'000, c.cutoff = 1000;
  } else if (name == "f") {
    c.n = 10'000'000, c.adaptive_cutoff = true;
  } else {
    return std::nullopt;
  }
  return c;
}

std::vector<std::uint32_t> sort_input(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::uint32_t> out(n);
  for (auto& v : out) v = static_cast<std::uint32_t>(gen() >> 32);
  return out;
}

void insertion_sort(std::span<std::uint32_t> a) noexcept {
  for (std::size_t i = 1; i < a.size(); ++i) {
    const std::uint32_t v = a[i];
    std::size_t j = i;
    for (; j > 0 && v < a[j - 1]; --j) a[j] = a[j - 1];
    a[j] = v;
  }
}

void quicksort(std::span<std::uint32_t> a, std::size_t insertion_threshold) noexcept {
  std::uint32_t* lo = a.data();
  std::uint32_t* hi = a.data() + a.size();
  while (static_cast<std::size_t>(hi - lo) > insertion_threshold && hi - lo > 2) {
    std::uint32_t* mid = lo + (hi - lo - 1) / 2;
    std::uint32_t* last = hi - 1;
    if (*mid < *lo) std::swap(*mid, *lo);
    if (*last < *mid) {
      std::swap(*last, *mid);
      if (*mid < *lo) std::swap(*mid, *lo);
    }
    const std::uint32_t pivot = *mid;

    // Hoare partition: [lo, j] <= pivot <= [j+1, hi)
    std::uint32_t* i = lo - 1;
    std::uint32_t* j = hi;
    for (;;) {
      do ++i; while (*i < pivot);
      do --j; while (pivot < *j);
      if (i >= j) break;
      std::swap(*i, *j);
    }
    std::uint32_t* split = j + 1;
    if (split - lo < hi - split) {
      quicksort({lo, split}, insertion_threshold);
      lo = split;
    } else {
      quicksort({split, hi}, insertion_threshold);
      hi = split;
    }
  }
  insertion_sort({lo, hi});
}

void sequential_merge(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                      std::span<std::uint32_t> out) noexcept {
  std::merge(a.begin(), a.end(), b.begin(), b.end(), out.begin());
}

void parallel_merge(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                    std::span<std::uint32_t> out, std::size_t cutoff) {
  if (out.size() != a.size() + b.size()) throw ConfigError("parallel_merge: output size mismatch");
  merge_with(rt::ParallelFork{}, a, b, out, std::max<std::size_t>(cutoff, 1));
}

namespace {

// Sorts `a`; the result lands in `tmp` when into_tmp, else in `a`. Children
// sort into the opposite buffer so each merge reads one buffer and writes the
// other.
template <class Fork>
void sort_into(const Fork& fork, std::span<std::uint32_t> a, std::span<std::uint32_t> tmp,
               bool into_tmp, std::size_t cutoff, std::size_t insertion_threshold) {
  const std::size_t n = a.size();
  if (n <= cutoff) {
    quicksort(a, insertion_threshold);
    if (into_tmp) std::copy(a.begin(), a.end(), tmp.begin());
    return;
  }
  const std::size_t half = n / 2;
  fork([&] { sort_into(fork, a.first(half), tmp.first(half), !into_tmp, cutoff, insertion_threshold); },
       [&] { sort_into(fork, a.subspan(half), tmp.subspan(half), !into_tmp, cutoff, insertion_threshold); });
  std::span<std::uint32_t> src = into_tmp ? a : tmp;
  std::span<std::uint32_t> dst = into_tmp ? tmp : a;
  merge_with(fork, std::span<const std::uint32_t>(src.first(half)),
             std::span<const std::uint32_t>(src.subspan(half)), dst, cutoff);
}

struct CountingFork {
  std::uint64_t* forks;
  template <class L, class R>
  void operator()(L&& left, R&& right) const {
    ++*forks;
    left();
    right();
  }
};

}  // namespace

void cilksort(std::span<std::uint32_t> data, Mode mode, std::size_t cutoff,
              std::size_t insertion_threshold) {
  if (data.size() < 2) return;
  if (mode == Mode::baseline) {
    quicksort(data, insertion_threshold);
    return;
  }
  cutoff = std::max<std::size_t>(cutoff, 1);
  if (data.size() <= cutoff) {
    quicksort(data, insertion_threshold);
    return;
  }
  std::vector<std::uint32_t> tmp(data.size());
  if (mode == Mode::parallel) {
    sort_into(rt::ParallelFork{}, data, std::span(tmp), false, cutoff, insertion_threshold);
  } else {
    sort_into(rt::SequentialFork{}, data, std::span(tmp), false, cutoff, insertion_threshold);
  }
}

std::uint64_t cilksort_fork_count(std::span<const std::uint32_t> input, std::size_t cutoff,
                                  std::size_t insertion_threshold) {
  std::vector<std::uint32_t> data(input.begin(), input.end());
  if (data.size() < 2) return 0;
  cutoff = std::max<std::size_t>(cutoff, 1);
  std::vector<std::uint32_t> tmp(data.size());
  std::uint64_t forks = 0;
  sort_into(CountingFork{&forks}, std::span(data), std::span(tmp), false, cutoff,
            insertion_threshold);
  return forks;
}

std::uint64_t digest(std::span<const std::uint32_t> values) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint32_t v : values) {
    for (int byte = 0; byte < 4; ++byte) {
      h ^= (v >> (8 * byte)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

}  // namespace facspeed::bench
