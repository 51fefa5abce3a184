#include "facspeed/registry.hpp"

#include <charconv>

namespace facspeed::bench {
namespace {

std::uint64_t parse_uint(const Params& params, const std::string& key) {
  const std::string& text = params.at(key);
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("parameter " + key + "='" + text + "' is not a non-negative integer");
  }
  return value;
}

bool has(const Params& params, const std::string& key) {
  auto it = params.find(key);
  return it != params.end() && !it->second.empty();
}

class ArrayWorkload final : public Workload {
 public:
  explicit ArrayWorkload(const ArrayBenchConfig& config) : bench_(config) {}
  void reset() override { bench_.reset(); }
  void run(Mode mode) override { bench_.run(mode); }
  std::uint64_t result_digest() const override { return bench_.checksum(); }

 private:
  ArrayBench bench_;
};

class SortWorkload final : public Workload {
 public:
  SortWorkload(const SortBenchConfig& config, std::size_t target_p)
      : config_(config),
        cutoff_(config.effective_cutoff(target_p)),
        input_(sort_input(config.n, config.seed)),
        data_(input_) {}
  void reset() override { std::copy(input_.begin(), input_.end(), data_.begin()); }
  void run(Mode mode) override { cilksort(data_, mode, cutoff_, config_.insertion_threshold); }
  std::uint64_t result_digest() const override { return digest(data_); }

 private:
  SortBenchConfig config_;
  std::size_t cutoff_;
  std::vector<std::uint32_t> input_;
  std::vector<std::uint32_t> data_;
};

// A small balanced fork tree of empty leaves; used for smoke plans.
class NoopWorkload final : public Workload {
 public:
  explicit NoopWorkload(std::size_t depth) : depth_(depth) {}
  void reset() override { leaves_ = 0; }
  void run(Mode mode) override {
    if (mode == Mode::baseline) {
      leaves_.fetch_add(std::uint64_t{1} << depth_, std::memory_order_relaxed);
    } else if (mode == Mode::parallel) {
      tree(rt::ParallelFork{}, depth_);
    } else {
      tree(rt::SequentialFork{}, depth_);
    }
  }
  std::uint64_t result_digest() const override { return leaves_.load(); }

 private:
  template <class Fork>
  void tree(const Fork& fork, std::size_t depth) {
    if (depth == 0) {
      leaves_.fetch_add(1, std::memory_order_relaxed);
      return;
    }
    fork([&] { tree(fork, depth - 1); }, [&] { tree(fork, depth - 1); });
  }

  std::size_t depth_;
  std::atomic<std::uint64_t> leaves_{0};
};

std::vector<BenchmarkInfo> build_registry() {
  std::vector<BenchmarkInfo> out;

  BenchmarkInfo array;
  array.id = "array_gap";
  array.description = "array microbenchmark: L additions per cell, cells visited with gap G, R passes";
  array.params = {
      {"m", "1000000", "array cells (64-bit integers)"},
      {"l", "1", "additions per cell"},
      {"g", "1", "gap size; must divide m"},
      {"r", "", "repetitions (default 1, or ceil(4e8/m) with sweep=1)"},
      {"grain", "1000", "parallel_for leaf size"},
      {"sweep", "0", "1: fix m*r at 4e8"},
  };
  array.make = [](const Params& p, std::size_t) -> std::unique_ptr<Workload> {
    return std::make_unique<ArrayWorkload>(array_config_from(p));
  };
  array.depends_on_p = [](const Params&) { return false; };
  out.push_back(std::move(array));

  BenchmarkInfo sort;
  sort.id = "cilksort";
  sort.description = "parallel mergesort with parallel merge; quicksort below the cutoff";
  sort.params = {
      {"preset", "", "a|b|c|d|e|f: named (n, cutoff) configuration"},
      {"n", "", "array length (default 1000000)"},
      {"cutoff", "", "sequential cutoff, or 'adaptive' for round(8000/P) (default 1000)"},
      {"insertion_threshold", "20", "insertion sort at or below this size"},
      {"seed", "1", "input seed"},
  };
  sort.make = [](const Params& p, std::size_t target_p) -> std::unique_ptr<Workload> {
    return std::make_unique<SortWorkload>(sort_config_from(p), target_p);
  };
  sort.depends_on_p = [](const Params& p) { return sort_config_from(p).adaptive_cutoff; };
  out.push_back(std::move(sort));

  BenchmarkInfo noop;
  noop.id = "noop";
  noop.description = "balanced fork tree of empty tasks (harness smoke test)";
  noop.params = {{"depth", "4", "fork tree depth"}};
  noop.make = [](const Params& p, std::size_t) -> std::unique_ptr<Workload> {
    const auto depth = parse_uint(p, "depth");
    if (depth > 30) throw ConfigError("noop: depth must be <= 30");
    return std::make_unique<NoopWorkload>(static_cast<std::size_t>(depth));
  };
  noop.depends_on_p = [](const Params&) { return false; };
  out.push_back(std::move(noop));

  return out;
}

}  // namespace

const std::vector<BenchmarkInfo>& registry() {
  static const std::vector<BenchmarkInfo> benchmarks = build_registry();
  return benchmarks;
}

const BenchmarkInfo& find_benchmark(std::string_view id) {
  for (const auto& info : registry()) {
    if (info.id == id) return info;
  }
  throw ConfigError("unknown benchmark '" + std::string(id) + "'");
}

Params normalize_params(const BenchmarkInfo& info, const Params& given) {
  Params out;
  for (const auto& spec : info.params) out[spec.name] = spec.default_value;
  for (const auto& [key, value] : given) {
    if (!out.contains(key)) throw ConfigError(info.id + ": unknown parameter '" + key + "'");
    out[key] = value;
  }
  return out;
}

std::pair<std::string, std::string> parse_param(std::string_view kv) {
  const auto eq = kv.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("parameter '" + std::string(kv) + "' is not of the form key=value");
  }
  return {std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1))};
}

ArrayBenchConfig array_config_from(const Params& params) {
  const Params p = normalize_params(find_benchmark("array_gap"), params);
  ArrayBenchConfig c;
  c.m = parse_uint(p, "m");
  c.l = parse_uint(p, "l");
  c.g = parse_uint(p, "g");
  c.grain = parse_uint(p, "grain");
  const bool sweep = parse_uint(p, "sweep") != 0;
  if (sweep) {
    const std::size_t required = sweep_repetitions(c.m);
    if (has(p, "r") && parse_uint(p, "r") != required) {
      throw ConfigError("array_gap: sweep mode requires r = ceil(4e8/m) = " + std::to_string(required));
    }
    c.r = required;
  } else {
    c.r = has(p, "r") ? parse_uint(p, "r") : 1;
  }
  c.validate();
  return c;
}

SortBenchConfig sort_config_from(const Params& params) {
  const Params p = normalize_params(find_benchmark("cilksort"), params);
  SortBenchConfig c;
  if (has(p, "preset")) {
    auto preset = sort_preset(p.at("preset"));
    if (!preset) throw ConfigError("cilksort: unknown preset '" + p.at("preset") + "'");
    c = *preset;
  }
  if (has(p, "n")) c.n = parse_uint(p, "n");
  if (has(p, "cutoff")) {
    const std::string& v = p.at("cutoff");
    if (v == "adaptive" || v == "8000/P") {
      c.adaptive_cutoff = true;
    } else {
      c.adaptive_cutoff = false;
      c.cutoff = parse_uint(p, "cutoff");
    }
  }
  c.insertion_threshold = parse_uint(p, "insertion_threshold");
  c.seed = parse_uint(p, "seed");
  c.validate();
  return c;
}

}  // namespace facspeed::bench
