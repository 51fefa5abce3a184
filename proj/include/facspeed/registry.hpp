#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "facspeed/benchmarks.hpp"

namespace facspeed::bench {

/// Benchmark parameters as given on the command line / in plan files (k=v).
using Params = std::map<std::string, std::string>;

struct ParamSpec {
  std::string name;
  std::string default_value;  // empty: derived or optional
  std::string help;
};

/// An instantiated benchmark with its input already built.
class Workload {
 public:
  virtual ~Workload() = default;
  /// Restores the input; not timed.
  virtual void reset() = 0;
  /// The timed region.
  virtual void run(Mode mode) = 0;
  /// Identifies the computed output (checksum or output hash).
  virtual std::uint64_t result_digest() const = 0;
};

struct BenchmarkInfo {
  std::string id;
  std::string description;
  bool has_elision = true;
  std::vector<ParamSpec> params;
  /// `target_p` resolves P-dependent parameters such as the adaptive cutoff.
  std::function<std::unique_ptr<Workload>(const Params&, std::size_t target_p)> make;
  /// True when some parameter depends on P, so one-core runs must be taken per P.
  std::function<bool(const Params&)> depends_on_p;
};

const std::vector<BenchmarkInfo>& registry();

/// Throws ConfigError for an unknown id.
const BenchmarkInfo& find_benchmark(std::string_view id);

/// Rejects unknown keys and fills in defaults.
Params normalize_params(const BenchmarkInfo& info, const Params& given);

/// Parses "k=v"; throws ConfigError when there is no '='.
std::pair<std::string, std::string> parse_param(std::string_view kv);

ArrayBenchConfig array_config_from(const Params& params);
SortBenchConfig sort_config_from(const Params& params);

}  // namespace facspeed::bench
