#include <fstream>
#include <sstream>

#include <json.hpp>

#include "facspeed/harness.hpp"

namespace facspeed::harness {
namespace {

using json = nlohmann::ordered_json;

// Field accessors that report the JSON path of whatever is wrong.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

  Reader at(const std::string& key) const {
    if (!node_.is_object()) fail(path_, "expected an object");
    auto it = node_.find(key);
    if (it == node_.end()) fail(child(key), "missing field");
    return Reader(*it, child(key));
  }
  bool has(const std::string& key) const {
    return node_.is_object() && node_.contains(key) && !node_.at(key).is_null();
  }
  Reader index(std::size_t i) const {
    return Reader(node_.at(i), path_ + "[" + std::to_string(i) + "]");
  }
  std::size_t size() const {
    if (!node_.is_array()) fail(path_, "expected an array");
    return node_.size();
  }

  double number() const {
    if (!node_.is_number()) fail(path_, "expected a number");
    return node_.get<double>();
  }
  std::uint64_t uint() const {
    if (!node_.is_number_unsigned() && !(node_.is_number_integer() && node_.get<std::int64_t>() >= 0)) {
      fail(path_, "expected a non-negative integer");
    }
    return node_.get<std::uint64_t>();
  }
  std::string string() const {
    if (!node_.is_string()) fail(path_, "expected a string");
    return node_.get<std::string>();
  }
  bool boolean() const {
    if (!node_.is_boolean()) fail(path_, "expected a boolean");
    return node_.get<bool>();
  }
  Nanos seconds() const {
    const double s = number();
    if (!(s >= 0)) fail(path_, "expected a non-negative time");
    return from_seconds(s);
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
  }

 private:
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& node_;
  std::string path_;
};

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     e.what());
  }
}

json params_json(const bench::Params& params) {
  json out = json::object();
  for (const auto& [k, v] : params) out[k] = v;
  return out;
}

bench::Params read_params(const Reader& r) {
  if (!r.node().is_object()) Reader::fail(r.path(), "expected an object");
  bench::Params out;
  for (const auto& [k, v] : r.node().items()) {
    if (v.is_string()) {
      out[k] = v.get<std::string>();
    } else if (v.is_number_integer() || v.is_number_unsigned() || v.is_boolean()) {
      out[k] = v.is_boolean() ? (v.get<bool>() ? "1" : "0") : v.dump();
    } else {
      Reader::fail(r.path() + "." + k, "expected a string or integer");
    }
  }
  return out;
}

json sample_json(const RunSample& s) {
  json j;
  j["benchmark_id"] = s.benchmark_id;
  j["params"] = params_json(s.params);
  j["kind"] = std::string(to_string(s.kind));
  j["p"] = s.p;
  if (s.target_p) j["target_p"] = *s.target_p;
  j["wall_time"] = to_seconds(s.wall_time);
  j["idle_time"] = to_seconds(s.idle_time);
  json idle = json::array();
  for (Nanos w : s.per_worker_idle) idle.push_back(to_seconds(w));
  j["per_worker_idle"] = idle;
  j["steals"] = s.steals;
  j["idle_phases"] = s.idle_phases;
  j["result_digest"] = s.result_digest;
  j["host"] = {{"hostname", s.host.hostname},
               {"os", s.host.os},
               {"physical_cores", s.host.physical_cores},
               {"logical_cpus", s.host.logical_cpus}};
  j["timestamp"] = s.timestamp;
  if (s.failed) {
    j["failed"] = true;
    j["diagnostics"] = s.diagnostics;
  }
  return j;
}

RunSample read_sample(const Reader& r) {
  RunSample s;
  s.benchmark_id = r.at("benchmark_id").string();
  s.params = read_params(r.at("params"));
  try {
    s.kind = parse_kind(r.at("kind").string());
  } catch (const ConfigError& e) {
    Reader::fail(r.path() + ".kind", e.what());
  }
  s.p = r.at("p").uint();
  if (r.has("target_p")) s.target_p = r.at("target_p").uint();
  s.wall_time = r.at("wall_time").seconds();
  s.idle_time = r.at("idle_time").seconds();
  const Reader idle = r.at("per_worker_idle");
  for (std::size_t i = 0; i < idle.size(); ++i) s.per_worker_idle.push_back(idle.index(i).seconds());
  s.steals = r.at("steals").uint();
  s.idle_phases = r.at("idle_phases").uint();
  s.result_digest = r.at("result_digest").uint();
  const Reader host = r.at("host");
  s.host.hostname = host.at("hostname").string();
  s.host.os = host.at("os").string();
  s.host.physical_cores = host.at("physical_cores").uint();
  s.host.logical_cpus = host.at("logical_cpus").uint();
  s.timestamp = r.at("timestamp").string();
  if (r.has("failed")) s.failed = r.at("failed").boolean();
  if (r.has("diagnostics")) s.diagnostics = r.at("diagnostics").string();
  try {
    s.validate();
  } catch (const InconsistentSample& e) {
    throw InconsistentSample(r.path() + ": " + e.what());
  }
  return s;
}

json plan_json(const ExperimentPlan& p) {
  json j;
  j["benchmark"] = p.benchmark_id;
  j["params"] = params_json(p.params);
  j["procs"] = p.procs;
  j["reps"] = p.reps;
  j["warmup_runs"] = p.warmup_runs;
  j["adaptive_t1"] = p.adaptive_t1;
  j["isolate"] = p.isolate;
  j["output_path"] = p.output_path;
  return j;
}

ExperimentPlan read_plan(const Reader& r) {
  ExperimentPlan p;
  p.benchmark_id = r.at("benchmark").string();
  if (r.has("params")) p.params = read_params(r.at("params"));
  const Reader procs = r.at("procs");
  for (std::size_t i = 0; i < procs.size(); ++i) p.procs.push_back(procs.index(i).uint());
  if (r.has("reps")) p.reps = r.at("reps").uint();
  if (r.has("warmup_runs")) p.warmup_runs = r.at("warmup_runs").uint();
  if (r.has("adaptive_t1")) p.adaptive_t1 = r.at("adaptive_t1").boolean();
  if (r.has("isolate")) p.isolate = r.at("isolate").boolean();
  if (r.has("output_path")) p.output_path = r.at("output_path").string();
  return p;
}

json summary_json(const measures::MeasureSummary& m) {
  json j;
  j["baseline_time"] = m.baseline_time;
  j["adaptive"] = m.adaptive;
  if (m.adaptive) {
    json by_p = json::array();
    for (const auto& [p, t] : m.one_core_by_p) by_p.push_back({{"p", p}, {"one_core_time", t}});
    j["one_core_by_p"] = by_p;
  } else {
    j["one_core_time"] = m.one_core_time;
  }
  if (m.elision_time) j["elision_time"] = *m.elision_time;
  json per_p = json::array();
  for (const auto& [p, v] : m.per_p) {
    per_p.push_back({{"p", p},
                     {"parallel_time", v.parallel_time},
                     {"idle_time", v.idle_time},
                     {"sample_count", v.sample_count}});
  }
  j["per_p"] = per_p;
  return j;
}

measures::MeasureSummary read_summary(const Reader& r) {
  measures::MeasureSummary m;
  m.baseline_time = r.at("baseline_time").number();
  m.adaptive = r.at("adaptive").boolean();
  if (m.adaptive) {
    const Reader by_p = r.at("one_core_by_p");
    for (std::size_t i = 0; i < by_p.size(); ++i) {
      const Reader e = by_p.index(i);
      m.one_core_by_p[e.at("p").uint()] = e.at("one_core_time").number();
    }
  } else {
    m.one_core_time = r.at("one_core_time").number();
  }
  if (r.has("elision_time")) m.elision_time = r.at("elision_time").number();
  const Reader per_p = r.at("per_p");
  for (std::size_t i = 0; i < per_p.size(); ++i) {
    const Reader e = per_p.index(i);
    m.per_p[e.at("p").uint()] = {e.at("parallel_time").number(), e.at("idle_time").number(),
                                 e.at("sample_count").uint()};
  }
  try {
    m.validate();
  } catch (const InconsistentSample& e) {
    throw InconsistentSample(r.path() + ": " + e.what());
  }
  return m;
}

json hole_json(const Hole& h) {
  json j;
  j["kind"] = std::string(to_string(h.kind));
  j["p"] = h.p;
  if (h.target_p) j["target_p"] = *h.target_p;
  j["reason"] = h.reason;
  return j;
}

Hole read_hole(const Reader& r) {
  Hole h;
  h.kind = parse_kind(r.at("kind").string());
  h.p = r.at("p").uint();
  if (r.has("target_p")) h.target_p = r.at("target_p").uint();
  h.reason = r.at("reason").string();
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string results_to_json(const ResultSet& set) {
  json j;
  j["schema_version"] = set.schema_version;
  j["isolation"] = set.isolated;
  j["plan"] = plan_json(set.plan);
  json samples = json::array();
  for (const auto& s : set.samples) {
    s.validate();
    samples.push_back(sample_json(s));
  }
  j["samples"] = samples;
  j["summary"] = set.summary ? summary_json(*set.summary) : json(nullptr);
  json holes = json::array();
  for (const auto& h : set.holes) holes.push_back(hole_json(h));
  j["holes"] = holes;
  j["failures"] = set.failures;
  return j.dump(2) + "\n";
}

ResultSet results_from_json(std::string_view text) {
  const json doc = parse_document(text);
  const Reader root(doc, "");
  ResultSet set;
  set.schema_version = root.at("schema_version").string();
  const auto dot = set.schema_version.find('.');
  if (set.schema_version.substr(0, dot) != kSchemaVersion.substr(0, kSchemaVersion.find('.'))) {
    Reader::fail("schema_version", "unsupported major version '" + set.schema_version + "'");
  }
  set.isolated = root.at("isolation").boolean();
  set.plan = read_plan(root.at("plan"));
  const Reader samples = root.at("samples");
  for (std::size_t i = 0; i < samples.size(); ++i) set.samples.push_back(read_sample(samples.index(i)));
  if (root.has("summary")) set.summary = read_summary(root.at("summary"));
  if (root.has("holes")) {
    const Reader holes = root.at("holes");
    for (std::size_t i = 0; i < holes.size(); ++i) set.holes.push_back(read_hole(holes.index(i)));
  }
  if (root.has("failures")) set.failures = root.at("failures").uint();
  return set;
}

void save_results(const ResultSet& set, const std::string& path) {
  const std::string text = results_to_json(set);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

ResultSet load_results(const std::string& path) {
  try {
    return results_from_json(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string sample_to_json(const RunSample& sample) {
  sample.validate();
  return sample_json(sample).dump() + "\n";
}

RunSample sample_from_json(std::string_view text) {
  const json doc = parse_document(text);
  return read_sample(Reader(doc, "sample"));
}

std::string plan_to_json(const ExperimentPlan& plan) { return plan_json(plan).dump(2) + "\n"; }

ExperimentPlan plan_from_json(std::string_view text) {
  const json doc = parse_document(text);
  return read_plan(Reader(doc, "plan"));
}

ExperimentPlan load_plan(const std::string& path) {
  try {
    return plan_from_json(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace facspeed::harness
