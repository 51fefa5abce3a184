#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "facspeed/benchmarks.hpp"
#include "facspeed/harness.hpp"
#include "facspeed/measures.hpp"
#include "facspeed/report.hpp"
#include "facspeed/runtime.hpp"

namespace py = pybind11;
using namespace facspeed;

namespace {

template <class T>
std::string repr_curve_point(const T& pt) {
  return "CurvePoint(p=" + std::to_string(pt.p) + ", maximal=" + std::to_string(pt.maximal) +
         ", idle_specific=" + std::to_string(pt.idle_specific) +
         ", inflation_specific=" + std::to_string(pt.inflation_specific) +
         ", actual=" + std::to_string(pt.actual) + ")";
}

rt::RuntimeOptions runtime_options(bool oversubscribe) {
  rt::RuntimeOptions o;
  o.allow_oversubscription = oversubscribe;
  return o;
}

// Seconds-valued view of a Nanos field.
template <class C, Nanos C::*Field>
void seconds_property(py::class_<C>& cls, const char* name) {
  cls.def_property(
      name, [](const C& c) { return to_seconds(c.*Field); },
      [](C& c, double s) { c.*Field = from_seconds(s); });
}

}  // namespace

PYBIND11_MODULE(_facspeed, m) {
  m.doc() = "Factored speedup measurement: runtime, benchmarks, harness and report";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InconsistentSample>(m, "InconsistentSample", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<rt::TaskError>(m, "TaskError", PyExc_RuntimeError);

  // -- runtime ---------------------------------------------------------------
  m.def("physical_cores", &rt::physical_cores);
  m.def("resolve_worker_count", &rt::resolve_worker_count, py::arg("requested") = py::none());

  // -- measures --------------------------------------------------------------
  m.def("parallel_work", &measures::parallel_work, py::arg("p"), py::arg("t_p"), py::arg("i_p"));
  m.def("work_inflation", &measures::work_inflation, py::arg("p"), py::arg("t_p"), py::arg("i_p"),
        py::arg("t_1"));
  py::class_<measures::SchedWork>(m, "SchedWork")
      .def_readonly("seconds", &measures::SchedWork::seconds)
      .def_readonly("noisy", &measures::SchedWork::noisy);
  m.def("sched_work_estimate", &measures::sched_work_estimate, py::arg("t_1"), py::arg("t_elision"));

  py::class_<measures::TimingSample>(m, "TimingSample")
      .def(py::init([](std::size_t p, double wall, double idle) {
             return measures::TimingSample{p, wall, idle};
           }),
           py::arg("p"), py::arg("wall_time"), py::arg("idle_time") = 0.0)
      .def_readwrite("p", &measures::TimingSample::p)
      .def_readwrite("wall_time", &measures::TimingSample::wall_time)
      .def_readwrite("idle_time", &measures::TimingSample::idle_time);
  py::class_<measures::Aggregate>(m, "Aggregate")
      .def_readonly("t_p", &measures::Aggregate::t_p)
      .def_readonly("i_p", &measures::Aggregate::i_p)
      .def_readonly("count", &measures::Aggregate::count);
  m.def("aggregate", [](const std::vector<measures::TimingSample>& s) { return measures::aggregate(s); },
        py::arg("samples"));

  py::class_<measures::PerP>(m, "PerP")
      .def(py::init([](double t_p, double i_p, std::size_t n) { return measures::PerP{t_p, i_p, n}; }),
           py::arg("parallel_time"), py::arg("idle_time") = 0.0, py::arg("sample_count") = 1)
      .def_readwrite("parallel_time", &measures::PerP::parallel_time)
      .def_readwrite("idle_time", &measures::PerP::idle_time)
      .def_readwrite("sample_count", &measures::PerP::sample_count);

  py::class_<measures::MeasureSummary>(m, "MeasureSummary")
      .def(py::init<>())
      .def_readwrite("baseline_time", &measures::MeasureSummary::baseline_time)
      .def_readwrite("one_core_time", &measures::MeasureSummary::one_core_time)
      .def_readwrite("one_core_by_p", &measures::MeasureSummary::one_core_by_p)
      .def_readwrite("adaptive", &measures::MeasureSummary::adaptive)
      .def_readwrite("elision_time", &measures::MeasureSummary::elision_time)
      .def_readwrite("per_p", &measures::MeasureSummary::per_p)
      .def("one_core_for", &measures::MeasureSummary::one_core_for)
      .def("validate", &measures::MeasureSummary::validate);

  py::class_<measures::CurvePoint>(m, "CurvePoint")
      .def_readonly("p", &measures::CurvePoint::p)
      .def_readonly("linear", &measures::CurvePoint::linear)
      .def_readonly("maximal", &measures::CurvePoint::maximal)
      .def_readonly("idle_specific", &measures::CurvePoint::idle_specific)
      .def_readonly("inflation_specific", &measures::CurvePoint::inflation_specific)
      .def_readonly("actual", &measures::CurvePoint::actual)
      .def_readonly("elision_bound", &measures::CurvePoint::elision_bound)
      .def_readonly("work_inflation", &measures::CurvePoint::work_inflation)
      .def_readonly("parallel_work", &measures::CurvePoint::parallel_work)
      .def_readonly("sched_work_estimate", &measures::CurvePoint::sched_work_estimate)
      .def_readonly("unbounded_inflation_specific", &measures::CurvePoint::unbounded_inflation_specific)
      .def("__repr__", &repr_curve_point<measures::CurvePoint>);

  py::class_<measures::Gaps>(m, "Gaps")
      .def_readonly("p", &measures::Gaps::p)
      .def_readonly("a", &measures::Gaps::a)
      .def_readonly("b", &measures::Gaps::b)
      .def_readonly("c", &measures::Gaps::c)
      .def_readonly("d", &measures::Gaps::d);

  py::class_<measures::CurveSet>(m, "CurveSet")
      .def_readonly("points", &measures::CurveSet::points)
      .def("has_elision", &measures::CurveSet::has_elision)
      .def("gaps", &measures::CurveSet::gaps)
      .def("__len__", [](const measures::CurveSet& c) { return c.points.size(); });

  m.def("speedup_curves", &measures::speedup_curves, py::arg("summary"));

  // -- benchmarks ------------------------------------------------------------
  m.def("gap_index", &bench::gap_index, py::arg("i"), py::arg("g"), py::arg("m"));
  m.def("sweep_repetitions", &bench::sweep_repetitions, py::arg("m"));
  m.def("sort_input", &bench::sort_input, py::arg("n"), py::arg("seed") = 1);
  m.def(
      "cilksort",
      [](std::vector<std::uint32_t> values, const std::string& mode, std::size_t cutoff, std::size_t workers,
         bool oversubscribe) {
        const bench::Mode md = bench::parse_mode(mode);
        py::gil_scoped_release release;
        if (md == bench::Mode::parallel) {
          rt::launch(workers, [&] { bench::cilksort(values, md, cutoff); }, runtime_options(oversubscribe));
        } else {
          bench::cilksort(values, md, cutoff);
        }
        return values;
      },
      py::arg("values"), py::arg("mode") = "parallel", py::arg("cutoff") = 1000, py::arg("workers") = 1,
      py::arg("oversubscribe") = false, "Sorted copy of `values`.");
  m.def(
      "array_checksum",
      [](std::size_t m_, std::size_t l, std::size_t g, std::size_t r, std::size_t grain, const std::string& mode,
         std::size_t workers, bool oversubscribe) {
        const bench::Mode md = bench::parse_mode(mode);
        py::gil_scoped_release release;
        bench::ArrayBench b({m_, l, g, r, grain});
        if (md == bench::Mode::parallel) {
          rt::launch(workers, [&] { b.run(md); }, runtime_options(oversubscribe));
        } else {
          b.run(md);
        }
        return b.checksum();
      },
      py::arg("m"), py::arg("l") = 1, py::arg("g") = 1, py::arg("r") = 1, py::arg("grain") = 1000,
      py::arg("mode") = "baseline", py::arg("workers") = 1, py::arg("oversubscribe") = false);
  m.def("benchmark_ids", [] {
    std::vector<std::string> ids;
    for (const auto& b : bench::registry()) ids.push_back(b.id);
    return ids;
  });

  // -- harness ---------------------------------------------------------------
  py::enum_<harness::RunKind>(m, "RunKind")
      .value("baseline", harness::RunKind::baseline)
      .value("elision", harness::RunKind::elision)
      .value("one_core", harness::RunKind::one_core)
      .value("parallel", harness::RunKind::parallel);

  py::class_<harness::HostInfo>(m, "HostInfo")
      .def_readonly("hostname", &harness::HostInfo::hostname)
      .def_readonly("os", &harness::HostInfo::os)
      .def_readonly("physical_cores", &harness::HostInfo::physical_cores)
      .def_readonly("logical_cpus", &harness::HostInfo::logical_cpus);

  py::class_<harness::RunSample> sample(m, "RunSample");
  sample.def(py::init<>())
      .def_readwrite("benchmark_id", &harness::RunSample::benchmark_id)
      .def_readwrite("params", &harness::RunSample::params)
      .def_readwrite("kind", &harness::RunSample::kind)
      .def_readwrite("p", &harness::RunSample::p)
      .def_readwrite("target_p", &harness::RunSample::target_p)
      .def_readwrite("steals", &harness::RunSample::steals)
      .def_readwrite("idle_phases", &harness::RunSample::idle_phases)
      .def_readwrite("result_digest", &harness::RunSample::result_digest)
      .def_readonly("host", &harness::RunSample::host)
      .def_readwrite("timestamp", &harness::RunSample::timestamp)
      .def_readwrite("failed", &harness::RunSample::failed)
      .def_readwrite("diagnostics", &harness::RunSample::diagnostics)
      .def_property_readonly("per_worker_idle",
                             [](const harness::RunSample& s) {
                               std::vector<double> out;
                               for (Nanos n : s.per_worker_idle) out.push_back(to_seconds(n));
                               return out;
                             })
      .def("validate", &harness::RunSample::validate)
      .def("to_json", &harness::sample_to_json)
      .def_static("from_json", &harness::sample_from_json)
      .def(py::self == py::self);
  seconds_property<harness::RunSample, &harness::RunSample::wall_time>(sample, "wall_time");
  seconds_property<harness::RunSample, &harness::RunSample::idle_time>(sample, "idle_time");

  py::class_<harness::ExperimentPlan>(m, "ExperimentPlan")
      .def(py::init<>())
      .def_readwrite("benchmark_id", &harness::ExperimentPlan::benchmark_id)
      .def_readwrite("params", &harness::ExperimentPlan::params)
      .def_readwrite("procs", &harness::ExperimentPlan::procs)
      .def_readwrite("reps", &harness::ExperimentPlan::reps)
      .def_readwrite("warmup_runs", &harness::ExperimentPlan::warmup_runs)
      .def_readwrite("adaptive_t1", &harness::ExperimentPlan::adaptive_t1)
      .def_readwrite("isolate", &harness::ExperimentPlan::isolate)
      .def_readwrite("output_path", &harness::ExperimentPlan::output_path)
      .def("validate", &harness::ExperimentPlan::validate, py::arg("max_procs"))
      .def("to_json", &harness::plan_to_json)
      .def_static("from_json", &harness::plan_from_json);

  py::class_<harness::Hole>(m, "Hole")
      .def_readonly("kind", &harness::Hole::kind)
      .def_readonly("p", &harness::Hole::p)
      .def_readonly("target_p", &harness::Hole::target_p)
      .def_readonly("reason", &harness::Hole::reason);

  py::class_<harness::ResultSet>(m, "ResultSet")
      .def(py::init<>())
      .def_readonly("schema_version", &harness::ResultSet::schema_version)
      .def_readwrite("plan", &harness::ResultSet::plan)
      .def_readwrite("isolated", &harness::ResultSet::isolated)
      .def_readwrite("samples", &harness::ResultSet::samples)
      .def_readwrite("summary", &harness::ResultSet::summary)
      .def_readonly("holes", &harness::ResultSet::holes)
      .def_readonly("failures", &harness::ResultSet::failures)
      .def("to_json", &harness::results_to_json)
      .def_static("from_json", &harness::results_from_json);

  m.def(
      "run_single",
      [](const std::string& bench_id, const bench::Params& params, harness::RunKind kind, std::size_t p,
         bool isolate, const std::string& child, std::optional<std::size_t> target_p, bool oversubscribe,
         bool instrument_idle) {
        harness::RunOptions o;
        o.isolate = isolate;
        o.child_executable = child;
        o.target_p = target_p;
        o.allow_oversubscription = oversubscribe;
        o.instrument_idle = instrument_idle;
        py::gil_scoped_release release;
        return harness::run_single(bench_id, params, kind, p, o);
      },
      py::arg("benchmark_id"), py::arg("params") = bench::Params{}, py::arg("kind") = harness::RunKind::parallel,
      py::arg("p") = 1, py::arg("isolate") = false, py::arg("child_executable") = "",
      py::arg("target_p") = py::none(), py::arg("oversubscribe") = false, py::arg("instrument_idle") = true);
  m.def(
      "run_experiment",
      [](const harness::ExperimentPlan& plan, const std::string& child, bool oversubscribe) {
        harness::HarnessOptions o;
        o.child_executable = child;
        o.allow_oversubscription = oversubscribe;
        py::gil_scoped_release release;
        return harness::run_experiment(plan, o);
      },
      py::arg("plan"), py::arg("child_executable") = "", py::arg("oversubscribe") = false);
  m.def("summarize", [](const harness::ExperimentPlan& plan, const std::vector<harness::RunSample>& samples) {
    return harness::summarize(plan, samples);
  });
  m.def("save_results", &harness::save_results, py::arg("results"), py::arg("path"));
  m.def("load_results", &harness::load_results, py::arg("path"));
  m.def("load_plan", &harness::load_plan, py::arg("path"));

  // -- report ----------------------------------------------------------------
  m.attr("CSV_HEADER") = std::string(report::kCsvHeader);
  m.def("emit_csv", &report::emit_csv, py::arg("curves"));
  m.def("parse_csv", [](const std::string& text) { return report::parse_csv(text); }, py::arg("text"));
  m.def(
      "emit_svg",
      [](const measures::CurveSet& curves, const std::string& title, bool show_elision, bool annotate_gaps,
         int width, int height) {
        report::PlotSpec spec;
        spec.curves = curves;
        spec.title = title;
        spec.show_elision = show_elision;
        spec.annotate_gaps = annotate_gaps;
        spec.width = width;
        spec.height = height;
        return report::emit_svg(spec);
      },
      py::arg("curves"), py::arg("title") = "", py::arg("show_elision") = false, py::arg("annotate_gaps") = false,
      py::arg("width") = 640, py::arg("height") = 480);

  py::enum_<report::FindingCode>(m, "FindingCode")
      .value("overhead_growth", report::FindingCode::overhead_growth)
      .value("parallelism_starved", report::FindingCode::parallelism_starved)
      .value("inflation_saturated", report::FindingCode::inflation_saturated)
      .value("slowdown", report::FindingCode::slowdown)
      .value("sched_overhead", report::FindingCode::sched_overhead)
      .value("healthy", report::FindingCode::healthy);
  py::class_<report::CurveEvidence>(m, "CurveEvidence")
      .def_readonly("curve", &report::CurveEvidence::curve)
      .def_readonly("first_slope", &report::CurveEvidence::first_slope)
      .def_readonly("last_slope", &report::CurveEvidence::last_slope)
      .def_readonly("ratio", &report::CurveEvidence::ratio);
  py::class_<report::Finding>(m, "Finding")
      .def_readonly("code", &report::Finding::code)
      .def_readonly("evidence", &report::Finding::evidence)
      .def_readonly("message", &report::Finding::message);
  py::class_<report::Diagnostics>(m, "Diagnostics")
      .def_readonly("findings", &report::Diagnostics::findings)
      .def_readonly("gap_a_fraction", &report::Diagnostics::gap_a_fraction)
      .def_readonly("gap_b_fraction", &report::Diagnostics::gap_b_fraction)
      .def_readonly("gap_c_fraction", &report::Diagnostics::gap_c_fraction)
      .def_readonly("gap_d_fraction", &report::Diagnostics::gap_d_fraction)
      .def("has", &report::Diagnostics::has)
      .def("to_text", &report::diagnostics_to_text)
      .def("to_json", &report::diagnostics_to_json);
  m.def("diagnose", [](const measures::CurveSet& c) { return report::diagnose(c); }, py::arg("curves"));
  m.def("curvature", &report::curvature, py::arg("curves"), py::arg("curve"));
}
