#pragma once

// Fork-join work-stealing runtime with per-worker idle-phase accounting.
//
// The only instrumentation in the scheduler is the idle-phase timer: a worker
// enters an idle phase at the first failed pop after its deque empties and
// leaves it the instant it obtains a stolen task (or the run ends). Each phase
// costs two clock reads and one accumulator update.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "facspeed/clock.hpp"
#include "facspeed/errors.hpp"

namespace facspeed::rt {

struct WorkerStats {
  std::size_t worker_id = 0;
  Nanos idle_total = 0;
  std::uint64_t idle_phase_count = 0;
  std::uint64_t steal_success_count = 0;
  std::uint64_t steal_attempt_count = 0;
};

struct RunStats {
  std::size_t num_workers = 0;
  Nanos wall_time = 0;
  Nanos idle_total = 0;  // sum of per_worker[i].idle_total
  std::vector<WorkerStats> per_worker;
  std::uint64_t total_steals = 0;
  std::uint64_t total_idle_phases = 0;
};

/// Half-open index range [lo, hi) split down to leaves of at most `grain` items.
struct TaskRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t grain = 1000;
};

struct RuntimeOptions {
  /// When false the scheduler loop is the non-instrumented instantiation:
  /// no clock reads, idle fields of RunStats stay zero.
  bool instrument_idle = true;
  /// Permit more workers than physical cores. Correctness testing only;
  /// timings from such runs are meaningless.
  bool allow_oversubscription = false;
  bool pin_workers = true;
};

/// Thrown by launch() when a task threw. The first exception wins; the run
/// still drains and its statistics are attached.
class TaskError : public std::runtime_error {
 public:
  TaskError(std::string what, RunStats stats, std::exception_ptr cause)
      : std::runtime_error(std::move(what)), stats_(std::move(stats)), cause_(std::move(cause)) {}

  const RunStats& stats() const noexcept { return stats_; }
  std::exception_ptr cause() const noexcept { return cause_; }
  [[noreturn]] void rethrow_cause() const { std::rethrow_exception(cause_); }

 private:
  RunStats stats_;
  std::exception_ptr cause_;
};

/// Number of distinct physical cores this process may run on.
std::size_t physical_cores();

/// FACSPEED_WORKERS if set, else `requested`, else physical_cores().
std::size_t resolve_worker_count(std::optional<std::size_t> requested = std::nullopt);

/// Runs `root` on `num_workers` workers and returns once every spawned task
/// has completed. Not reentrant.
RunStats launch(std::size_t num_workers, const std::function<void()>& root,
                const RuntimeOptions& options = {});

inline RunStats launch(const std::function<void()>& root) {
  return launch(resolve_worker_count(), root);
}

/// True when called from inside a running launch().
bool in_worker() noexcept;

namespace detail {

struct Job {
  void (*invoke)(Job*) = nullptr;
  std::atomic<bool> done{false};
  std::exception_ptr error;
};

template <class F>
struct CallableJob final : Job {
  explicit CallableJob(F& f) : fn(&f) {
    invoke = [](Job* self) {
      auto* job = static_cast<CallableJob*>(self);
      try {
        (*job->fn)();
      } catch (...) {
        job->error = std::current_exception();
      }
    };
  }
  F* fn;
};

class Worker;

Worker* current_worker() noexcept;
void push(Worker* w, Job* job);
/// Pops the newest job of the calling worker's deque, nullptr if empty.
Job* pop(Worker* w) noexcept;
/// Blocks until `job` is done, running stolen work meanwhile.
void wait_join(Worker* w, Job* job);

}  // namespace detail

/// Runs `left` and `right`, possibly in parallel. `right` is exposed to
/// thieves while the caller runs `left`. Returns after both complete; the
/// first exception (left before right) is rethrown.
template <class L, class R>
void fork2(L&& left, R&& right) {
  detail::Worker* w = detail::current_worker();
  if (w == nullptr) {
    left();
    right();
    return;
  }
  using RightFn = std::remove_reference_t<R>;
  detail::CallableJob<RightFn> job(right);
  detail::push(w, &job);

  std::exception_ptr left_error;
  try {
    left();
  } catch (...) {
    left_error = std::current_exception();
  }

  if (detail::pop(w) == &job) {
    if (!left_error) job.invoke(&job);
  } else {
    detail::wait_join(w, &job);
  }
  if (left_error) std::rethrow_exception(left_error);
  if (job.error) std::rethrow_exception(job.error);
}

/// Fork policy that exposes parallelism to the scheduler.
struct ParallelFork {
  template <class L, class R>
  void operator()(L&& left, R&& right) const {
    fork2(std::forward<L>(left), std::forward<R>(right));
  }
};

/// Fork policy of the sequential elision: forks become sequences.
struct SequentialFork {
  template <class L, class R>
  void operator()(L&& left, R&& right) const {
    left();
    right();
  }
};

/// Recursively halves [lo, hi) with `fork` until ranges hold at most `grain`
/// items, then calls leaf(lo, hi).
template <class Fork, class Leaf>
void for_range(const Fork& fork, std::size_t lo, std::size_t hi, std::size_t grain,
               const Leaf& leaf) {
  if (hi - lo <= grain) {
    if (lo < hi) leaf(lo, hi);
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  fork([&] { for_range(fork, lo, mid, grain, leaf); },
       [&] { for_range(fork, mid, hi, grain, leaf); });
}

inline void check_range(const TaskRange& range) {
  if (range.grain == 0) throw ConfigError("parallel_for: grain must be >= 1");
  if (range.lo > range.hi) throw ConfigError("parallel_for: lo > hi");
}

/// Invokes body(i) exactly once for each i in [range.lo, range.hi).
template <class Body>
void parallel_for(const TaskRange& range, const Body& body) {
  check_range(range);
  for_range(ParallelFork{}, range.lo, range.hi, range.grain,
            [&](std::size_t lo, std::size_t hi) {
              for (std::size_t i = lo; i < hi; ++i) body(i);
            });
}

}  // namespace facspeed::rt
