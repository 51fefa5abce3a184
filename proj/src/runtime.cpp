#include "facspeed/runtime.hpp"

#include <pthread.h>
#include <sched.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <utility>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define FACSPEED_CPU_RELAX() _mm_pause()
#else
#define FACSPEED_CPU_RELAX() std::this_thread::yield()
#endif

namespace facspeed::rt {
namespace {

class SpinLock {
 public:
  void lock() noexcept {
    for (int spins = 0; flag_.exchange(true, std::memory_order_acquire); ++spins) {
      while (flag_.load(std::memory_order_relaxed)) {
        if (spins++ < 64) {
          FACSPEED_CPU_RELAX();
        } else {
          std::this_thread::yield();
        }
      }
    }
  }
  bool try_lock() noexcept {
    return !flag_.load(std::memory_order_relaxed) &&
           !flag_.exchange(true, std::memory_order_acquire);
  }
  void unlock() noexcept { flag_.store(false, std::memory_order_release); }

 private:
  std::atomic<bool> flag_{false};
};

// Logical CPUs, one per distinct (package, core) pair, within our affinity mask.
std::vector<int> physical_cpu_list() {
  cpu_set_t allowed;
  CPU_ZERO(&allowed);
  if (sched_getaffinity(0, sizeof(allowed), &allowed) != 0) return {};
  std::set<std::pair<int, int>> seen;
  std::vector<int> cpus;
  for (int cpu = 0; cpu < CPU_SETSIZE; ++cpu) {
    if (!CPU_ISSET(cpu, &allowed)) continue;
    const std::string base = "/sys/devices/system/cpu/cpu" + std::to_string(cpu) + "/topology/";
    int core = -1;
    int package = -1;
    std::ifstream(base + "core_id") >> core;
    std::ifstream(base + "physical_package_id") >> package;
    if (core < 0) core = cpu;  // no topology info: treat as its own core
    if (seen.emplace(package, core).second) cpus.push_back(cpu);
  }
  return cpus;
}

const std::vector<int>& physical_cpus() {
  static const std::vector<int> cpus = physical_cpu_list();
  return cpus;
}

bool pin_current_thread(int cpu) {
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu, &set);
  return pthread_setaffinity_np(pthread_self(), sizeof(set), &set) == 0;
}

void warn_once(const char* message) {
  static std::once_flag once;
  std::call_once(once, [&] { std::fprintf(stderr, "facspeed: warning: %s\n", message); });
}

std::atomic<bool> g_launch_active{false};

}  // namespace

std::size_t physical_cores() {
  const auto n = physical_cpus().size();
  if (n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t resolve_worker_count(std::optional<std::size_t> requested) {
  if (const char* env = std::getenv("FACSPEED_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
      throw ConfigError(std::string("FACSPEED_WORKERS must be a positive integer, got '") + env +
                        "'");
    }
    return static_cast<std::size_t>(v);
  }
  if (requested) return *requested;
  return physical_cores();
}

namespace detail {

class Scheduler;

class Worker {
 public:
  Worker(Scheduler& sched, std::size_t id, std::uint64_t seed)
      : sched_(sched), id_(id), rng_(seed | 1) {}

  void push(Job* job) {
    std::lock_guard guard(lock_);
    deque_.push_back(job);
  }

  Job* pop() noexcept {
    std::lock_guard guard(lock_);
    if (deque_.empty()) return nullptr;
    Job* job = deque_.back();
    deque_.pop_back();
    return job;
  }

  Job* try_steal_from_me() noexcept {
    if (!lock_.try_lock()) return nullptr;
    Job* job = nullptr;
    if (!deque_.empty()) {
      job = deque_.front();
      deque_.pop_front();
    }
    lock_.unlock();
    return job;
  }

  Job* try_steal();
  bool instrumented() const noexcept;

  template <bool Instrumented>
  void main_loop();

  template <bool Instrumented>
  void wait_join(Job* job);

  void run_stolen(Job* job) {
    job->invoke(job);
    job->done.store(true, std::memory_order_release);
  }

  WorkerStats stats;

 private:
  std::uint64_t next_random() noexcept {
    rng_ ^= rng_ << 13;
    rng_ ^= rng_ >> 7;
    rng_ ^= rng_ << 17;
    return rng_;
  }

  Scheduler& sched_;
  std::size_t id_;
  std::uint64_t rng_;
  SpinLock lock_;
  std::deque<Job*> deque_;
};

class Scheduler {
 public:
  Scheduler(std::size_t num_workers, const RuntimeOptions& options) : options_(options) {
    workers_.reserve(num_workers);
    for (std::size_t i = 0; i < num_workers; ++i) {
      workers_.push_back(std::make_unique<Worker>(*this, i, 0x9e3779b97f4a7c15ull * (i + 1)));
      workers_.back()->stats.worker_id = i;
    }
  }

  std::size_t size() const noexcept { return workers_.size(); }
  Worker& worker(std::size_t i) noexcept { return *workers_[i]; }
  bool instrumented() const noexcept { return options_.instrument_idle; }

  bool finished() const noexcept { return done_.load(std::memory_order_acquire); }
  Nanos run_start() const noexcept { return run_start_; }
  Nanos run_end() const noexcept { return run_end_; }

  RunStats run(const std::function<void()>& root);

 private:
  void worker_thread(std::size_t id, int cpu);

  RuntimeOptions options_;
  std::vector<std::unique_ptr<Worker>> workers_;
  std::atomic<std::size_t> ready_{0};
  std::atomic<bool> go_{false};
  std::atomic<bool> done_{false};
  Nanos run_start_ = 0;
  Nanos run_end_ = 0;
};

thread_local Worker* tl_worker = nullptr;

bool Worker::instrumented() const noexcept { return sched_.instrumented(); }

Job* Worker::try_steal() {
  const std::size_t n = sched_.size();
  if (n < 2) return nullptr;
  std::size_t victim = static_cast<std::size_t>(next_random() % (n - 1));
  if (victim >= id_) ++victim;
  ++stats.steal_attempt_count;
  Job* job = sched_.worker(victim).try_steal_from_me();
  if (job != nullptr) ++stats.steal_success_count;
  return job;
}

template <bool Instrumented>
void Worker::main_loop() {
  // Non-root workers start the run idle.
  Nanos phase_start = Instrumented ? sched_.run_start() : 0;
  int failures = 0;
  for (;;) {
    if (sched_.finished()) {
      if constexpr (Instrumented) {
        stats.idle_total += std::max<Nanos>(0, sched_.run_end() - phase_start);
        ++stats.idle_phase_count;
      }
      return;
    }
    Job* job = try_steal();
    if (job == nullptr) {
      if (++failures < 32) {
        FACSPEED_CPU_RELAX();
      } else {
        std::this_thread::yield();
      }
      continue;
    }
    failures = 0;
    if constexpr (Instrumented) {
      stats.idle_total += now() - phase_start;
      ++stats.idle_phase_count;
    }
    run_stolen(job);
    if constexpr (Instrumented) phase_start = now();
  }
}

// The caller's deque is empty and the job it waits for was stolen. The wait
// is idle time. A phase that ends because the join completed is not counted
// as a separate phase: it continues as the idle phase the thief enters when it
// finishes the stolen job, exactly as if the thief had taken over the
// continuation.
template <bool Instrumented>
void Worker::wait_join(Job* job) {
  Nanos phase_start = 0;
  if constexpr (Instrumented) phase_start = now();
  int failures = 0;
  while (!job->done.load(std::memory_order_acquire)) {
    Job* stolen = try_steal();
    if (stolen == nullptr) {
      if (++failures < 32) {
        FACSPEED_CPU_RELAX();
      } else {
        std::this_thread::yield();
      }
      continue;
    }
    failures = 0;
    if constexpr (Instrumented) {
      stats.idle_total += now() - phase_start;
      ++stats.idle_phase_count;
    }
    run_stolen(stolen);
    if constexpr (Instrumented) phase_start = now();
  }
  if constexpr (Instrumented) stats.idle_total += now() - phase_start;
}

void Scheduler::worker_thread(std::size_t id, int cpu) {
  if (cpu >= 0) pin_current_thread(cpu);
  Worker& self = *workers_[id];
  tl_worker = &self;
  ready_.fetch_add(1, std::memory_order_acq_rel);
  while (!go_.load(std::memory_order_acquire)) FACSPEED_CPU_RELAX();
  if (instrumented()) {
    self.main_loop<true>();
  } else {
    self.main_loop<false>();
  }
  tl_worker = nullptr;
}

RunStats Scheduler::run(const std::function<void()>& root) {
  const std::size_t n = workers_.size();
  const auto& cpus = physical_cpus();
  const bool pin = options_.pin_workers && n <= cpus.size();
  if (options_.pin_workers && !pin) {
    warn_once("more workers than physical cores; workers left unpinned");
  }

  cpu_set_t saved_mask;
  const bool restore_mask =
      pin && pthread_getaffinity_np(pthread_self(), sizeof(saved_mask), &saved_mask) == 0;

  std::vector<std::thread> threads;
  threads.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    threads.emplace_back(&Scheduler::worker_thread, this, i, pin ? cpus[i] : -1);
  }
  if (pin) pin_current_thread(cpus[0]);
  tl_worker = workers_[0].get();
  while (ready_.load(std::memory_order_acquire) != n - 1) std::this_thread::yield();

  run_start_ = now();
  go_.store(true, std::memory_order_release);

  std::exception_ptr error;
  try {
    root();
  } catch (...) {
    error = std::current_exception();
  }

  run_end_ = now();
  done_.store(true, std::memory_order_release);
  for (auto& t : threads) t.join();
  tl_worker = nullptr;
  if (restore_mask) pthread_setaffinity_np(pthread_self(), sizeof(saved_mask), &saved_mask);

  RunStats stats;
  stats.num_workers = n;
  stats.wall_time = run_end_ - run_start_;
  for (auto& w : workers_) {
    stats.per_worker.push_back(w->stats);
    stats.idle_total += w->stats.idle_total;
    stats.total_steals += w->stats.steal_success_count;
    stats.total_idle_phases += w->stats.idle_phase_count;
  }
  if (error) {
    std::string what = "task failed";
    try {
      std::rethrow_exception(error);
    } catch (const std::exception& e) {
      what += ": ";
      what += e.what();
    } catch (...) {
    }
    throw TaskError(std::move(what), std::move(stats), error);
  }
  return stats;
}

Worker* current_worker() noexcept { return tl_worker; }

void push(Worker* w, Job* job) { w->push(job); }

Job* pop(Worker* w) noexcept { return w->pop(); }

void wait_join(Worker* w, Job* job) {
  if (w->instrumented()) {
    w->wait_join<true>(job);
  } else {
    w->wait_join<false>(job);
  }
}

}  // namespace detail

bool in_worker() noexcept { return detail::current_worker() != nullptr; }

RunStats launch(std::size_t num_workers, const std::function<void()>& root,
                const RuntimeOptions& options) {
  if (num_workers == 0) throw ConfigError("launch: num_workers must be >= 1");
  if (!options.allow_oversubscription && num_workers > physical_cores()) {
    throw ConfigError("launch: " + std::to_string(num_workers) + " workers requested but only " +
                      std::to_string(physical_cores()) + " physical cores available");
  }
  bool expected = false;
  if (!g_launch_active.compare_exchange_strong(expected, true)) {
    throw ConfigError("launch: a run is already in progress (launch is not reentrant)");
  }
  struct Release {
    ~Release() { g_launch_active.store(false); }
  } release;

  detail::Scheduler sched(num_workers, options);
  return sched.run(root);
}

}  // namespace facspeed::rt
