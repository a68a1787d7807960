#pragma once

#include <cstddef>
#include <utility>

#include <oneapi/tbb/blocked_range.h>
#include <oneapi/tbb/global_control.h>
#include <oneapi/tbb/parallel_for.h>
#include <oneapi/tbb/task_arena.h>

namespace semisort {

/// Calls body(i) for every i in [begin, end), possibly concurrently.
/// Blocks of at least `grain` consecutive indices run on one worker.
template <class Body>
void parallel_for(std::size_t begin, std::size_t end, Body&& body, std::size_t grain = 1) {
  if (begin >= end) return;
  if (end - begin <= grain) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }
  tbb::parallel_for(tbb::blocked_range<std::size_t>(begin, end, grain),
                    [&](const tbb::blocked_range<std::size_t>& r) {
                      for (std::size_t i = r.begin(); i != r.end(); ++i) body(i);
                    });
}

/// Fork-join pool with a fixed worker count. Library calls issued through
/// run() use at most `workers` threads.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers)
      : workers_(workers == 0 ? 1 : workers),
        control_(tbb::global_control::max_allowed_parallelism, workers_),
        arena_(static_cast<int>(workers_)) {}

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  template <class F>
  decltype(auto) run(F&& f) {
    return arena_.execute(std::forward<F>(f));
  }

  std::size_t workers() const { return workers_; }

 private:
  std::size_t workers_;
  tbb::global_control control_;
  tbb::task_arena arena_;
};

}  // namespace semisort
