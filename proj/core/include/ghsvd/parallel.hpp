#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ghsvd {

/// Fixed set of fork-join workers.  `for_each` splits [0, count) into
/// contiguous chunks, one per worker, so the index-to-worker mapping depends
/// only on `count` and the worker count.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const noexcept { return workers_; }

  /// fn(index, worker_id) for every index; returns after all calls finish.
  /// The first exception thrown by any call is rethrown here.
  void for_each(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

 private:
  void worker_loop(std::size_t id);
  void run_chunk(std::size_t id);

  std::size_t workers_;
  std::vector<std::jthread> threads_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stopping_ = false;
  std::size_t count_ = 0;
  const std::function<void(std::size_t, std::size_t)>* job_ = nullptr;
  std::exception_ptr error_;
};

}  // namespace ghsvd
