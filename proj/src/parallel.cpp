#include "pmbm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pmbm {
namespace {

std::atomic<int> g_threads{0};

}  // namespace

void set_num_threads(int n) { g_threads.store(std::max(0, n)); }

int num_threads() {
  const int n = g_threads.load();
  if (n > 0) return n;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for_rows(int rows, const std::function<void(int)>& fn) {
  const int workers = std::min(num_threads(), rows);
  if (workers <= 1) {
    for (int r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&](int begin, int end) {
    try {
      for (int r = begin; r < end; ++r) fn(r);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  const int block = (rows + workers - 1) / workers;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) {
      const int begin = std::min(rows, w * block);
      const int end = std::min(rows, begin + block);
      pool.emplace_back(run, begin, end);
    }
    run(0, std::min(rows, block));
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pmbm
