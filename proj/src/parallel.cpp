#include "spacc/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace spacc {

void parallel_for(Index count, int workers, const std::function<void(Index)>& fn) {
  if (count <= 0) return;
  if (workers < 1) workers = 1;
  const int nthreads = static_cast<int>(std::min<Index>(workers, count));

  if (nthreads == 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<Index> next{0};
  auto body = [&]() {
    for (;;) {
      const Index i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();

  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace spacc
