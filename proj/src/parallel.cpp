#include "mahler/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace mahler {

namespace {
std::atomic<unsigned> g_jobs{1};
}

void set_jobs(unsigned n) { g_jobs = n == 0 ? 1 : n; }
unsigned jobs() { return g_jobs; }

void parallel_for(size_t n, const std::function<void(size_t)>& body) {
  unsigned workers = jobs();
  if (workers <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto run = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mahler
