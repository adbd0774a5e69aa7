#include "mahler/budget.hpp"

#include <gmp.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace mahler {

namespace {

std::atomic<size_t> g_live{0};
size_t g_limit = 0;

[[noreturn]] void over_budget(size_t want) {
  std::fprintf(stderr, "error: memory budget of %zu MB exceeded (GMP request of %zu bytes); see MAHLER_BUDGET_MB\n",
               g_limit >> 20, want);
  std::fflush(stderr);
  std::_Exit(2);
}

void* counted_alloc(size_t n) {
  if (g_live.fetch_add(n) + n > g_limit) over_budget(n);
  void* p = std::malloc(n);
  if (!p) over_budget(n);
  return p;
}

void* counted_realloc(void* p, size_t old_n, size_t new_n) {
  if (new_n > old_n) {
    if (g_live.fetch_add(new_n - old_n) + (new_n - old_n) > g_limit) over_budget(new_n);
  } else {
    g_live.fetch_sub(old_n - new_n);
  }
  void* q = std::realloc(p, new_n);
  if (!q) over_budget(new_n);
  return q;
}

void counted_free(void* p, size_t n) {
  g_live.fetch_sub(n);
  std::free(p);
}

}  // namespace

void install_memory_budget(size_t limit_mb) {
  g_limit = limit_mb << 20;
  mp_set_memory_functions(counted_alloc, counted_realloc, counted_free);
}

bool install_memory_budget_from_env() {
  const char* v = std::getenv("MAHLER_BUDGET_MB");
  if (!v || !*v) return false;
  char* end = nullptr;
  unsigned long mb = std::strtoul(v, &end, 10);
  if (*end != '\0' || mb == 0) {
    std::fprintf(stderr, "error: MAHLER_BUDGET_MB must be a positive integer\n");
    std::exit(2);
  }
  install_memory_budget(mb);
  return true;
}

size_t gmp_bytes_in_use() { return g_live.load(); }

}  // namespace mahler
