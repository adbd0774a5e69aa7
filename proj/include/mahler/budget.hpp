#pragma once

#include <cstddef>

namespace mahler {

// Routes GMP allocations through a byte counter.  When the live total
// exceeds limit_mb megabytes the process prints a diagnostic and exits with
// status 2.  Must be called before any GMP object is created.
void install_memory_budget(size_t limit_mb);

// Reads MAHLER_BUDGET_MB; returns false when unset.
bool install_memory_budget_from_env();

size_t gmp_bytes_in_use();

}  // namespace mahler
