#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace mahler {

// Worker count used by row-independent loops (the CLI --jobs flag).
void set_jobs(unsigned n);
unsigned jobs();

// Runs body(i) for i in [0, n).  Each index writes only its own output slot,
// so results do not depend on scheduling.  The exception of the smallest
// failing index is rethrown.
void parallel_for(size_t n, const std::function<void(size_t)>& body);

}  // namespace mahler
