#pragma once

#include <cstdint>
#include <functional>

namespace ncsim {

// fn(i) for i in [0, count), spread over `jobs` worker threads; blocks until
// every call returned. jobs <= 1 runs inline. The first exception thrown by a
// worker is rethrown after all workers joined.
void parallel_for(std::int64_t count, int jobs, const std::function<void(std::int64_t)>& fn);

// NCSIM_JOBS environment override, else hardware concurrency.
int default_jobs();

}  // namespace ncsim
