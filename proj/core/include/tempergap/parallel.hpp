#pragma once

#include <cstdint>
#include <functional>

namespace tempergap {

/// Worker count used by library fan-out loops. Defaults to the value of
/// TEMPERGAP_THREADS when set, otherwise the hardware concurrency.
int default_thread_count();
void set_default_thread_count(int n);

/// Run fn(i) for i in [0, n) on up to default_thread_count() threads. The
/// first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace tempergap
