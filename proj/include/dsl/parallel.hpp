#pragma once

#include <functional>

namespace dsl {

/// Worker count: DSL_THREADS when set and positive, else hardware concurrency.
int thread_count();

/// Runs fn(i) for i in [0, count) on up to thread_count() workers. Results
/// must be written to disjoint slots; exceptions are rethrown on the caller.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace dsl
