#include "qtsl/parallel.hpp"

#include <atomic>

namespace qtsl {

namespace {
std::atomic<int> g_workers{0};
}

void set_worker_count(int workers) { g_workers = std::max(0, workers); }
int worker_count() { return g_workers.load(); }

}  // namespace qtsl
