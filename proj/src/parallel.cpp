#include "rmt/parallel.hpp"

#include <cstdlib>
#include <string>

namespace rmt {

namespace {
std::atomic<unsigned> g_default_workers{0};
}

unsigned resolve_workers(std::optional<unsigned> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("RMT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void set_default_workers(unsigned n) { g_default_workers = n; }

unsigned default_workers() {
  const unsigned n = g_default_workers.load();
  return n > 0 ? n : resolve_workers();
}

}  // namespace rmt
