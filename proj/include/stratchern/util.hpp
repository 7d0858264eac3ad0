// Structured errors and a deterministic parallel-for helper.
#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace stratchern {

// Error carrying a stable machine-readable code next to the human message.
// Codes in use: "non-smooth-point", "sampling-degenerate", "ambiguous-
// projection", "independence-failure", "outward-unverifiable",
// "unsupported-rank", "singular-on-boundary", "degenerate-direction",
// "bad-config", "outside-complex", "needs-refinement",
// "outside-cited-table", "index-placement".
class StratError : public std::runtime_error {
 public:
  StratError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Worker count: min(hardware, STRATCHERN_THREADS if set), at least 1.
inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("STRATCHERN_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < hw)
      hw = static_cast<unsigned>(cap);
  }
  return hw;
}

// Runs fn(i) for i in [0, n).  Results must be written to per-index slots so
// the outcome is identical regardless of the worker count.  Exceptions are
// rethrown on the calling thread.
template <typename Fn>
void parallel_for(size_t n, Fn&& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w]() {
      try {
        for (size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace stratchern
