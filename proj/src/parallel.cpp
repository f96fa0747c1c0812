#include "atomflux/parallel.hpp"

#include "atomflux/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace atomflux {

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      pool.emplace_back([&, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

unsigned resolve_threads(std::optional<unsigned> requested) {
  if (requested) return std::max(*requested, 1u);
  const char* env = std::getenv("ATOMFLUX_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  unsigned value = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc{} || ptr != end || value == 0) {
    throw ConfigError("ATOMFLUX_THREADS must be a positive integer");
  }
  return value;
}

}  // namespace atomflux
