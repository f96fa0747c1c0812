#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace atomflux {

/// Runs body(i) for i in [0, n) on up to `threads` workers using contiguous
/// blocks. Each index is visited exactly once; callers write only to slot i.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Thread cap: explicit value wins, then ATOMFLUX_THREADS, then 1.
unsigned resolve_threads(std::optional<unsigned> requested);

}  // namespace atomflux
