#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace traceform {

/// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of path `index` for a run seeded with `seed`.
inline std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed ^ index); }

/// Calls body(i) for i in [0, n) on `workers` threads. Work is claimed in chunks; callers
/// write results into slot i so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace traceform
