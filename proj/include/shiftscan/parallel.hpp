#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace shiftscan {

/// Worker threads available to the library. SHIFTSCAN_THREADS caps it;
/// otherwise std::thread::hardware_concurrency().
std::size_t worker_count();

/// Calls body(i) for i in [0, n), split into contiguous blocks across
/// workers. Bodies must only write to per-index state; the result is then
/// independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Seed for the RNG stream of replicate `index` under a master seed
/// (splitmix64 mixing), so parallel replicates don't share streams.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace shiftscan
