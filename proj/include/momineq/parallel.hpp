#pragma once

// Deterministic blockwise reductions. Work is split into fixed-size blocks;
// each block is accumulated sequentially and block partials are folded in
// block order, so every sum is bit-identical for any thread count.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <span>
#include <thread>
#include <vector>

namespace momineq {

namespace detail {
inline std::atomic<unsigned>& thread_count_ref() {
  static std::atomic<unsigned> n{1};
  return n;
}
}  // namespace detail

inline unsigned thread_count() { return detail::thread_count_ref().load(); }
inline void set_thread_count(unsigned n) { detail::thread_count_ref().store(n == 0 ? 1u : n); }

inline constexpr std::uint64_t kReduceBlock = 4096;

// Runs fn(b) for b in [0, nblocks) on up to thread_count() threads.
template <class BlockFn>
void run_blocks(std::uint64_t nblocks, BlockFn&& fn) {
  const unsigned nt =
      static_cast<unsigned>(std::min<std::uint64_t>(thread_count(), nblocks ? nblocks : 1));
  if (nt <= 1) {
    for (std::uint64_t b = 0; b < nblocks; ++b) fn(b);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) fn(b);
  };
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  for (unsigned t = 0; t + 1 < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

// body(i, acc) adds index i's contribution into acc (width doubles).
template <class Body>
std::vector<double> block_reduce_sum(std::uint64_t n, std::size_t width, Body&& body) {
  const std::uint64_t nblocks = n == 0 ? 0 : (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partials(nblocks * width, 0.0);
  run_blocks(nblocks, [&](std::uint64_t b) {
    std::span<double> acc(partials.data() + b * width, width);
    const std::uint64_t end = std::min(n, (b + 1) * kReduceBlock);
    for (std::uint64_t i = b * kReduceBlock; i < end; ++i) body(i, acc);
  });
  std::vector<double> out(width, 0.0);
  for (std::uint64_t b = 0; b < nblocks; ++b)
    for (std::size_t k = 0; k < width; ++k) out[k] += partials[b * width + k];
  return out;
}

// Same contract with max as the combiner (order-independent).
template <class Body>
std::vector<double> block_reduce_max(std::uint64_t n, std::size_t width, Body&& body) {
  const double lo = -std::numeric_limits<double>::infinity();
  const std::uint64_t nblocks = n == 0 ? 0 : (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partials(nblocks * width, lo);
  run_blocks(nblocks, [&](std::uint64_t b) {
    std::span<double> acc(partials.data() + b * width, width);
    const std::uint64_t end = std::min(n, (b + 1) * kReduceBlock);
    for (std::uint64_t i = b * kReduceBlock; i < end; ++i) body(i, acc);
  });
  std::vector<double> out(width, lo);
  for (std::uint64_t b = 0; b < nblocks; ++b)
    for (std::size_t k = 0; k < width; ++k) out[k] = std::max(out[k], partials[b * width + k]);
  return out;
}

}  // namespace momineq
