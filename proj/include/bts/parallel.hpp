#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace bts {

/// Thread count used when the caller asks for 0.
inline unsigned default_thread_count() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Evaluates fn(0) ... fn(n-1) on up to `threads` workers and returns the
/// results in index order. Indices are handed out in increasing order; if any
/// call throws, no new indices are started and the exception of the lowest
/// failing index is rethrown, which is the same one a serial loop would raise.
template <class Fn>
auto parallel_map(std::int64_t n, unsigned threads, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::int64_t>> {
  using Result = std::invoke_result_t<Fn&, std::int64_t>;
  std::vector<std::optional<Result>> slots(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_acquire)) {
        return;
      }
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) {
        return;
      }
      try {
        slots[static_cast<std::size_t>(i)].emplace(fn(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
        failed.store(true, std::memory_order_release);
      }
    }
  };

  if (threads == 0) {
    threads = default_thread_count();
  }
  const auto workers = static_cast<unsigned>(std::min<std::int64_t>(threads, std::max<std::int64_t>(n, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
  }

  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  std::vector<Result> out;
  out.reserve(slots.size());
  for (auto& s : slots) {
    out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace bts
