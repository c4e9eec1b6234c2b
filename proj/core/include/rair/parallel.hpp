#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace rair {

/// Evaluates fn(0..count-1) on at most `workers` threads and returns results
/// in index order. If any call throws, the exception of the lowest failing
/// index is rethrown after all workers finish.
template <typename Fn>
auto parallel_map(std::size_t count, std::size_t workers, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};

  auto drain = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), count);
  if (threads <= 1) {
    drain();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(drain);
    }
  }

  for (const auto& error : errors) {
    if (error) {
      std::rethrow_exception(error);
    }
  }
  std::vector<Result> out;
  out.reserve(count);
  for (auto& slot : slots) {
    out.push_back(std::move(*slot));
  }
  return out;
}

inline std::size_t default_worker_count() {
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace rair
