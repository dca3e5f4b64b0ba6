#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace sacovest {

template <typename Fn>
auto run_replications(std::int64_t reps, int threads, Fn&& fn) -> std::vector<decltype(fn(std::int64_t{}))> {
  using Result = decltype(fn(std::int64_t{}));
  if (reps <= 0) return {};
  std::vector<std::optional<Result>> slots(static_cast<std::size_t>(reps));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(reps));
  std::atomic<std::int64_t> next{0};

  auto worker = [&] {
    for (std::int64_t rep = next++; rep < reps; rep = next++) {
      try {
        slots[static_cast<std::size_t>(rep)].emplace(fn(rep));
      } catch (...) {
        errors[static_cast<std::size_t>(rep)] = std::current_exception();
      }
    }
  };

  const auto workers = static_cast<std::int64_t>(std::max(1, threads));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(std::min(workers, reps)));
    for (std::int64_t t = 0; t < std::min(workers, reps); ++t) pool.emplace_back(worker);
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace sacovest
