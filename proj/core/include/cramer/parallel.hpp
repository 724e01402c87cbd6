#pragma once

#include <cstddef>
#include <vector>

#include <functional>

namespace cramer {

/// Worker-pool description handed down from the caller. Tasks are indexed and
/// every task writes only to its own slot, so results never depend on the
/// thread count.
class Parallel {
 public:
  Parallel() = default;
  explicit Parallel(unsigned threads) : threads_(threads == 0 ? 1 : threads) {}

  unsigned threads() const noexcept { return threads_; }

  /// Runs task(i) for i in [0, count). Exceptions from tasks are rethrown
  /// (the one with the lowest index wins).
  void for_each(std::size_t count, const std::function<void(std::size_t)>& task) const;

  /// Maps task(i) into a vector in index order.
  template <class T, class F>
  std::vector<T> map(std::size_t count, F&& task) const {
    std::vector<T> out(count);
    for_each(count, [&](std::size_t i) { out[i] = task(i); });
    return out;
  }

 private:
  unsigned threads_ = 1;
};

/// Reads CRAMER_BODIES_THREADS, falling back to 1.
unsigned threads_from_environment();

/// Samples per random stream in chunked Monte-Carlo loops.
inline constexpr std::size_t kChunkSize = 1024;

inline std::size_t chunk_count(std::size_t samples) {
  return (samples + kChunkSize - 1) / kChunkSize;
}

}  // namespace cramer
