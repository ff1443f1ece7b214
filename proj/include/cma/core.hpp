#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cma {

using cd = std::complex<double>;

enum class errc {
  invalid_input,
  precondition,
  degenerate_metric,
  unsupported,
  internal,
};

class error : public std::runtime_error {
public:
  error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

namespace par {

// Worker count: CMA_THREADS (0 = hardware), settable programmatically.
int thread_count();
void set_thread_count(int n);

// Fixed chunk size so reduction order does not depend on the worker count;
// repeated runs are bit-identical for any CMA_THREADS.
constexpr std::size_t kChunk = 1 << 14;

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

// Chunk partials are combined in chunk order.
double reduce_sum(std::size_t count, const std::function<double(std::size_t, std::size_t)>& chunk_sum);
double reduce_max(std::size_t count, const std::function<double(std::size_t, std::size_t)>& chunk_max);
double reduce_min(std::size_t count, const std::function<double(std::size_t, std::size_t)>& chunk_min);

}  // namespace par

}  // namespace cma
