#include "foamlab/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace foamlab {

int worker_count() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("FOAMLAB_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0 && cap < n) n = cap;
    } catch (const std::exception&) {
      // unparsable value: ignore the cap
    }
  }
  return n < 1 ? 1 : n;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32), 0x5eedu};
  return std::mt19937_64(seq);
}

}  // namespace foamlab
