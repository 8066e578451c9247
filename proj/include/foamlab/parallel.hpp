#pragma once

#include <cstdint>
#include <random>

namespace foamlab {

/// Selects between the OpenMP kernel and its serial reference twin.
enum class Execution { Serial, Parallel };

/// Worker count for OpenMP regions: omp_get_max_threads(), capped by the
/// FOAMLAB_THREADS environment variable when it holds a positive integer.
int worker_count();

/// Independent RNG stream for (seed, stream_index). Streams never depend on
/// thread scheduling.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_index);

}  // namespace foamlab
