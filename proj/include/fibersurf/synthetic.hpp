#pragma once

#include <cstdint>
#include <string_view>

#include "fibersurf/mesh.hpp"

namespace fibersurf {

enum class SynthKind { kDistance, kLinear, kRandom };

/// Parses "distance", "linear" or "random".
SynthKind parse_synth_kind(std::string_view name);

/// n^3 grid on [-1, 1]^3.
///   distance: f1 = z, f2 = |p|
///   linear:   f1 = x, f2 = y
///   random:   both fields uniform in [0, 1), drawn from `seed`
struct SynthGrid {
  GridSpec grid;
  std::vector<double> f1;
  std::vector<double> f2;
};

SynthGrid make_synthetic(SynthKind kind, std::size_t n, std::uint64_t seed = 0);
Dataset make_synthetic_dataset(SynthKind kind, std::size_t n, std::uint64_t seed = 0);

}  // namespace fibersurf
