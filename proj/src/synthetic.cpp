#include "fibersurf/synthetic.hpp"

#include <cmath>
#include <random>
#include <string>

namespace fibersurf {

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "distance") return SynthKind::kDistance;
  if (name == "linear") return SynthKind::kLinear;
  if (name == "random") return SynthKind::kRandom;
  throw Error(ErrorCode::kInvalidArgument, "unknown synthetic kind '" + std::string(name) + "'");
}

SynthGrid make_synthetic(SynthKind kind, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "grid size must be >= 2");
  SynthGrid out;
  out.grid = GridSpec{{n, n, n}, {-1, -1, -1}, {1, 1, 1}};
  const std::size_t nv = n * n * n;
  out.f1.resize(nv);
  out.f2.resize(nv);
  auto coord = [n](std::size_t i) { return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1); };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t v = i + n * (j + n * k);
        const double x = coord(i), y = coord(j), z = coord(k);
        switch (kind) {
          case SynthKind::kDistance:
            out.f1[v] = z;
            out.f2[v] = std::sqrt(x * x + y * y + z * z);
            break;
          case SynthKind::kLinear:
            out.f1[v] = x;
            out.f2[v] = y;
            break;
          case SynthKind::kRandom:
            out.f1[v] = uni(rng);
            out.f2[v] = uni(rng);
            break;
        }
      }
  return out;
}

Dataset make_synthetic_dataset(SynthKind kind, std::size_t n, std::uint64_t seed) {
  SynthGrid g = make_synthetic(kind, n, seed);
  return make_structured_grid(g.grid, std::move(g.f1), std::move(g.f2));
}

}  // namespace fibersurf
