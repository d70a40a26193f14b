#include "fibersurf/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fibersurf/parallel.hpp"

namespace fibersurf {

namespace {

constexpr std::size_t kPartitions = 16;
constexpr std::size_t kSeedBlock = 4096;

double extent_or_one(double lo, double hi) { return hi > lo ? hi - lo : 1.0; }

std::uint32_t pixel(double x, double lo, double hi, std::uint32_t n) {
  const double r = (x - lo) / extent_or_one(lo, hi) * n;
  if (!(r > 0)) return 0;
  return std::min(static_cast<std::uint32_t>(r), n - 1);
}

}  // namespace

double RangeRect::diameter() const { return std::hypot(width(), height()); }

RangeRect range_rect(const BivariateField& field) {
  if (field.values.empty()) throw Error(ErrorCode::kInvalidArgument, "empty field");
  RangeRect r{field.values[0].a, field.values[0].b, field.values[0].a, field.values[0].b};
  for (const RangePoint& p : field.values) {
    r.a_min = std::min(r.a_min, p.a);
    r.a_max = std::max(r.a_max, p.a);
    r.b_min = std::min(r.b_min, p.b);
    r.b_max = std::max(r.b_max, p.b);
  }
  return r;
}

double DensityRaster::cell_area() const {
  return extent_or_one(rect.a_min, rect.a_max) / width * (extent_or_one(rect.b_min, rect.b_max) / height);
}

double DensityRaster::total_mass() const { return std::accumulate(cells.begin(), cells.end(), 0.0) * cell_area(); }

double DensityRaster::max_density() const { return cells.empty() ? 0.0 : *std::max_element(cells.begin(), cells.end()); }

DensityRaster density_raster(const TetMesh& mesh, const BivariateField& field, std::uint32_t width,
                             std::uint32_t height, std::uint32_t samples_per_tet, std::uint64_t seed) {
  if (width == 0 || height == 0) throw Error(ErrorCode::kInvalidArgument, "raster size must be positive");
  if (samples_per_tet == 0) throw Error(ErrorCode::kInvalidArgument, "samples_per_tet must be positive");
  DensityRaster out;
  out.width = width;
  out.height = height;
  out.rect = range_rect(field);
  const std::size_t npix = std::size_t{width} * height;
  const std::size_t nt = mesh.num_tets();

  // Fixed partitions of the tet range, each with its own mass buffer, summed
  // in partition order afterwards.
  std::vector<std::vector<double>> mass(kPartitions);
  parallel_chunks(kPartitions, 1, [&](std::size_t p, std::size_t) {
    std::vector<double>& acc = mass[p];
    acc.assign(npix, 0.0);
    const std::size_t begin = nt * p / kPartitions, end = nt * (p + 1) / kPartitions;
    std::mt19937_64 rng;
    std::exponential_distribution<double> expo(1.0);
    for (std::size_t t = begin; t < end; ++t) {
      if (t == begin || t % kSeedBlock == 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(t / kSeedBlock)};
        rng.seed(seq);
      }
      const double vol = mesh.tet_volume(static_cast<TetId>(t));
      if (!(vol > 0)) continue;
      const Tet& tv = mesh.tet(static_cast<TetId>(t));
      const double w = vol / samples_per_tet;
      for (std::uint32_t s = 0; s < samples_per_tet; ++s) {
        // Normalized exponentials are uniform on the simplex.
        std::array<double, 4> l{};
        double sum = 0;
        for (double& x : l) sum += (x = expo(rng));
        double a = 0, b = 0;
        for (int i = 0; i < 4; ++i) {
          a += l[i] / sum * field[tv[i]].a;
          b += l[i] / sum * field[tv[i]].b;
        }
        const std::uint32_t px = pixel(a, out.rect.a_min, out.rect.a_max, width);
        const std::uint32_t py = pixel(b, out.rect.b_min, out.rect.b_max, height);
        acc[std::size_t{py} * width + px] += w;
      }
    }
  });

  out.cells.assign(npix, 0.0);
  for (const auto& acc : mass)
    for (std::size_t i = 0; i < npix; ++i) out.cells[i] += acc[i];
  const double area = out.cell_area();
  for (double& c : out.cells) c /= area;
  return out;
}

}  // namespace fibersurf
