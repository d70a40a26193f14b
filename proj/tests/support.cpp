#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "fibersurf/scatter.hpp"

namespace fstest {

Dataset grid_dataset(std::size_t n, const std::function<RangePoint(double, double, double)>& fn) {
  std::vector<double> f1, f2;
  f1.reserve(n * n * n);
  f2.reserve(n * n * n);
  const double h = 2.0 / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const RangePoint p = fn(-1 + h * i, -1 + h * j, -1 + h * k);
        f1.push_back(p.a);
        f2.push_back(p.b);
      }
  return make_structured_grid(GridSpec{{n, n, n}, {-1, -1, -1}, {1, 1, 1}}, std::move(f1), std::move(f2));
}

Dataset single_tet(std::array<RangePoint, 4> values) {
  Dataset ds{TetMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2, 3}}), {}};
  ds.field.values.assign(values.begin(), values.end());
  return ds;
}

BruteLink brute_link(const TetMesh& mesh, VertexId lo, VertexId hi) {
  BruteLink out;
  for (TetId t = 0; t < mesh.num_tets(); ++t) {
    const Tet& tet = mesh.tet(t);
    if (std::find(tet.begin(), tet.end(), lo) == tet.end() || std::find(tet.begin(), tet.end(), hi) == tet.end())
      continue;
    std::vector<VertexId> rest;
    for (VertexId v : tet)
      if (v != lo && v != hi) rest.push_back(v);
    out.edges.emplace_back(std::min(rest[0], rest[1]), std::max(rest[0], rest[1]));
    out.vertices.insert(out.vertices.end(), rest.begin(), rest.end());
    out.tets.push_back(t);
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());
  return out;
}

BruteClass brute_classify(const TetMesh& mesh, const BivariateField& field, VertexId lo, VertexId hi) {
  const BruteLink link = brute_link(mesh, lo, hi);
  const EdgeImage image{field[lo], lo, field[hi], hi};
  const std::size_t n = link.vertices.size();
  auto index = [&](VertexId v) {
    return static_cast<std::size_t>(std::find(link.vertices.begin(), link.vertices.end(), v) -
                                    link.vertices.begin());
  };
  std::vector<Side> side(n);
  for (std::size_t i = 0; i < n; ++i) side[i] = sos_sign(field[link.vertices[i]], link.vertices[i], image);

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = root(parent[x]);
  };
  for (auto [c, d] : link.edges) {
    const std::size_t ic = index(c), id = index(d);
    if (side[ic] == side[id]) parent[root(ic)] = root(id);
  }
  BruteClass out{EdgeKind::kRegular, 0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const bool neg = side[i] == Side::kNeg;
    (neg ? out.n_lower : out.n_upper) += 1;
    if (root(i) == i) (neg ? out.lower_cc : out.upper_cc) += 1;
  }
  const bool open_link = link.edges.size() < n;
  if (out.n_lower == 0 || out.n_upper == 0) {
    out.kind = open_link ? EdgeKind::kBoundaryFold : EdgeKind::kExtremum;
  } else if (out.lower_cc >= 2 || out.upper_cc >= 2) {
    out.kind = EdgeKind::kSaddle;
  }
  return out;
}

double segment_distance(RangePoint p, const ControlEdge& e) {
  const double dx = e.v().a - e.u().a, dy = e.v().b - e.u().b;
  double s = ((p.a - e.u().a) * dx + (p.b - e.u().b) * dy) / (dx * dx + dy * dy);
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.a - (e.u().a + s * dx), p.b - (e.u().b + s * dy));
}

std::vector<ControlEdge> support_edges(const Dataset& ds, std::size_t count, std::uint64_t seed) {
  const RangeRect r = range_rect(ds.field);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(r.a_min, r.a_max), ub(r.b_min, r.b_max);
  std::vector<ControlEdge> out;
  while (out.size() < count) {
    const RangePoint u{ua(rng), ub(rng)};
    const RangePoint v{ua(rng), ub(rng)};
    ControlEdge e(u, v);
    const TetRangeQuery q(ds.mesh, ds.field, e);
    bool hit = false;
    for (TetId t = 0; t < ds.mesh.num_tets() && !hit; ++t) hit = q.overlaps(t);
    if (hit) out.push_back(e);
  }
  return out;
}

bool face_connected(const TetMesh& mesh, const std::vector<TetId>& tets) {
  if (tets.empty()) return true;
  std::vector<TetId> sorted = tets;
  std::sort(sorted.begin(), sorted.end());
  std::vector<bool> seen(sorted.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const TetId t = sorted[stack.back()];
    stack.pop_back();
    for (TetId nb : mesh.face_neighbors(t)) {
      auto it = std::lower_bound(sorted.begin(), sorted.end(), nb);
      if (nb == kBoundary || it == sorted.end() || *it != nb) continue;
      const auto i = static_cast<std::size_t>(it - sorted.begin());
      if (seen[i]) continue;
      seen[i] = true;
      ++reached;
      stack.push_back(i);
    }
  }
  return reached == sorted.size();
}

std::vector<TetId> component_members(const TetSet& s, std::uint32_t label) {
  std::vector<TetId> out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.labels[i] == label) out.push_back(s.tets[i]);
  return out;
}

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "fibersurf_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fstest
