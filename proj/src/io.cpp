#include "fibersurf/io.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace fibersurf {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void put_u32(std::ostream& os, std::uint32_t x) {
  const char b[4] = {static_cast<char>(x & 0xff), static_cast<char>((x >> 8) & 0xff),
                     static_cast<char>((x >> 16) & 0xff), static_cast<char>((x >> 24) & 0xff)};
  os.write(b, 4);
}

void put_f64(std::ostream& os, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  put_u32(os, static_cast<std::uint32_t>(bits));
  put_u32(os, static_cast<std::uint32_t>(bits >> 32));
}

}  // namespace

void write_obj(std::ostream& os, const FiberSurfaceMesh& mesh) {
  for (const Vec3& p : mesh.positions) os << "v " << fmt(p.x) << ' ' << fmt(p.y) << ' ' << fmt(p.z) << '\n';
  std::map<std::uint32_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < mesh.num_triangles(); ++i) groups[mesh.component_id[i]].push_back(i);
  for (const auto& [k, tris] : groups) {
    os << "o component_" << k << '\n';
    for (std::size_t i : tris) {
      const auto& tri = mesh.triangles[i];
      os << "f " << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
    }
  }
}

void write_sidecar(std::ostream& os, const FiberSurfaceMesh& mesh) {
  os.write("FSSC", 4);
  put_u32(os, 1);
  put_u32(os, static_cast<std::uint32_t>(mesh.num_vertices()));
  put_u32(os, static_cast<std::uint32_t>(mesh.num_triangles()));
  for (double t : mesh.t) put_f64(os, t);
  for (TetId t : mesh.source_tet) put_u32(os, t);
}

void write_fiber_obj(std::ostream& os, const FiberPolyline& fiber) {
  for (const auto& [p, q] : fiber.segments) {
    os << "v " << fmt(p.x) << ' ' << fmt(p.y) << ' ' << fmt(p.z) << '\n';
    os << "v " << fmt(q.x) << ' ' << fmt(q.y) << ' ' << fmt(q.z) << '\n';
  }
  for (std::size_t i = 0; i < fiber.segments.size(); ++i) os << "l " << 2 * i + 1 << ' ' << 2 * i + 2 << '\n';
}

void write_jacobi(std::ostream& os, const TetMesh& mesh, const JacobiSet& jset) {
  os << "# extremum " << jset.n_extremum << " saddle " << jset.n_saddle << " boundary " << jset.folds.size() << '\n';
  for (const JacobiEdge* jp : jset.seeds()) {
    const JacobiEdge& j = *jp;
    const Edge& e = mesh.edge(j.edge_id);
    os << j.edge_id << ' ' << to_string(j.kind) << ' ' << e.lo << ' ' << e.hi << ' ' << fmt(j.image_lo.a) << ' '
       << fmt(j.image_lo.b) << ' ' << fmt(j.image_hi.a) << ' ' << fmt(j.image_hi.b) << '\n';
  }
}

void write_pgm(std::ostream& os, const DensityRaster& r) {
  const double peak = r.max_density();
  os << "P5\n# range_rect " << fmt(r.rect.a_min) << ' ' << fmt(r.rect.b_min) << ' ' << fmt(r.rect.a_max) << ' '
     << fmt(r.rect.b_max) << "\n# max_density " << fmt(peak) << '\n'
     << r.width << ' ' << r.height << "\n65535\n";
  std::vector<char> row(std::size_t{r.width} * 2);
  for (std::uint32_t y = r.height; y-- > 0;) {
    for (std::uint32_t x = 0; x < r.width; ++x) {
      const double v = peak > 0 ? r.at(x, y) / peak : 0.0;
      const auto q = static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
      row[2 * x] = static_cast<char>(q >> 8);
      row[2 * x + 1] = static_cast<char>(q & 0xff);
    }
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_structured_grid(std::ostream& os, const SynthGrid& g) {
  os << g.grid.dims[0] << ' ' << g.grid.dims[1] << ' ' << g.grid.dims[2] << '\n';
  os << fmt(g.grid.lo.x) << ' ' << fmt(g.grid.lo.y) << ' ' << fmt(g.grid.lo.z) << ' ' << fmt(g.grid.hi.x) << ' '
     << fmt(g.grid.hi.y) << ' ' << fmt(g.grid.hi.z) << '\n';
  os << "# f1\n";
  for (double v : g.f1) os << fmt(v) << '\n';
  os << "# f2\n";
  for (double v : g.f2) os << fmt(v) << '\n';
}

std::string trace_json(const SearchTrace& t, std::size_t control_edge_index) {
  nlohmann::ordered_json j;
  j["control_edge"] = control_edge_index;
  j["jacobi_intersections_ms"] = t.jacobi_intersections_ms;
  j["directed_search_ms"] = t.directed_search_ms;
  j["restricted_bfs_ms"] = t.restricted_bfs_ms;
  j["n_jacobi_intersections"] = t.n_jacobi_intersections;
  j["n_tets_fs"] = t.n_tets_fs;
  j["directed_searches"] = t.directed_searches;
  j["directed_visited"] = t.directed_visited;
  j["dead_ends"] = t.dead_ends;
  j["seeds_found"] = t.seeds_found;
  j["seeds_discarded"] = t.seeds_discarded;
  j["restricted_visited"] = t.restricted_visited;
  j["enqueued"] = t.enqueued;
  return j.dump();
}

std::vector<RangePoint> parse_points(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), ';', ' ');
  std::istringstream in(s);
  std::vector<RangePoint> out;
  std::string pair;
  while (in >> pair) {
    const auto comma = pair.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "expected a,b but got '" + pair + "'");
    try {
      std::size_t used_a = 0, used_b = 0;
      const std::string sa = pair.substr(0, comma), sb = pair.substr(comma + 1);
      const double a = std::stod(sa, &used_a), b = std::stod(sb, &used_b);
      if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument(pair);
      out.push_back({a, b});
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidArgument, "bad point '" + pair + "'");
    }
  }
  return out;
}

std::vector<RangePoint> read_points_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<RangePoint> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    RangePoint p;
    std::string extra;
    if (!(ls >> p.a >> p.b) || (ls >> extra)) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    out.push_back(p);
  }
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

}  // namespace fibersurf
