#include "fibersurf/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>

namespace fibersurf {

double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

namespace {

// Local vertices of face i (the face opposite vertex i).
constexpr std::array<std::array<int, 3>, 4> kFaceVerts{{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

}  // namespace

TetMesh::TetMesh(std::vector<Vec3> positions, std::vector<Tet> tets)
    : positions_(std::move(positions)), tets_(std::move(tets)) {
  const std::size_t nv = positions_.size();
  const std::size_t nt = tets_.size();
  if (nt >= kBoundary) throw Error(ErrorCode::kInvalidMesh, "too many tets");

  for (std::size_t t = 0; t < nt; ++t) {
    const Tet& tv = tets_[t];
    for (int i = 0; i < 4; ++i) {
      if (tv[i] >= nv) {
        throw Error(ErrorCode::kInvalidMesh, "tet " + std::to_string(t) + " references vertex " +
                                                 std::to_string(tv[i]) + " out of range");
      }
      for (int j = 0; j < i; ++j) {
        if (tv[i] == tv[j]) {
          throw Error(ErrorCode::kInvalidMesh, "tet " + std::to_string(t) + " repeats a vertex");
        }
      }
    }
  }

  // vertex -> tets (counting sort keeps rows ascending)
  vertex_to_tets_.offsets.assign(nv + 1, 0);
  for (const Tet& tv : tets_)
    for (VertexId v : tv) ++vertex_to_tets_.offsets[v + 1];
  for (std::size_t v = 0; v < nv; ++v) vertex_to_tets_.offsets[v + 1] += vertex_to_tets_.offsets[v];
  vertex_to_tets_.items.resize(4 * nt);
  {
    std::vector<std::uint32_t> cursor(vertex_to_tets_.offsets.begin(), vertex_to_tets_.offsets.end() - 1);
    for (std::size_t t = 0; t < nt; ++t)
      for (VertexId v : tets_[t]) vertex_to_tets_.items[cursor[v]++] = static_cast<TetId>(t);
  }

  // Edges grouped by their lower vertex; rows come out sorted by (lo, hi).
  tet_edges_.resize(nt);
  edge_to_tets_.offsets.assign(1, 0);
  std::vector<std::pair<VertexId, TetId>> scratch;
  for (VertexId a = 0; a < nv; ++a) {
    scratch.clear();
    for (TetId t : vertex_to_tets_.row(a))
      for (VertexId b : tets_[t])
        if (b > a) scratch.emplace_back(b, t);
    std::sort(scratch.begin(), scratch.end());
    for (std::size_t i = 0; i < scratch.size();) {
      const VertexId b = scratch[i].first;
      const auto id = static_cast<EdgeId>(edges_.size());
      edges_.push_back({a, b});
      for (; i < scratch.size() && scratch[i].first == b; ++i) {
        const TetId t = scratch[i].second;
        edge_to_tets_.items.push_back(t);
        const Tet& tv = tets_[t];
        for (int k = 0; k < 6; ++k) {
          const VertexId p = tv[kTetEdges[k][0]], q = tv[kTetEdges[k][1]];
          if (std::min(p, q) == a && std::max(p, q) == b) tet_edges_[t][k] = id;
        }
      }
      edge_to_tets_.offsets.push_back(static_cast<std::uint32_t>(edge_to_tets_.items.size()));
    }
  }

  // Faces grouped by their lowest vertex.
  face_neighbors_.assign(nt, {kBoundary, kBoundary, kBoundary, kBoundary});
  struct FaceRef {
    VertexId b, c;
    TetId tet;
    int local;
  };
  std::vector<FaceRef> faces;
  for (VertexId a = 0; a < nv; ++a) {
    faces.clear();
    for (TetId t : vertex_to_tets_.row(a)) {
      const Tet& tv = tets_[t];
      for (int f = 0; f < 4; ++f) {
        std::array<VertexId, 3> fv{tv[kFaceVerts[f][0]], tv[kFaceVerts[f][1]], tv[kFaceVerts[f][2]]};
        std::sort(fv.begin(), fv.end());
        if (fv[0] == a) faces.push_back({fv[1], fv[2], t, f});
      }
    }
    std::sort(faces.begin(), faces.end(), [](const FaceRef& x, const FaceRef& y) {
      return std::tie(x.b, x.c, x.tet) < std::tie(y.b, y.c, y.tet);
    });
    for (std::size_t i = 0; i < faces.size();) {
      std::size_t j = i;
      while (j < faces.size() && faces[j].b == faces[i].b && faces[j].c == faces[i].c) ++j;
      if (j - i > 2) {
        throw Error(ErrorCode::kNonManifold, "face (" + std::to_string(a) + "," + std::to_string(faces[i].b) +
                                                 "," + std::to_string(faces[i].c) + ") shared by " +
                                                 std::to_string(j - i) + " tets");
      }
      if (j - i == 2) {
        face_neighbors_[faces[i].tet][faces[i].local] = faces[i + 1].tet;
        face_neighbors_[faces[i + 1].tet][faces[i + 1].local] = faces[i].tet;
      } else {
        ++num_boundary_faces_;
      }
      i = j;
    }
  }
}

EdgeId TetMesh::find_edge(VertexId a, VertexId b) const {
  const Edge key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) {
    throw Error(ErrorCode::kNotFound, "no edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  return static_cast<EdgeId>(it - edges_.begin());
}

double TetMesh::tet_volume(TetId t) const {
  const Tet& tv = tets_[t];
  const Vec3 p0 = positions_[tv[0]];
  return std::abs(dot(positions_[tv[1]] - p0, cross(positions_[tv[2]] - p0, positions_[tv[3]] - p0))) / 6.0;
}

EdgeLink edge_link(const TetMesh& mesh, EdgeId e) {
  if (e >= mesh.num_edges()) throw Error(ErrorCode::kInvalidArgument, "edge id out of range");
  const Edge ed = mesh.edge(e);
  EdgeLink link;
  for (TetId t : mesh.edge_tets(e)) {
    std::array<VertexId, 2> other{};
    int n = 0;
    for (VertexId v : mesh.tet(t))
      if (v != ed.lo && v != ed.hi) other[n++] = v;
    link.link_edges.emplace_back(std::min(other[0], other[1]), std::max(other[0], other[1]));
  }

  // Order the vertices by walking the cycle/path. Each link vertex has degree
  // 1 or 2 in a manifold star.
  std::vector<VertexId> verts;
  for (auto [c, d] : link.link_edges) {
    verts.push_back(c);
    verts.push_back(d);
  }
  std::sort(verts.begin(), verts.end());
  std::vector<std::pair<VertexId, int>> degree;
  for (VertexId v : verts) {
    if (!degree.empty() && degree.back().first == v) {
      ++degree.back().second;
    } else {
      degree.emplace_back(v, 1);
    }
  }
  VertexId start = degree.front().first;
  for (auto [v, d] : degree) {
    if (d == 1) {
      link.is_boundary_edge = true;
      start = v;
      break;
    }
  }

  std::vector<bool> used(link.link_edges.size(), false);
  link.link_vertices.push_back(start);
  VertexId cur = start;
  for (std::size_t step = 0; step < link.link_edges.size(); ++step) {
    bool advanced = false;
    for (std::size_t i = 0; i < link.link_edges.size(); ++i) {
      if (used[i]) continue;
      auto [c, d] = link.link_edges[i];
      if (c != cur && d != cur) continue;
      used[i] = true;
      cur = (c == cur) ? d : c;
      advanced = true;
      break;
    }
    if (!advanced) break;
    if (cur != start) link.link_vertices.push_back(cur);
  }
  return link;
}

// ---------------------------------------------------------------------------
// Text loaders

namespace {

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  bool next(std::string_view& tok) {
    while (pos_ < text_.size()) {
      const char ch = text_[pos_];
      if (ch == '#' && at_line_start_) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      if (ch == '\n') {
        at_line_start_ = true;
        ++line_;
        ++pos_;
        continue;
      }
      if (ch == ' ' || ch == '\t' || ch == '\r') {
        ++pos_;
        continue;
      }
      const std::size_t begin = pos_;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      at_line_start_ = false;
      tok = text_.substr(begin, pos_ - begin);
      return true;
    }
    return false;
  }

  // Tokens remaining on the current line (used to sniff the header shape).
  std::size_t tokens_on_line_of_next() {
    Tokenizer copy = *this;
    std::string_view tok;
    if (!copy.next(tok)) return 0;
    const std::size_t line = copy.line_;
    std::size_t count = 1;
    while (copy.next(tok) && copy.line_ == line) ++count;
    return count;
  }

  template <class T>
  T read(const char* what) {
    std::string_view tok;
    if (!next(tok)) {
      throw Error(ErrorCode::kParse, std::string("unexpected end of input reading ") + what);
    }
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_ + 1) + ": bad " + what + " '" +
                                         std::string(tok) + "'");
    }
    return value;
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
  bool at_line_start_ = true;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

double read_finite(Tokenizer& tok, const char* what) {
  const double v = tok.read<double>(what);
  if (!std::isfinite(v)) throw Error(ErrorCode::kParse, std::string("non-finite ") + what);
  return v;
}

}  // namespace

Dataset parse_tet_mesh(std::string_view text) {
  Tokenizer tok(text);
  const auto nv = tok.read<std::size_t>("vertex count");
  const auto nt = tok.read<std::size_t>("tet count");
  std::vector<Vec3> pos(nv);
  BivariateField field;
  field.values.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    pos[i].x = read_finite(tok, "x");
    pos[i].y = read_finite(tok, "y");
    pos[i].z = read_finite(tok, "z");
    field.values[i].a = read_finite(tok, "f1");
    field.values[i].b = read_finite(tok, "f2");
  }
  std::vector<Tet> tets(nt);
  for (std::size_t t = 0; t < nt; ++t)
    for (int k = 0; k < 4; ++k) {
      const auto id = tok.read<std::uint64_t>("vertex id");
      if (id >= nv) {
        throw Error(ErrorCode::kInvalidMesh, "tet " + std::to_string(t) + ": vertex id " + std::to_string(id) +
                                                 " out of range");
      }
      tets[t][k] = static_cast<VertexId>(id);
    }
  std::string_view extra;
  if (tok.next(extra)) throw Error(ErrorCode::kParse, "trailing data after tet list");
  return Dataset{TetMesh(std::move(pos), std::move(tets)), std::move(field)};
}

Dataset load_tet_mesh(const std::filesystem::path& path) { return parse_tet_mesh(slurp(path)); }

Dataset make_structured_grid(const GridSpec& grid, std::vector<double> f1, std::vector<double> f2) {
  const auto [nx, ny, nz] = grid.dims;
  if (nx < 2 || ny < 2 || nz < 2) throw Error(ErrorCode::kInvalidArgument, "grid dims must be >= 2");
  const std::size_t nv = nx * ny * nz;
  if (f1.size() != nv || f2.size() != nv) {
    throw Error(ErrorCode::kInvalidArgument, "field length " + std::to_string(f1.size()) + "/" +
                                                 std::to_string(f2.size()) + " does not match grid size " +
                                                 std::to_string(nv));
  }
  if (nv >= kBoundary) throw Error(ErrorCode::kInvalidArgument, "grid too large");

  auto coord = [](double lo, double hi, std::size_t i, std::size_t n) {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  std::vector<Vec3> pos(nv);
  BivariateField field;
  field.values.resize(nv);
  for (std::size_t k = 0; k < nz; ++k)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t v = i + nx * (j + ny * k);
        pos[v] = {coord(grid.lo.x, grid.hi.x, i, nx), coord(grid.lo.y, grid.hi.y, j, ny),
                  coord(grid.lo.z, grid.hi.z, k, nz)};
        field.values[v] = {f1[v], f2[v]};
      }

  // Each permutation of the axes gives one monotone path from corner 000 to 111.
  constexpr std::array<std::array<int, 3>, 6> kPerms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  const std::array<std::size_t, 3> stride{1, nx, nx * ny};
  std::vector<Tet> tets;
  tets.reserve(6 * (nx - 1) * (ny - 1) * (nz - 1));
  for (std::size_t k = 0; k + 1 < nz; ++k)
    for (std::size_t j = 0; j + 1 < ny; ++j)
      for (std::size_t i = 0; i + 1 < nx; ++i) {
        const std::size_t base = i + nx * (j + ny * k);
        for (const auto& perm : kPerms) {
          Tet t{};
          std::size_t v = base;
          t[0] = static_cast<VertexId>(v);
          for (int s = 0; s < 3; ++s) {
            v += stride[perm[s]];
            t[s + 1] = static_cast<VertexId>(v);
          }
          tets.push_back(t);
        }
      }
  return Dataset{TetMesh(std::move(pos), std::move(tets)), std::move(field)};
}

Dataset parse_structured_grid(std::string_view text) {
  Tokenizer tok(text);
  GridSpec grid;
  for (auto& d : grid.dims) d = tok.read<std::size_t>("grid dimension");
  if (grid.dims[0] < 2 || grid.dims[1] < 2 || grid.dims[2] < 2) {
    throw Error(ErrorCode::kParse, "grid dims must be >= 2");
  }
  grid.lo = {read_finite(tok, "xmin"), read_finite(tok, "ymin"), read_finite(tok, "zmin")};
  grid.hi = {read_finite(tok, "xmax"), read_finite(tok, "ymax"), read_finite(tok, "zmax")};
  const std::size_t nv = grid.dims[0] * grid.dims[1] * grid.dims[2];
  std::vector<double> f1(nv), f2(nv);
  try {
    for (auto& v : f1) v = read_finite(tok, "f1 value");
    for (auto& v : f2) v = read_finite(tok, "f2 value");
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, std::string("array length mismatch: ") + e.what());
  }
  std::string_view extra;
  if (tok.next(extra)) throw Error(ErrorCode::kParse, "array length mismatch: trailing values");
  return make_structured_grid(grid, std::move(f1), std::move(f2));
}

Dataset load_structured_grid(const std::filesystem::path& path) { return parse_structured_grid(slurp(path)); }

Dataset load_dataset(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  Tokenizer tok(text);
  const std::size_t header = tok.tokens_on_line_of_next();
  if (header == 3) return parse_structured_grid(text);
  if (header == 2) return parse_tet_mesh(text);
  throw Error(ErrorCode::kParse, path.string() + ": header must have 2 (mesh) or 3 (grid) values");
}

}  // namespace fibersurf
