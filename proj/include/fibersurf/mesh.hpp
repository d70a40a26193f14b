#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fibersurf/error.hpp"

namespace fibersurf {

using VertexId = std::uint32_t;
using TetId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr TetId kBoundary = std::numeric_limits<TetId>::max();

struct Vec3 {
  double x = 0, y = 0, z = 0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double dot(Vec3 a, Vec3 b);
Vec3 cross(Vec3 a, Vec3 b);
double norm(Vec3 a);

using Tet = std::array<VertexId, 4>;

struct Edge {
  VertexId lo;
  VertexId hi;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Compressed adjacency list: items of row i are items[offsets[i] .. offsets[i+1]).
template <class T>
struct Csr {
  std::vector<std::uint32_t> offsets{0};
  std::vector<T> items;

  std::span<const T> row(std::size_t i) const {
    return {items.data() + offsets[i], items.data() + offsets[i + 1]};
  }
  std::size_t rows() const { return offsets.size() - 1; }
};

// Local tet edge k joins local vertices kTetEdges[k][0] and kTetEdges[k][1].
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Immutable tetrahedral mesh with eagerly built adjacency.
///
/// Face i of a tet is the face opposite local vertex i; face_neighbor(t, i)
/// is the tet across that face or kBoundary.
class TetMesh {
 public:
  TetMesh() = default;

  /// Builds all adjacency. Throws Error(kInvalidMesh) on out-of-range or
  /// repeated vertex ids and Error(kNonManifold) when a face has more than
  /// two incident tets.
  TetMesh(std::vector<Vec3> positions, std::vector<Tet> tets);

  std::size_t num_vertices() const { return positions_.size(); }
  std::size_t num_tets() const { return tets_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const Vec3> positions() const { return positions_; }
  std::span<const Tet> tets() const { return tets_; }
  std::span<const Edge> edges() const { return edges_; }

  const Vec3& position(VertexId v) const { return positions_[v]; }
  const Tet& tet(TetId t) const { return tets_[t]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  const std::array<TetId, 4>& face_neighbors(TetId t) const { return face_neighbors_[t]; }
  /// Global edge ids of a tet, in kTetEdges order.
  const std::array<EdgeId, 6>& tet_edges(TetId t) const { return tet_edges_[t]; }
  /// Incident tets of an edge, ascending.
  std::span<const TetId> edge_tets(EdgeId e) const { return edge_to_tets_.row(e); }
  /// Incident tets of a vertex, ascending.
  std::span<const TetId> vertex_tets(VertexId v) const { return vertex_to_tets_.row(v); }

  /// Edge id for the vertex pair, in either order; throws if absent.
  EdgeId find_edge(VertexId a, VertexId b) const;

  std::size_t num_boundary_faces() const { return num_boundary_faces_; }
  double tet_volume(TetId t) const;

 private:
  std::vector<Vec3> positions_;
  std::vector<Tet> tets_;
  std::vector<std::array<TetId, 4>> face_neighbors_;
  std::vector<Edge> edges_;
  std::vector<std::array<EdgeId, 6>> tet_edges_;
  Csr<TetId> edge_to_tets_;
  Csr<TetId> vertex_to_tets_;
  std::size_t num_boundary_faces_ = 0;
};

struct RangePoint {
  double a = 0;  // f1
  double b = 0;  // f2
  friend bool operator==(const RangePoint&, const RangePoint&) = default;
};

/// Per-vertex pair (f1, f2).
struct BivariateField {
  std::vector<RangePoint> values;
  std::array<std::string, 2> names{"f1", "f2"};

  std::size_t size() const { return values.size(); }
  const RangePoint& operator[](VertexId v) const { return values[v]; }
};

struct Dataset {
  TetMesh mesh;
  BivariateField field;
};

/// Link of an edge: the opposite edges (c, d) of every incident tet.
struct EdgeLink {
  /// Ordered along the cycle (interior) or path (boundary).
  std::vector<VertexId> link_vertices;
  std::vector<std::pair<VertexId, VertexId>> link_edges;
  bool is_boundary_edge = false;
};

EdgeLink edge_link(const TetMesh& mesh, EdgeId e);

/// Explicit-mesh text format: `nv nt`, nv lines `x y z f1 f2`, nt lines `a b c d`.
Dataset load_tet_mesh(const std::filesystem::path& path);
Dataset parse_tet_mesh(std::string_view text);

/// Structured-grid text format, tetrahedralized with the Freudenthal split.
Dataset load_structured_grid(const std::filesystem::path& path);
Dataset parse_structured_grid(std::string_view text);

/// Picks the loader from the token count of the first header line.
Dataset load_dataset(const std::filesystem::path& path);

struct GridSpec {
  std::array<std::size_t, 3> dims{};
  Vec3 lo{};
  Vec3 hi{};
};

/// 6 tets per cube, all sharing the cube diagonal (0,0,0)-(1,1,1).
Dataset make_structured_grid(const GridSpec& grid, std::vector<double> f1, std::vector<double> f2);

}  // namespace fibersurf
