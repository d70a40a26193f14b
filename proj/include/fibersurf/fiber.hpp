#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fibersurf/jacobi.hpp"
#include "fibersurf/mesh.hpp"
#include "fibersurf/range_geom.hpp"
#include "fibersurf/search.hpp"

namespace fibersurf {

struct SurfaceVertex {
  Vec3 position;
  double t = 0;  // parameter along the control edge, u + t (v - u)
};

using SurfaceTriangle = std::array<SurfaceVertex, 3>;

/// Marching-tetrahedra piece of the fiber surface of `e` inside one tet,
/// clipped to 0 <= t <= 1. At most four triangles.
std::vector<SurfaceTriangle> extract_in_tet(const TetMesh& mesh, const BivariateField& field, TetId tet,
                                            const ControlEdge& e);

struct FiberSurfaceMesh {
  std::vector<Vec3> positions;
  std::vector<double> t;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<TetId> source_tet;
  std::vector<std::uint32_t> component_id;
  std::vector<std::uint32_t> control_edge_index;

  std::size_t num_vertices() const { return positions.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  bool empty() const { return triangles.empty(); }
};

/// Appends the surface of `e` over the tets of `tets` to `out`, welding
/// bitwise-identical vertices. Component ids are `component_offset + label`.
void append_surface(FiberSurfaceMesh& out, const TetMesh& mesh, const BivariateField& field, const TetSet& tets,
                    const ControlEdge& e, std::uint32_t control_edge_index, std::uint32_t component_offset);

struct FiberSurfaceResult {
  FiberSurfaceMesh surface;
  std::vector<TetSet> tet_sets;      // one per control edge
  std::vector<SearchTrace> traces;   // one per control edge
};

/// Runs the Jacobi-driven search and step D for every edge of the polygon.
/// Component ids are unique across the whole polygon.
FiberSurfaceResult extract_fiber_surface(const TetMesh& mesh, const BivariateField& field, const JacobiSet& jset,
                                         const ControlPolygon& poly);

/// Surface of the single component reached from a selected Jacobi edge.
FiberSurfaceResult extract_component(const TetMesh& mesh, const BivariateField& field, const JacobiSet& jset,
                                     const ControlEdge& e, EdgeId jacobi_edge_id);

struct FiberPolyline {
  std::vector<std::pair<Vec3, Vec3>> segments;
  std::vector<TetId> source_tet;
  /// Tets where both interpolants are constant-coincident; no segment emitted.
  std::size_t degenerate_tets = 0;

  double length() const;
};

/// The fiber f^-1(q), one segment per intersected tet. Scans `tet_filter`
/// when given, else every tet.
FiberPolyline extract_fiber(const TetMesh& mesh, const BivariateField& field, RangePoint q,
                            const TetSet* tet_filter = nullptr);

/// PL interpolation of the field at a point inside (or on) a tet.
RangePoint interpolate_field(const TetMesh& mesh, const BivariateField& field, TetId tet, Vec3 p);

}  // namespace fibersurf
