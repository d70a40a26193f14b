#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fibersurf/mesh.hpp"
#include "fibersurf/range_geom.hpp"

namespace fibersurf {

/// kBoundaryFold: a boundary edge whose open link lies on one side of the
/// image line. The link is truncated there, so this is not a Jacobi edge, but
/// the image of such edges bounds the range just as Jacobi edges bound sheets.
enum class EdgeKind : std::uint8_t { kRegular = 0, kExtremum = 1, kSaddle = 2, kBoundaryFold = 3 };

std::string_view to_string(EdgeKind kind);

/// Lower / upper link of an edge relative to the line through its image.
struct LinkPartition {
  std::vector<VertexId> lower;
  std::vector<VertexId> upper;
  int lower_components = 0;
  int upper_components = 0;
};

struct EdgeClassification {
  EdgeKind kind = EdgeKind::kRegular;
  LinkPartition partition;
};

/// Classifies one edge. With `reversed` the edge image is oriented hi -> lo,
/// which swaps lower and upper but never changes the kind.
EdgeClassification classify_edge(const TetMesh& mesh, const BivariateField& field, EdgeId e,
                                 bool reversed = false);

struct JacobiEdge {
  EdgeId edge_id = 0;
  EdgeKind kind = EdgeKind::kRegular;
  RangePoint image_lo;
  RangePoint image_hi;
  std::vector<TetId> incident_tets;
};

struct JacobiSet {
  std::vector<JacobiEdge> edges;  // extremum and saddle edges, ascending edge_id
  std::vector<JacobiEdge> folds;  // boundary folds, ascending edge_id
  std::size_t n_extremum = 0;
  std::size_t n_saddle = 0;

  std::size_t size() const { return edges.size(); }
  bool empty() const { return edges.empty(); }
  /// Entry for a mesh edge id in `edges` or `folds`, or nullptr.
  const JacobiEdge* find(EdgeId e) const;
  /// Jacobi edges and folds merged by edge id: the seed candidates of a query.
  std::vector<const JacobiEdge*> seeds() const;
};

JacobiSet compute_jacobi_set(const TetMesh& mesh, const BivariateField& field);

struct JacobiProjection {
  EdgeId edge_id;
  EdgeKind kind;
  RangePoint a;
  RangePoint b;
};

std::vector<JacobiProjection> project_jacobi_edges(const JacobiSet& jset);

}  // namespace fibersurf
