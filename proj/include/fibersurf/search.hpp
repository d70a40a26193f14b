#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fibersurf/jacobi.hpp"
#include "fibersurf/mesh.hpp"
#include "fibersurf/range_geom.hpp"

namespace fibersurf {

/// A Jacobi edge whose image crosses the line through the control edge.
struct IntersectionHit {
  EdgeId jacobi_edge_id = 0;
  EdgeKind kind = EdgeKind::kRegular;
  RangePoint point;  // on L
  TetId start_tet = 0;
};

/// Tets whose image overlaps the control segment, with one label per
/// face-connected component. Members are ascending; labels are numbered by
/// the smallest member of each component.
struct TetSet {
  std::vector<TetId> tets;
  std::vector<std::uint32_t> labels;
  std::uint32_t num_components = 0;

  std::size_t size() const { return tets.size(); }
  bool empty() const { return tets.empty(); }
  bool contains(TetId t) const;
  /// Sorts members and renumbers labels into the canonical order.
  void canonicalize();

  friend bool operator==(const TetSet&, const TetSet&) = default;
};

/// Counters and per-step wall times of one query.
struct SearchTrace {
  std::size_t n_jacobi_intersections = 0;
  std::size_t directed_searches = 0;
  std::size_t directed_visited = 0;
  std::size_t dead_ends = 0;
  std::size_t seeds_found = 0;
  std::size_t seeds_discarded = 0;
  std::size_t restricted_visited = 0;
  std::size_t enqueued = 0;
  std::size_t n_tets_fs = 0;

  double jacobi_intersections_ms = 0;
  double directed_search_ms = 0;
  double restricted_bfs_ms = 0;

  bool same_counters(const SearchTrace& o) const;
};

/// Per-query traversal state shared by every directed search and restricted
/// BFS of that query, plus a per-walk stamp so each directed search can avoid
/// its own earlier steps without seeing other walks' paths.
class VisitMarks {
 public:
  explicit VisitMarks(std::size_t num_tets) : state_(num_tets, kUnvisited), walk_(num_tets, 0) {}

  bool visited(TetId t) const { return state_[t] != kUnvisited; }
  bool member(TetId t) const { return state_[t] == kMember; }
  bool directed_only(TetId t) const { return state_[t] == kDirected; }
  void mark_directed(TetId t) { state_[t] = kDirected; }
  void mark_member(TetId t) { state_[t] = kMember; }

  /// Starts a new directed walk.
  void begin_walk() { ++current_walk_; }
  bool in_walk(TetId t) const { return walk_[t] == current_walk_; }
  void mark_walk(TetId t) { walk_[t] = current_walk_; }

 private:
  static constexpr std::uint8_t kUnvisited = 0, kDirected = 1, kMember = 2;
  std::vector<std::uint8_t> state_;
  std::vector<std::uint32_t> walk_;
  std::uint32_t current_walk_ = 0;
};

/// Per-tet range predicates for one control edge.
class TetRangeQuery {
 public:
  TetRangeQuery(const TetMesh& mesh, const BivariateField& field, const ControlEdge& e);

  const TetMesh& mesh() const { return mesh_; }
  const BivariateField& field() const { return field_; }
  const LineFrame& frame() const { return frame_; }
  HullLineInterval interval(TetId t) const;
  bool overlaps(TetId t) const { return interval(t).overlaps_unit(); }
  /// 0 for overlapping tets; otherwise the smallest closest_param_distance
  /// over crossings of L on the tet's edges; nullopt when L misses the tet.
  std::optional<double> approach_distance(TetId t) const;

 private:
  const TetMesh& mesh_;
  const BivariateField& field_;
  LineFrame frame_;
};

/// Step A: linear scan of the Jacobi edges and boundary folds against the
/// infinite line L.
std::vector<IntersectionHit> jacobi_intersections(const JacobiSet& jset, const ControlEdge& e);

/// Step B: greedy descent from the hit's start tet toward [u, v], moving only
/// to strictly better neighbours. Returns the first tet overlapping the
/// segment, or nullopt on a dead end or on joining an earlier walk's trail
/// (counted as a discarded seed).
std::optional<TetId> directed_search(const TetRangeQuery& query, const IntersectionHit& hit, VisitMarks& marks,
                                     SearchTrace& trace);

/// Step C: BFS over face neighbors restricted to overlapping tets. Members are
/// returned in visit order and marked in `marks`. Throws if the seed does not
/// overlap or is already a member.
std::vector<TetId> restricted_bfs(const TetRangeQuery& query, TetId seed, VisitMarks& marks, SearchTrace& trace);

/// All tets of the fiber surface of one control edge (steps A to C).
std::pair<TetSet, SearchTrace> extract_fiber_surface_tets(const TetMesh& mesh, const BivariateField& field,
                                                          const JacobiSet& jset, const ControlEdge& e);

/// Scans every tet; components by face adjacency.
TetSet exhaustive_oracle(const TetMesh& mesh, const BivariateField& field, const ControlEdge& e);

/// The single component reached from one selected Jacobi edge. Throws
/// Error(kNotAHit) when the edge is not intersected by L.
std::pair<TetSet, SearchTrace> component_from_jacobi_edge(const TetMesh& mesh, const BivariateField& field,
                                                          const JacobiSet& jset, const ControlEdge& e,
                                                          EdgeId selected_jacobi_edge_id);

}  // namespace fibersurf
