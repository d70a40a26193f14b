#include "fibersurf/search.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <limits>
#include <numeric>

#include "fibersurf/parallel.hpp"

namespace fibersurf {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::array<VertexId, 4> sorted_vertices(const Tet& t) {
  std::array<VertexId, 4> v = t;
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

bool TetSet::contains(TetId t) const { return std::binary_search(tets.begin(), tets.end(), t); }

void TetSet::canonicalize() {
  std::vector<std::size_t> order(tets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return tets[x] < tets[y]; });
  std::vector<TetId> sorted_tets(tets.size());
  std::vector<std::uint32_t> sorted_labels(tets.size());
  std::vector<std::uint32_t> remap;
  const std::uint32_t unset = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_tets[i] = tets[order[i]];
    const std::uint32_t old = labels[order[i]];
    if (old >= remap.size()) remap.resize(old + 1, unset);
    if (remap[old] == unset) remap[old] = next++;
    sorted_labels[i] = remap[old];
  }
  tets = std::move(sorted_tets);
  labels = std::move(sorted_labels);
  num_components = next;
}

bool SearchTrace::same_counters(const SearchTrace& o) const {
  return n_jacobi_intersections == o.n_jacobi_intersections && directed_searches == o.directed_searches &&
         directed_visited == o.directed_visited && dead_ends == o.dead_ends && seeds_found == o.seeds_found &&
         seeds_discarded == o.seeds_discarded && restricted_visited == o.restricted_visited &&
         enqueued == o.enqueued && n_tets_fs == o.n_tets_fs;
}

TetRangeQuery::TetRangeQuery(const TetMesh& mesh, const BivariateField& field, const ControlEdge& e)
    : mesh_(mesh), field_(field), frame_(e) {}

HullLineInterval TetRangeQuery::interval(TetId t) const {
  const auto v = sorted_vertices(mesh_.tet(t));
  const std::array<RangePoint, 4> images{field_[v[0]], field_[v[1]], field_[v[2]], field_[v[3]]};
  return hull_line_interval(images, frame_);
}

std::optional<double> TetRangeQuery::approach_distance(TetId t) const {
  const auto v = sorted_vertices(mesh_.tet(t));
  std::array<double, 4> g{};
  for (int i = 0; i < 4; ++i) g[i] = frame_.g(field_[v[i]]);
  if (interval(t).overlaps_unit()) return 0.0;
  std::optional<double> best;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (frame_.side(g[i]) == frame_.side(g[j])) continue;
      const RangePoint x = lerp(field_[v[i]], field_[v[j]], crossing_weight(g[i], g[j]));
      const double d = closest_param_distance(x, frame_.edge());
      if (!best || d < *best) best = d;
    }
  return best;
}

std::vector<IntersectionHit> jacobi_intersections(const JacobiSet& jset, const ControlEdge& e) {
  const LineFrame frame(e);
  std::vector<IntersectionHit> hits;
  for (const JacobiEdge* jp : jset.seeds()) {
    const JacobiEdge& j = *jp;
    const double g_lo = frame.g(j.image_lo), g_hi = frame.g(j.image_hi);
    if (frame.side(g_lo) == frame.side(g_hi)) continue;
    hits.push_back(IntersectionHit{j.edge_id, j.kind, lerp(j.image_lo, j.image_hi, crossing_weight(g_lo, g_hi)),
                                   j.incident_tets.front()});
  }
  return hits;
}

std::optional<TetId> directed_search(const TetRangeQuery& query, const IntersectionHit& hit, VisitMarks& marks,
                                     SearchTrace& trace) {
  const TetMesh& mesh = query.mesh();
  ++trace.directed_searches;
  marks.begin_walk();
  // Start in the tet of the Jacobi edge's star that is closest to the segment.
  TetId current = hit.start_tet;
  double start_distance = query.approach_distance(current).value_or(std::numeric_limits<double>::infinity());
  for (TetId t : mesh.edge_tets(hit.jacobi_edge_id)) {
    const double d = marks.member(t) ? 0.0 : query.approach_distance(t).value_or(std::numeric_limits<double>::infinity());
    if (d < start_distance || (d == start_distance && t < current)) {
      current = t;
      start_distance = d;
    }
  }
  for (std::size_t steps = 0; steps <= mesh.num_tets(); ++steps) {
    marks.mark_walk(current);
    if (!marks.visited(current)) {
      marks.mark_directed(current);
      ++trace.directed_visited;
    }
    if (marks.member(current) || query.overlaps(current)) return current;

    TetId best = kBoundary;
    double best_distance = std::numeric_limits<double>::infinity();
    for (TetId nb : mesh.face_neighbors(current)) {
      if (nb == kBoundary || marks.in_walk(nb)) continue;
      const std::optional<double> d = marks.member(nb) ? std::optional<double>(0.0) : query.approach_distance(nb);
      if (!d) continue;
      if (*d < best_distance || (*d == best_distance && nb < best)) {
        best = nb;
        best_distance = *d;
      }
    }
    if (best == kBoundary) break;
    current = best;
  }
  ++trace.dead_ends;
  return std::nullopt;
}

std::vector<TetId> restricted_bfs(const TetRangeQuery& query, TetId seed, VisitMarks& marks, SearchTrace& trace) {
  const TetMesh& mesh = query.mesh();
  if (marks.member(seed)) throw Error(ErrorCode::kInvalidArgument, "seed tet is already in the fiber surface set");
  if (!query.overlaps(seed)) throw Error(ErrorCode::kInvalidArgument, "seed tet does not overlap the control edge");

  std::vector<TetId> component;
  std::deque<TetId> queue;
  marks.mark_member(seed);
  queue.push_back(seed);
  ++trace.enqueued;
  while (!queue.empty()) {
    const TetId t = queue.front();
    queue.pop_front();
    component.push_back(t);
    ++trace.restricted_visited;
    for (TetId nb : mesh.face_neighbors(t)) {
      if (nb == kBoundary || marks.member(nb) || !query.overlaps(nb)) continue;
      marks.mark_member(nb);
      queue.push_back(nb);
      ++trace.enqueued;
    }
  }
  return component;
}

std::pair<TetSet, SearchTrace> extract_fiber_surface_tets(const TetMesh& mesh, const BivariateField& field,
                                                          const JacobiSet& jset, const ControlEdge& e) {
  SearchTrace trace;
  const TetRangeQuery query(mesh, field, e);

  auto t0 = Clock::now();
  const std::vector<IntersectionHit> hits = jacobi_intersections(jset, e);
  trace.n_jacobi_intersections = hits.size();
  trace.jacobi_intersections_ms = elapsed_ms(t0);

  VisitMarks marks(mesh.num_tets());
  TetSet out;
  for (const IntersectionHit& hit : hits) {
    t0 = Clock::now();
    const std::optional<TetId> seed = directed_search(query, hit, marks, trace);
    trace.directed_search_ms += elapsed_ms(t0);
    if (!seed) continue;
    if (marks.member(*seed)) {
      ++trace.seeds_discarded;
      continue;
    }
    ++trace.seeds_found;

    t0 = Clock::now();
    const std::vector<TetId> component = restricted_bfs(query, *seed, marks, trace);
    trace.restricted_bfs_ms += elapsed_ms(t0);
    out.tets.insert(out.tets.end(), component.begin(), component.end());
    out.labels.insert(out.labels.end(), component.size(), out.num_components);
    ++out.num_components;
  }
  out.canonicalize();
  trace.n_tets_fs = out.size();
  return {std::move(out), trace};
}

TetSet exhaustive_oracle(const TetMesh& mesh, const BivariateField& field, const ControlEdge& e) {
  const TetRangeQuery query(mesh, field, e);
  const std::size_t nt = mesh.num_tets();
  std::vector<std::uint8_t> inside(nt, 0);
  parallel_chunks(nt, 1 << 15, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) inside[t] = query.overlaps(static_cast<TetId>(t)) ? 1 : 0;
  });

  std::vector<TetId> parent(nt);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](TetId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (TetId t = 0; t < nt; ++t) {
    if (!inside[t]) continue;
    for (TetId nb : mesh.face_neighbors(t)) {
      if (nb == kBoundary || nb < t || !inside[nb]) continue;
      const TetId ra = find(t), rb = find(nb);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  TetSet out;
  for (TetId t = 0; t < nt; ++t) {
    if (!inside[t]) continue;
    out.tets.push_back(t);
    out.labels.push_back(find(t));
  }
  out.canonicalize();
  return out;
}

std::pair<TetSet, SearchTrace> component_from_jacobi_edge(const TetMesh& mesh, const BivariateField& field,
                                                          const JacobiSet& jset, const ControlEdge& e,
                                                          EdgeId selected_jacobi_edge_id) {
  SearchTrace trace;
  auto t0 = Clock::now();
  const std::vector<IntersectionHit> hits = jacobi_intersections(jset, e);
  trace.n_jacobi_intersections = hits.size();
  trace.jacobi_intersections_ms = elapsed_ms(t0);
  auto it = std::find_if(hits.begin(), hits.end(),
                         [&](const IntersectionHit& h) { return h.jacobi_edge_id == selected_jacobi_edge_id; });
  if (it == hits.end()) {
    throw Error(ErrorCode::kNotAHit,
                "edge " + std::to_string(selected_jacobi_edge_id) + " is not a Jacobi edge crossing the control line");
  }

  const TetRangeQuery query(mesh, field, e);
  VisitMarks marks(mesh.num_tets());
  TetSet out;
  t0 = Clock::now();
  const std::optional<TetId> seed = directed_search(query, *it, marks, trace);
  trace.directed_search_ms = elapsed_ms(t0);
  if (seed) {
    ++trace.seeds_found;
    t0 = Clock::now();
    out.tets = restricted_bfs(query, *seed, marks, trace);
    trace.restricted_bfs_ms = elapsed_ms(t0);
    out.labels.assign(out.tets.size(), 0);
    out.num_components = 1;
    out.canonicalize();
  }
  trace.n_tets_fs = out.size();
  return {std::move(out), trace};
}

}  // namespace fibersurf
