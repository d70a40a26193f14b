#include "fibersurf/jacobi.hpp"

#include <algorithm>
#include <numeric>

#include "fibersurf/parallel.hpp"

namespace fibersurf {

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kRegular:
      return "regular";
    case EdgeKind::kExtremum:
      return "extremum";
    case EdgeKind::kSaddle:
      return "saddle";
    case EdgeKind::kBoundaryFold:
      return "boundary";
  }
  return "?";
}

namespace {

struct LinkScratch {
  std::vector<VertexId> verts;
  std::vector<std::pair<VertexId, VertexId>> link_edges;
  std::vector<Side> side;
  std::vector<std::uint32_t> parent;
};

std::uint32_t find_root(std::vector<std::uint32_t>& parent, std::uint32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

std::size_t local_index(const std::vector<VertexId>& verts, VertexId v) {
  return static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
}

struct LinkCounts {
  int lower_cc = 0;
  int upper_cc = 0;
  bool boundary = false;
};

// Fills scratch with the sorted link vertices and their sides.
LinkCounts partition_link(const TetMesh& mesh, const BivariateField& field, EdgeId e, bool reversed,
                                   LinkScratch& s) {
  const Edge ed = mesh.edge(e);
  s.verts.clear();
  s.link_edges.clear();
  for (TetId t : mesh.edge_tets(e)) {
    VertexId other[2];
    int n = 0;
    for (VertexId v : mesh.tet(t))
      if (v != ed.lo && v != ed.hi) other[n++] = v;
    s.link_edges.emplace_back(other[0], other[1]);
    s.verts.push_back(other[0]);
    s.verts.push_back(other[1]);
  }
  std::sort(s.verts.begin(), s.verts.end());
  s.verts.erase(std::unique(s.verts.begin(), s.verts.end()), s.verts.end());

  EdgeImage image{field[ed.lo], ed.lo, field[ed.hi], ed.hi};
  if (reversed) image = EdgeImage{field[ed.hi], ed.hi, field[ed.lo], ed.lo};

  const std::size_t n = s.verts.size();
  s.side.resize(n);
  s.parent.resize(n);
  int lower = 0, upper = 0;
  for (std::size_t i = 0; i < n; ++i) {
    s.side[i] = sos_sign(field[s.verts[i]], s.verts[i], image);
    s.parent[i] = static_cast<std::uint32_t>(i);
    (s.side[i] == Side::kNeg ? lower : upper) += 1;
  }
  for (auto [c, d] : s.link_edges) {
    const auto ic = static_cast<std::uint32_t>(local_index(s.verts, c));
    const auto id = static_cast<std::uint32_t>(local_index(s.verts, d));
    if (s.side[ic] != s.side[id]) continue;
    const std::uint32_t rc = find_root(s.parent, ic), rd = find_root(s.parent, id);
    if (rc == rd) continue;
    s.parent[std::max(rc, rd)] = std::min(rc, rd);
    (s.side[ic] == Side::kNeg ? lower : upper) -= 1;
  }
  // A closed cycle has as many edges as vertices, an open path one fewer.
  return {lower, upper, s.link_edges.size() < n};
}

EdgeKind kind_from_counts(std::size_t n_lower, std::size_t n_upper, const LinkCounts& c) {
  if (n_lower == 0 || n_upper == 0) return c.boundary ? EdgeKind::kBoundaryFold : EdgeKind::kExtremum;
  if (c.lower_cc >= 2 || c.upper_cc >= 2) return EdgeKind::kSaddle;
  return EdgeKind::kRegular;
}

}  // namespace

EdgeClassification classify_edge(const TetMesh& mesh, const BivariateField& field, EdgeId e, bool reversed) {
  if (e >= mesh.num_edges()) throw Error(ErrorCode::kInvalidArgument, "edge id out of range");
  LinkScratch s;
  const LinkCounts c = partition_link(mesh, field, e, reversed, s);
  EdgeClassification out;
  for (std::size_t i = 0; i < s.verts.size(); ++i)
    (s.side[i] == Side::kNeg ? out.partition.lower : out.partition.upper).push_back(s.verts[i]);
  out.partition.lower_components = c.lower_cc;
  out.partition.upper_components = c.upper_cc;
  out.kind = kind_from_counts(out.partition.lower.size(), out.partition.upper.size(), c);
  return out;
}

const JacobiEdge* JacobiSet::find(EdgeId e) const {
  for (const auto* list : {&edges, &folds}) {
    auto it = std::lower_bound(list->begin(), list->end(), e,
                               [](const JacobiEdge& j, EdgeId id) { return j.edge_id < id; });
    if (it != list->end() && it->edge_id == e) return &*it;
  }
  return nullptr;
}

std::vector<const JacobiEdge*> JacobiSet::seeds() const {
  std::vector<const JacobiEdge*> out;
  out.reserve(edges.size() + folds.size());
  auto a = edges.begin(), b = folds.begin();
  while (a != edges.end() || b != folds.end()) {
    if (b == folds.end() || (a != edges.end() && a->edge_id < b->edge_id)) {
      out.push_back(&*a++);
    } else {
      out.push_back(&*b++);
    }
  }
  return out;
}

JacobiSet compute_jacobi_set(const TetMesh& mesh, const BivariateField& field) {
  if (field.size() != mesh.num_vertices()) {
    throw Error(ErrorCode::kInvalidArgument, "field length does not match vertex count");
  }
  const std::size_t ne = mesh.num_edges();
  std::vector<EdgeKind> kinds(ne, EdgeKind::kRegular);
  parallel_chunks(ne, 1 << 14, [&](std::size_t begin, std::size_t end) {
    LinkScratch s;
    for (std::size_t e = begin; e < end; ++e) {
      const LinkCounts c = partition_link(mesh, field, static_cast<EdgeId>(e), false, s);
      const auto n_lower = static_cast<std::size_t>(std::count(s.side.begin(), s.side.end(), Side::kNeg));
      kinds[e] = kind_from_counts(n_lower, s.side.size() - n_lower, c);
    }
  });

  JacobiSet jset;
  for (std::size_t e = 0; e < ne; ++e) {
    if (kinds[e] == EdgeKind::kRegular) continue;
    const Edge ed = mesh.edge(static_cast<EdgeId>(e));
    const auto tets = mesh.edge_tets(static_cast<EdgeId>(e));
    JacobiEdge j{static_cast<EdgeId>(e), kinds[e], field[ed.lo], field[ed.hi],
                 std::vector<TetId>(tets.begin(), tets.end())};
    if (kinds[e] == EdgeKind::kBoundaryFold) {
      jset.folds.push_back(std::move(j));
      continue;
    }
    jset.edges.push_back(std::move(j));
    (kinds[e] == EdgeKind::kExtremum ? jset.n_extremum : jset.n_saddle) += 1;
  }
  return jset;
}

std::vector<JacobiProjection> project_jacobi_edges(const JacobiSet& jset) {
  std::vector<JacobiProjection> out;
  out.reserve(jset.size());
  for (const JacobiEdge& j : jset.edges) out.push_back({j.edge_id, j.kind, j.image_lo, j.image_hi});
  return out;
}

}  // namespace fibersurf
