#include "fibersurf/fiber.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace fibersurf {

namespace {

struct PolyVertex {
  Vec3 p;
  double t = 0;
  std::uint64_t key = 0;  // generating mesh edge (lo << 32 | hi)
};

std::uint64_t edge_key(VertexId lo, VertexId hi) { return (std::uint64_t{lo} << 32) | hi; }

struct TetFrame {
  std::array<VertexId, 4> v{};
  std::array<Vec3, 4> p{};
  std::array<double, 4> g{};
  std::array<double, 4> t{};
  std::array<Side, 4> side{};
};

TetFrame make_frame(const TetMesh& mesh, const BivariateField& field, TetId tet, const LineFrame& line) {
  TetFrame f;
  f.v = mesh.tet(tet);
  std::sort(f.v.begin(), f.v.end());
  for (int i = 0; i < 4; ++i) {
    f.p[i] = mesh.position(f.v[i]);
    f.g[i] = line.g(field[f.v[i]]);
    f.t[i] = line.t(field[f.v[i]]);
    f.side[i] = line.side(f.g[i]);
  }
  return f;
}

// Zero crossing of g on edge (i, j), i < j so the weight is taken from the
// lower vertex id.
PolyVertex crossing(const TetFrame& f, int i, int j) {
  const double s = crossing_weight(f.g[i], f.g[j]);
  return {f.p[i] + s * (f.p[j] - f.p[i]), f.t[i] + s * (f.t[j] - f.t[i]), edge_key(f.v[i], f.v[j])};
}

PolyVertex mt_vertex(const TetFrame& f, int a, int b) { return a < b ? crossing(f, a, b) : crossing(f, b, a); }

// Cyclic cross-section polygon of {g = 0}, oriented with its normal toward
// the positive side, starting at the vertex of the lowest mesh edge.
std::vector<PolyVertex> cross_section(const TetFrame& f) {
  std::vector<int> neg, pos;
  for (int i = 0; i < 4; ++i) (f.side[i] == Side::kNeg ? neg : pos).push_back(i);
  std::vector<PolyVertex> poly;
  Vec3 toward_pos;
  if (neg.empty() || pos.empty()) return poly;
  if (neg.size() == 1 || pos.size() == 1) {
    const bool lone_neg = neg.size() == 1;
    const int lone = lone_neg ? neg[0] : pos[0];
    for (int other : (lone_neg ? pos : neg)) poly.push_back(mt_vertex(f, lone, other));
    const int any_other = lone_neg ? pos[0] : neg[0];
    toward_pos = lone_neg ? f.p[any_other] - f.p[lone] : f.p[lone] - f.p[any_other];
  } else {
    const int a = neg[0], b = neg[1], c = pos[0], d = pos[1];
    poly = {mt_vertex(f, a, c), mt_vertex(f, a, d), mt_vertex(f, b, d), mt_vertex(f, b, c)};
    toward_pos = f.p[c] - f.p[a];
  }
  Vec3 normal{};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3& p = poly[i].p;
    const Vec3& q = poly[(i + 1) % poly.size()].p;
    normal = normal + cross(p, q);
  }
  if (dot(normal, toward_pos) < 0) std::reverse(poly.begin(), poly.end());
  auto first = std::min_element(poly.begin(), poly.end(),
                                [](const PolyVertex& x, const PolyVertex& y) { return x.key < y.key; });
  std::rotate(poly.begin(), first, poly.end());
  return poly;
}

int region(double t) { return t < 0.0 ? -1 : (t > 1.0 ? 1 : 0); }

// Point of P-Q where t equals `bound`, interpolated from the endpoint with the
// smaller key.
PolyVertex clip_point(const PolyVertex& p, const PolyVertex& q, double bound) {
  const PolyVertex& a = p.key < q.key ? p : q;
  const PolyVertex& b = p.key < q.key ? q : p;
  const double s = (bound - a.t) / (b.t - a.t);
  return {a.p + s * (b.p - a.p), bound, 0};
}

// Single-pass clip against the slab 0 <= t <= 1. New vertices are computed
// from the original polygon vertices only.
std::vector<PolyVertex> clip_to_slab(const std::vector<PolyVertex>& poly) {
  std::vector<PolyVertex> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const PolyVertex& p = poly[i];
    const PolyVertex& q = poly[(i + 1) % n];
    const int rp = region(p.t), rq = region(q.t);
    if (rp == 0) out.push_back(p);
    if (rp == rq) continue;
    // Boundaries crossed walking from p to q, in order.
    std::array<double, 2> bounds{};
    int nb = 0;
    if (rp < rq) {
      if (rp == -1) bounds[nb++] = 0.0;
      if (rq == 1) bounds[nb++] = 1.0;
    } else {
      if (rp == 1) bounds[nb++] = 1.0;
      if (rq == -1) bounds[nb++] = 0.0;
    }
    for (int k = 0; k < nb; ++k) {
      const double b = bounds[k];
      if (p.t == b || q.t == b) continue;  // the on-boundary endpoint is emitted itself
      out.push_back(clip_point(p, q, b));
    }
  }
  // Drop repeated vertices (touching configurations).
  std::vector<PolyVertex> unique;
  for (const PolyVertex& v : out)
    if (unique.empty() || !(unique.back().p == v.p)) unique.push_back(v);
  while (unique.size() > 1 && unique.back().p == unique.front().p) unique.pop_back();
  return unique;
}

struct VertexKey {
  std::array<std::uint64_t, 4> bits;
  friend bool operator==(const VertexKey&, const VertexKey&) = default;
};

struct VertexKeyHash {
  std::size_t operator()(const VertexKey& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::uint64_t b : k.bits) h = (h ^ b) * 0x100000001b3ull + (h >> 29);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

std::vector<SurfaceTriangle> extract_in_tet(const TetMesh& mesh, const BivariateField& field, TetId tet,
                                            const ControlEdge& e) {
  const LineFrame line(e);
  const TetFrame f = make_frame(mesh, field, tet, line);
  const std::vector<PolyVertex> clipped = clip_to_slab(cross_section(f));
  std::vector<SurfaceTriangle> out;
  for (std::size_t i = 1; i + 1 < clipped.size(); ++i) {
    out.push_back({SurfaceVertex{clipped[0].p, clipped[0].t}, SurfaceVertex{clipped[i].p, clipped[i].t},
                   SurfaceVertex{clipped[i + 1].p, clipped[i + 1].t}});
  }
  return out;
}

void append_surface(FiberSurfaceMesh& out, const TetMesh& mesh, const BivariateField& field, const TetSet& tets,
                    const ControlEdge& e, std::uint32_t control_edge_index, std::uint32_t component_offset) {
  std::unordered_map<VertexKey, std::uint32_t, VertexKeyHash> welded;
  auto vertex_index = [&](const SurfaceVertex& v) {
    const VertexKey key{{std::bit_cast<std::uint64_t>(v.position.x), std::bit_cast<std::uint64_t>(v.position.y),
                         std::bit_cast<std::uint64_t>(v.position.z), std::bit_cast<std::uint64_t>(v.t)}};
    auto [it, inserted] = welded.try_emplace(key, static_cast<std::uint32_t>(out.positions.size()));
    if (inserted) {
      out.positions.push_back(v.position);
      out.t.push_back(v.t);
    }
    return it->second;
  };
  for (std::size_t i = 0; i < tets.size(); ++i) {
    const TetId tet = tets.tets[i];
    for (const SurfaceTriangle& tri : extract_in_tet(mesh, field, tet, e)) {
      out.triangles.push_back({vertex_index(tri[0]), vertex_index(tri[1]), vertex_index(tri[2])});
      out.source_tet.push_back(tet);
      out.component_id.push_back(component_offset + tets.labels[i]);
      out.control_edge_index.push_back(control_edge_index);
    }
  }
}

FiberSurfaceResult extract_fiber_surface(const TetMesh& mesh, const BivariateField& field, const JacobiSet& jset,
                                         const ControlPolygon& poly) {
  FiberSurfaceResult result;
  std::uint32_t offset = 0;
  const std::vector<ControlEdge> edges = poly.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto [tets, trace] = extract_fiber_surface_tets(mesh, field, jset, edges[k]);
    append_surface(result.surface, mesh, field, tets, edges[k], static_cast<std::uint32_t>(k), offset);
    offset += tets.num_components;
    result.tet_sets.push_back(std::move(tets));
    result.traces.push_back(trace);
  }
  return result;
}

FiberSurfaceResult extract_component(const TetMesh& mesh, const BivariateField& field, const JacobiSet& jset,
                                     const ControlEdge& e, EdgeId jacobi_edge_id) {
  FiberSurfaceResult result;
  auto [tets, trace] = component_from_jacobi_edge(mesh, field, jset, e, jacobi_edge_id);
  append_surface(result.surface, mesh, field, tets, e, 0, 0);
  result.tet_sets.push_back(std::move(tets));
  result.traces.push_back(trace);
  return result;
}

// ---------------------------------------------------------------------------
// Single fibers

double FiberPolyline::length() const {
  double total = 0;
  for (const auto& [p, q] : segments) total += norm(q - p);
  return total;
}

namespace {

struct SectionVertex {
  Vec3 p;
  double f2 = 0;
  std::uint64_t key = 0;
};

// Segment of {f1 = q.a, f2 = q.b} inside one tet, if any.
std::optional<std::pair<Vec3, Vec3>> fiber_in_tet(const TetMesh& mesh, const BivariateField& field, TetId tet,
                                                  RangePoint q, bool& degenerate) {
  std::array<VertexId, 4> v = mesh.tet(tet);
  std::sort(v.begin(), v.end());
  double lo_a = field[v[0]].a, hi_a = lo_a, lo_b = field[v[0]].b, hi_b = lo_b;
  for (VertexId id : v) {
    lo_a = std::min(lo_a, field[id].a);
    hi_a = std::max(hi_a, field[id].a);
    lo_b = std::min(lo_b, field[id].b);
    hi_b = std::max(hi_b, field[id].b);
  }
  if (q.a < lo_a || q.a > hi_a || q.b < lo_b || q.b > hi_b) return std::nullopt;

  std::array<double, 4> g{};
  std::array<bool, 4> pos{};
  for (int i = 0; i < 4; ++i) {
    g[i] = field[v[i]].a - q.a;
    pos[i] = g[i] >= 0;
  }
  auto cut = [&](int i, int j) {
    const double s = g[i] / (g[i] - g[j]);
    const Vec3 pi = mesh.position(v[i]), pj = mesh.position(v[j]);
    return SectionVertex{pi + s * (pj - pi), field[v[i]].b + s * (field[v[j]].b - field[v[i]].b),
                         edge_key(v[i], v[j])};
  };
  auto cut_any = [&](int i, int j) { return i < j ? cut(i, j) : cut(j, i); };
  std::vector<int> neg_ids, pos_ids;
  for (int i = 0; i < 4; ++i) (pos[i] ? pos_ids : neg_ids).push_back(i);
  if (neg_ids.empty() || pos_ids.empty()) return std::nullopt;
  std::vector<SectionVertex> poly;
  if (neg_ids.size() == 1 || pos_ids.size() == 1) {
    const bool lone_neg = neg_ids.size() == 1;
    const int lone = lone_neg ? neg_ids[0] : pos_ids[0];
    for (int other : (lone_neg ? pos_ids : neg_ids)) poly.push_back(cut_any(lone, other));
  } else {
    const int a = neg_ids[0], b = neg_ids[1], c = pos_ids[0], d = pos_ids[1];
    poly = {cut_any(a, c), cut_any(a, d), cut_any(b, d), cut_any(b, c)};
  }

  std::vector<double> h(poly.size());
  bool all_zero = true;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    h[k] = poly[k].f2 - q.b;
    all_zero = all_zero && h[k] == 0;
  }
  if (all_zero) {
    degenerate = true;
    return std::nullopt;
  }
  std::vector<Vec3> ends;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const std::size_t m = (k + 1) % poly.size();
    if ((h[k] >= 0) == (h[m] >= 0)) continue;
    const std::size_t a = poly[k].key < poly[m].key ? k : m;
    const std::size_t b = a == k ? m : k;
    const double s = h[a] / (h[a] - h[b]);
    ends.push_back(poly[a].p + s * (poly[b].p - poly[a].p));
  }
  if (ends.size() != 2) return std::nullopt;
  return std::pair{ends[0], ends[1]};
}

}  // namespace

FiberPolyline extract_fiber(const TetMesh& mesh, const BivariateField& field, RangePoint q, const TetSet* tet_filter) {
  FiberPolyline out;
  auto visit = [&](TetId t) {
    bool degenerate = false;
    if (auto seg = fiber_in_tet(mesh, field, t, q, degenerate)) {
      out.segments.push_back(*seg);
      out.source_tet.push_back(t);
    }
    if (degenerate) ++out.degenerate_tets;
  };
  if (tet_filter) {
    for (TetId t : tet_filter->tets) visit(t);
  } else {
    for (TetId t = 0; t < mesh.num_tets(); ++t) visit(t);
  }
  return out;
}

RangePoint interpolate_field(const TetMesh& mesh, const BivariateField& field, TetId tet, Vec3 p) {
  const Tet& tv = mesh.tet(tet);
  const Vec3 p0 = mesh.position(tv[0]);
  const Vec3 e1 = mesh.position(tv[1]) - p0, e2 = mesh.position(tv[2]) - p0, e3 = mesh.position(tv[3]) - p0;
  const Vec3 r = p - p0;
  const double det = dot(e1, cross(e2, e3));
  const double l1 = dot(r, cross(e2, e3)) / det;
  const double l2 = dot(e1, cross(r, e3)) / det;
  const double l3 = dot(e1, cross(e2, r)) / det;
  const double l0 = 1.0 - l1 - l2 - l3;
  const RangePoint f0 = field[tv[0]], f1 = field[tv[1]], f2 = field[tv[2]], f3 = field[tv[3]];
  return {l0 * f0.a + l1 * f1.a + l2 * f2.a + l3 * f3.a, l0 * f0.b + l1 * f1.b + l2 * f2.b + l3 * f3.b};
}

}  // namespace fibersurf
