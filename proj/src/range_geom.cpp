#include "fibersurf/range_geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace fibersurf {

ControlEdge::ControlEdge(RangePoint u, RangePoint v) : u_(u), v_(v) {
  if (!std::isfinite(u.a) || !std::isfinite(u.b) || !std::isfinite(v.a) || !std::isfinite(v.b)) {
    throw Error(ErrorCode::kInvalidArgument, "control edge has a non-finite coordinate");
  }
  if (u == v) throw Error(ErrorCode::kInvalidArgument, "control edge endpoints coincide");
}

double ControlEdge::length() const { return std::hypot(v_.a - u_.a, v_.b - u_.b); }

std::vector<ControlEdge> ControlPolygon::edges() const {
  if (points.size() < 2) throw Error(ErrorCode::kInvalidArgument, "control polygon needs at least two points");
  std::vector<ControlEdge> out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) out.emplace_back(points[i], points[i + 1]);
  if (closed && points.size() > 2 && !(points.back() == points.front())) {
    out.emplace_back(points.back(), points.front());
  }
  return out;
}

double signed_distance(RangePoint p, const ControlEdge& e) {
  const RangePoint d = e.direction();
  return d.a * (p.b - e.u().b) - d.b * (p.a - e.u().a);
}

int sos_orient(RangePoint p0, std::int64_t i0, RangePoint p1, std::int64_t i1, RangePoint p2, std::int64_t i2) {
  // Sort by index, tracking the permutation parity, so that a given triple is
  // always evaluated with the same floating-point expression.
  std::array<std::pair<std::int64_t, RangePoint>, 3> pts{{{i0, p0}, {i1, p1}, {i2, p2}}};
  int parity = 1;
  auto swap_if = [&](int x, int y) {
    if (pts[x].first > pts[y].first) {
      std::swap(pts[x], pts[y]);
      parity = -parity;
    }
  };
  swap_if(0, 1);
  swap_if(1, 2);
  swap_if(0, 1);
  const RangePoint& pi = pts[0].second;
  const RangePoint& pj = pts[1].second;
  const RangePoint& pk = pts[2].second;

  auto sgn = [](double x) { return (x > 0) - (x < 0); };
  const double det = (pj.a - pi.a) * (pk.b - pi.b) - (pj.b - pi.b) * (pk.a - pi.a);
  if (int s = sgn(det)) return parity * s;
  // Coefficients of the perturbation terms in decreasing order of dominance.
  if (int s = sgn(pk.a - pj.a)) return parity * s;
  if (int s = sgn(pj.b - pk.b)) return parity * s;
  if (int s = sgn(pi.a - pk.a)) return parity * s;
  return parity;
}

Side sos_sign(RangePoint p, VertexId p_id, const EdgeImage& e) {
  return sos_orient(e.a, e.a_id, e.b, e.b_id, p, p_id) > 0 ? Side::kPos : Side::kNeg;
}

namespace {

// orient(p, u, v) with u, v indexed above every mesh vertex: the det vanishes,
// and the next coefficients are (v - u).a, then (u - v).b.
Side control_tie_side(RangePoint dir) {
  if (dir.a != 0) return dir.a > 0 ? Side::kPos : Side::kNeg;
  return dir.b < 0 ? Side::kPos : Side::kNeg;
}

}  // namespace

Side sos_sign(RangePoint p, const ControlEdge& e) {
  const double d = signed_distance(p, e);
  if (d > 0) return Side::kPos;
  if (d < 0) return Side::kNeg;
  return control_tie_side(e.direction());
}

LineFrame::LineFrame(const ControlEdge& e)
    : edge_(e),
      dir_(e.direction()),
      len2_(dir_.a * dir_.a + dir_.b * dir_.b),
      tie_(control_tie_side(dir_)) {}

double LineFrame::g(RangePoint p) const { return signed_distance(p, edge_); }

double LineFrame::t(RangePoint p) const {
  return ((p.a - edge_.u().a) * dir_.a + (p.b - edge_.u().b) * dir_.b) / len2_;
}

double crossing_weight(double g_p, double g_q) { return g_p / (g_p - g_q); }

RangePoint lerp(RangePoint p, RangePoint q, double s) { return {p.a + s * (q.a - p.a), p.b + s * (q.b - p.b)}; }

std::optional<RangePoint> segment_line_intersection(RangePoint p, RangePoint q, const ControlEdge& line_of) {
  const LineFrame frame(line_of);
  const double gp = frame.g(p), gq = frame.g(q);
  if (frame.side(gp) == frame.side(gq)) return std::nullopt;
  return lerp(p, q, crossing_weight(gp, gq));
}

HullLineInterval hull_line_interval(std::span<const RangePoint> images, const LineFrame& frame) {
  std::array<double, 4> g{}, t{};
  std::array<Side, 4> side{};
  const std::size_t n = std::min<std::size_t>(images.size(), 4);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = frame.g(images[i]);
    t[i] = frame.t(images[i]);
    side[i] = frame.side(g[i]);
  }
  HullLineInterval out;
  out.t_min = std::numeric_limits<double>::infinity();
  out.t_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (side[i] == side[j]) continue;
      const double s = crossing_weight(g[i], g[j]);
      const double tc = t[i] + s * (t[j] - t[i]);
      out.crosses = true;
      out.t_min = std::min(out.t_min, tc);
      out.t_max = std::max(out.t_max, tc);
    }
  return out;
}

bool hull_overlaps_segment(std::span<const RangePoint> images, const ControlEdge& e) {
  return hull_line_interval(images, LineFrame(e)).overlaps_unit();
}

double closest_param_distance(RangePoint x, const ControlEdge& e) {
  const LineFrame frame(e);
  const double t = frame.t(x);
  if (t >= 0.0 && t <= 1.0) return 0.0;
  const double du = std::hypot(x.a - e.u().a, x.b - e.u().b);
  const double dv = std::hypot(x.a - e.v().a, x.b - e.v().b);
  return std::min(du, dv);
}

}  // namespace fibersurf
