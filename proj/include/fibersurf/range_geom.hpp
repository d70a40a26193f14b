#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fibersurf/mesh.hpp"

namespace fibersurf {

/// Directed segment (u, v) in range space. The infinite line through it is L.
class ControlEdge {
 public:
  /// Throws Error(kInvalidArgument) when u == v or a coordinate is not finite.
  ControlEdge(RangePoint u, RangePoint v);

  RangePoint u() const { return u_; }
  RangePoint v() const { return v_; }
  RangePoint direction() const { return {v_.a - u_.a, v_.b - u_.b}; }
  double length() const;

 private:
  RangePoint u_;
  RangePoint v_;
};

struct ControlPolygon {
  std::vector<RangePoint> points;
  bool closed = false;

  /// Consecutive-point edges, plus the closing edge when `closed`. Throws if
  /// fewer than two points or two consecutive points coincide.
  std::vector<ControlEdge> edges() const;
};

enum class Side : std::int8_t { kNeg = -1, kPos = 1 };

inline int sign_of(Side s) { return static_cast<int>(s); }

/// (p - u) . N with N = (-(v-u).b, (v-u).a), the unnormalized left normal.
double signed_distance(RangePoint p, const ControlEdge& e);

/// 2D orientation of (p0, p1, p2) under Simulation of Simplicity: the points
/// carry distinct integer indices and are symbolically perturbed, lower index
/// and the second coordinate dominating. Never returns zero.
int sos_orient(RangePoint p0, std::int64_t i0, RangePoint p1, std::int64_t i1, RangePoint p2, std::int64_t i2);

/// Image of a mesh edge with the ids of its endpoints.
struct EdgeImage {
  RangePoint a;
  VertexId a_id;
  RangePoint b;
  VertexId b_id;
};

/// Side of f(p) relative to the line through an edge image, oriented a -> b.
Side sos_sign(RangePoint p, VertexId p_id, const EdgeImage& e);

/// Side relative to a control edge. A point exactly on L is resolved as if the
/// control endpoints carried indices above every mesh vertex, which reduces to
/// a rule on the direction of (v - u) alone.
Side sos_sign(RangePoint p, const ControlEdge& e);

/// Precomputed frame of a control edge: signed distance g and the projection
/// parameter t (0 at u, 1 at v) of any range point.
class LineFrame {
 public:
  explicit LineFrame(const ControlEdge& e);

  const ControlEdge& edge() const { return edge_; }
  double g(RangePoint p) const;
  double t(RangePoint p) const;
  Side side(double g) const { return g > 0 ? Side::kPos : g < 0 ? Side::kNeg : tie_; }
  Side side_of(RangePoint p) const { return side(g(p)); }

 private:
  ControlEdge edge_;
  RangePoint dir_;
  double len2_;
  Side tie_;
};

/// Interpolation weight of the zero crossing of g on the segment p -> q
/// (requires opposite sides). Always evaluated from `p`; callers keep p the
/// endpoint with the lower vertex id so neighboring cells agree bitwise.
double crossing_weight(double g_p, double g_q);

RangePoint lerp(RangePoint p, RangePoint q, double s);

/// Intersection of a segment with the infinite line through `line_of`, or
/// nothing when both endpoints fall on the same SoS side.
std::optional<RangePoint> segment_line_intersection(RangePoint p, RangePoint q, const ControlEdge& line_of);

/// Range of t over the intersection of L with the convex hull of up to four
/// image points. Points must be given in ascending vertex-id order.
struct HullLineInterval {
  bool crosses = false;
  double t_min = 0;
  double t_max = 0;

  bool overlaps_unit() const { return crosses && t_max >= 0.0 && t_min <= 1.0; }
};

HullLineInterval hull_line_interval(std::span<const RangePoint> images, const LineFrame& frame);

/// True iff the closed segment [u, v] meets the convex hull of the images.
/// Ties on L follow sos_sign; the comparison along L is closed.
bool hull_overlaps_segment(std::span<const RangePoint> images, const ControlEdge& e);

/// min(|x - u|, |x - v|), or 0 when x lies inside [u, v].
double closest_param_distance(RangePoint x, const ControlEdge& e);

}  // namespace fibersurf
