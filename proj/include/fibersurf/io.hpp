#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fibersurf/fiber.hpp"
#include "fibersurf/jacobi.hpp"
#include "fibersurf/range_geom.hpp"
#include "fibersurf/scatter.hpp"
#include "fibersurf/search.hpp"
#include "fibersurf/synthetic.hpp"

namespace fibersurf {

/// `v x y z` lines, then faces grouped as `o component_<k>` in ascending k.
void write_obj(std::ostream& os, const FiberSurfaceMesh& mesh);

/// Little-endian: "FSSC", u32 version, u32 n_vertices, u32 n_triangles,
/// f64 t[n_vertices], u32 source_tet[n_triangles].
void write_sidecar(std::ostream& os, const FiberSurfaceMesh& mesh);

/// `v` lines and one `l i j` element per segment.
void write_fiber_obj(std::ostream& os, const FiberPolyline& fiber);

/// `# extremum N saddle M boundary K`, then one line per Jacobi edge or
/// boundary fold: `edge_id kind v_lo v_hi a_lo b_lo a_hi b_hi`.
void write_jacobi(std::ostream& os, const TetMesh& mesh, const JacobiSet& jset);

/// Binary 16-bit PGM scaled to the maximum density; the top row is b_max.
/// Header comments carry `range_rect a_min b_min a_max b_max` and
/// `max_density`.
void write_pgm(std::ostream& os, const DensityRaster& raster);

/// Structured-grid text format.
void write_structured_grid(std::ostream& os, const SynthGrid& grid);

/// One JSON object on a single line.
std::string trace_json(const SearchTrace& trace, std::size_t control_edge_index);

/// "a1,b1 a2,b2 ..." (whitespace or ';' separated pairs).
std::vector<RangePoint> parse_points(std::string_view text);
/// Two columns per line; `#` comments allowed.
std::vector<RangePoint> read_points_file(const std::filesystem::path& path);

/// Opens for binary writing; throws Error(kIo) on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace fibersurf
