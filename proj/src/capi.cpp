#include "fibersurf/fibersurf.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "fibersurf/fiber.hpp"
#include "fibersurf/io.hpp"
#include "fibersurf/jacobi.hpp"
#include "fibersurf/parallel.hpp"
#include "fibersurf/scatter.hpp"
#include "fibersurf/search.hpp"
#include "fibersurf/service.hpp"
#include "fibersurf/synthetic.hpp"

using namespace fibersurf;

struct fs_dataset {
  Dataset data;
  JacobiSet jset;
};

struct fs_tetset {
  TetSet set;
};

struct fs_surface {
  FiberSurfaceResult result;
};

struct fs_raster {
  DensityRaster raster;
};

struct fs_server {
  std::unique_ptr<Service> service;
};

static_assert(sizeof(Vec3) == 3 * sizeof(double));

namespace {

thread_local std::string g_last_error;

fs_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::kIo:
      return FS_ERR_IO;
    case ErrorCode::kParse:
      return FS_ERR_PARSE;
    case ErrorCode::kInvalidMesh:
      return FS_ERR_INVALID_MESH;
    case ErrorCode::kNonManifold:
      return FS_ERR_NON_MANIFOLD;
    case ErrorCode::kInvalidArgument:
      return FS_ERR_INVALID_ARGUMENT;
    case ErrorCode::kNotFound:
      return FS_ERR_NOT_FOUND;
    case ErrorCode::kNotAHit:
      return FS_ERR_NOT_A_HIT;
  }
  return FS_ERR_INTERNAL;
}

template <class F>
fs_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return FS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  }
  return FS_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

ControlEdge edge_of(const fs_edge* e) {
  require(e, "edge");
  return ControlEdge({e->u[0], e->u[1]}, {e->v[0], e->v[1]});
}

void fill_trace(const SearchTrace& t, fs_trace* out) {
  if (!out) return;
  *out = fs_trace{t.n_jacobi_intersections, t.directed_searches, t.directed_visited, t.dead_ends,
                  t.seeds_found, t.seeds_discarded, t.restricted_visited, t.enqueued, t.n_tets_fs,
                  t.jacobi_intersections_ms, t.directed_search_ms, t.restricted_bfs_ms};
}

template <class W>
void write_file(const char* path, W&& writer) {
  require(path, "path");
  std::ofstream out = open_output(path);
  writer(out);
  out.close();
  if (!out) throw Error(ErrorCode::kIo, std::string("write failed: ") + path);
}

}  // namespace

extern "C" {

const char* fs_last_error(void) { return g_last_error.c_str(); }

const char* fs_version(void) { return "1.0.0"; }

fs_status fs_set_threads(unsigned n) {
  return guard([&] { set_max_threads(n); });
}

fs_status fs_dataset_load(const char* path, fs_dataset** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    auto ds = std::make_unique<fs_dataset>();
    ds->data = load_dataset(path);
    ds->jset = compute_jacobi_set(ds->data.mesh, ds->data.field);
    *out = ds.release();
  });
}

fs_status fs_dataset_synth(const char* kind, unsigned n, uint64_t seed, fs_dataset** out) {
  return guard([&] {
    require(kind, "kind");
    require(out, "out");
    auto ds = std::make_unique<fs_dataset>();
    ds->data = make_synthetic_dataset(parse_synth_kind(kind), n, seed);
    ds->jset = compute_jacobi_set(ds->data.mesh, ds->data.field);
    *out = ds.release();
  });
}

void fs_dataset_free(fs_dataset* ds) { delete ds; }

fs_status fs_dataset_info_get(const fs_dataset* ds, fs_dataset_info* out) {
  return guard([&] {
    require(ds, "dataset");
    require(out, "out");
    const RangeRect r = range_rect(ds->data.field);
    *out = fs_dataset_info{ds->data.mesh.num_vertices(), ds->data.mesh.num_tets(), ds->data.mesh.num_edges(),
                           ds->jset.size(), ds->jset.n_extremum, ds->jset.n_saddle,
                           ds->jset.folds.size(),
                           {r.a_min, r.b_min, r.a_max, r.b_max}};
  });
}

fs_status fs_jacobi_write(const fs_dataset* ds, const char* path) {
  return guard([&] {
    require(ds, "dataset");
    write_file(path, [&](std::ostream& os) { write_jacobi(os, ds->data.mesh, ds->jset); });
  });
}

fs_status fs_synth_write(const char* kind, unsigned n, uint64_t seed, const char* path) {
  return guard([&] {
    require(kind, "kind");
    const SynthGrid g = make_synthetic(parse_synth_kind(kind), n, seed);
    write_file(path, [&](std::ostream& os) { write_structured_grid(os, g); });
  });
}

fs_status fs_extract_tets(const fs_dataset* ds, const fs_edge* e, fs_tetset** out, fs_trace* trace) {
  return guard([&] {
    require(ds, "dataset");
    require(out, "out");
    auto [set, tr] = extract_fiber_surface_tets(ds->data.mesh, ds->data.field, ds->jset, edge_of(e));
    fill_trace(tr, trace);
    *out = new fs_tetset{std::move(set)};
  });
}

fs_status fs_oracle_tets(const fs_dataset* ds, const fs_edge* e, fs_tetset** out) {
  return guard([&] {
    require(ds, "dataset");
    require(out, "out");
    *out = new fs_tetset{exhaustive_oracle(ds->data.mesh, ds->data.field, edge_of(e))};
  });
}

fs_status fs_component_tets(const fs_dataset* ds, const fs_edge* e, uint32_t jacobi_edge_id, fs_tetset** out,
                            fs_trace* trace) {
  return guard([&] {
    require(ds, "dataset");
    require(out, "out");
    auto [set, tr] = component_from_jacobi_edge(ds->data.mesh, ds->data.field, ds->jset, edge_of(e), jacobi_edge_id);
    fill_trace(tr, trace);
    *out = new fs_tetset{std::move(set)};
  });
}

size_t fs_tetset_size(const fs_tetset* s) { return s ? s->set.size() : 0; }
uint32_t fs_tetset_num_components(const fs_tetset* s) { return s ? s->set.num_components : 0; }
const uint32_t* fs_tetset_tets(const fs_tetset* s) { return s ? s->set.tets.data() : nullptr; }
const uint32_t* fs_tetset_labels(const fs_tetset* s) { return s ? s->set.labels.data() : nullptr; }
int fs_tetset_equal(const fs_tetset* a, const fs_tetset* b) { return a && b && a->set == b->set ? 1 : 0; }
void fs_tetset_free(fs_tetset* s) { delete s; }

fs_status fs_surface_extract(const fs_dataset* ds, const double* points, size_t n_points, int closed,
                             int use_jacobi_edge, uint32_t jacobi_edge_id, fs_surface** out) {
  return guard([&] {
    require(ds, "dataset");
    require(points, "points");
    require(out, "out");
    ControlPolygon poly;
    poly.closed = closed != 0;
    for (size_t i = 0; i < n_points; ++i) poly.points.push_back({points[2 * i], points[2 * i + 1]});
    const std::vector<ControlEdge> edges = poly.edges();
    auto s = std::make_unique<fs_surface>();
    if (use_jacobi_edge) {
      if (edges.size() != 1) {
        throw Error(ErrorCode::kInvalidArgument, "component extraction needs a single control edge");
      }
      s->result = extract_component(ds->data.mesh, ds->data.field, ds->jset, edges[0], jacobi_edge_id);
    } else {
      s->result = extract_fiber_surface(ds->data.mesh, ds->data.field, ds->jset, poly);
    }
    *out = s.release();
  });
}

size_t fs_surface_num_vertices(const fs_surface* s) { return s ? s->result.surface.num_vertices() : 0; }
size_t fs_surface_num_triangles(const fs_surface* s) { return s ? s->result.surface.num_triangles() : 0; }
const double* fs_surface_positions(const fs_surface* s) {
  return s ? reinterpret_cast<const double*>(s->result.surface.positions.data()) : nullptr;
}
const double* fs_surface_t(const fs_surface* s) { return s ? s->result.surface.t.data() : nullptr; }
const uint32_t* fs_surface_triangles(const fs_surface* s) {
  return s ? reinterpret_cast<const uint32_t*>(s->result.surface.triangles.data()) : nullptr;
}
const uint32_t* fs_surface_component_ids(const fs_surface* s) {
  return s ? s->result.surface.component_id.data() : nullptr;
}
const uint32_t* fs_surface_source_tets(const fs_surface* s) { return s ? s->result.surface.source_tet.data() : nullptr; }

uint64_t fs_surface_tet_count(const fs_surface* s) {
  uint64_t n = 0;
  if (s)
    for (const TetSet& t : s->result.tet_sets) n += t.size();
  return n;
}

size_t fs_surface_num_edges(const fs_surface* s) { return s ? s->result.traces.size() : 0; }

fs_status fs_surface_trace(const fs_surface* s, size_t edge_index, fs_trace* out) {
  return guard([&] {
    require(s, "surface");
    require(out, "out");
    if (edge_index >= s->result.traces.size()) throw Error(ErrorCode::kInvalidArgument, "edge index out of range");
    fill_trace(s->result.traces[edge_index], out);
  });
}

fs_status fs_surface_write_obj(const fs_surface* s, const char* path) {
  return guard([&] {
    require(s, "surface");
    write_file(path, [&](std::ostream& os) { write_obj(os, s->result.surface); });
  });
}

fs_status fs_surface_write_sidecar(const fs_surface* s, const char* path) {
  return guard([&] {
    require(s, "surface");
    write_file(path, [&](std::ostream& os) { write_sidecar(os, s->result.surface); });
  });
}

fs_status fs_surface_write_trace(const fs_surface* s, const char* path) {
  return guard([&] {
    require(s, "surface");
    write_file(path, [&](std::ostream& os) {
      for (std::size_t i = 0; i < s->result.traces.size(); ++i) os << trace_json(s->result.traces[i], i) << '\n';
    });
  });
}

void fs_surface_free(fs_surface* s) { delete s; }

fs_status fs_fiber_write_obj(const fs_dataset* ds, double a, double b, const char* path, size_t* n_segments) {
  return guard([&] {
    require(ds, "dataset");
    const FiberPolyline fiber = extract_fiber(ds->data.mesh, ds->data.field, {a, b});
    write_file(path, [&](std::ostream& os) { write_fiber_obj(os, fiber); });
    if (n_segments) *n_segments = fiber.segments.size();
  });
}

fs_status fs_density(const fs_dataset* ds, uint32_t width, uint32_t height, uint32_t samples_per_tet, uint64_t seed,
                     fs_raster** out) {
  return guard([&] {
    require(ds, "dataset");
    require(out, "out");
    *out = new fs_raster{density_raster(ds->data.mesh, ds->data.field, width, height, samples_per_tet, seed)};
  });
}

uint32_t fs_raster_width(const fs_raster* r) { return r ? r->raster.width : 0; }
uint32_t fs_raster_height(const fs_raster* r) { return r ? r->raster.height : 0; }
const double* fs_raster_cells(const fs_raster* r) { return r ? r->raster.cells.data() : nullptr; }
double fs_raster_total_mass(const fs_raster* r) { return r ? r->raster.total_mass() : 0.0; }

fs_status fs_raster_write_pgm(const fs_raster* r, const char* path) {
  return guard([&] {
    require(r, "raster");
    write_file(path, [&](std::ostream& os) { write_pgm(os, r->raster); });
  });
}

void fs_raster_free(fs_raster* r) { delete r; }

fs_status fs_serve(const char* host, int port, const char* datasets_dir, unsigned workers) {
  return guard([&] {
    require(host, "host");
    require(datasets_dir, "datasets_dir");
    Service service(ServiceOptions{host, port, datasets_dir, workers});
    service.run();
  });
}

fs_status fs_server_start(const char* host, int port, const char* datasets_dir, unsigned workers, fs_server** out) {
  return guard([&] {
    require(host, "host");
    require(datasets_dir, "datasets_dir");
    require(out, "out");
    auto s = std::make_unique<fs_server>();
    s->service = std::make_unique<Service>(ServiceOptions{host, port, datasets_dir, workers});
    s->service->start();
    *out = s.release();
  });
}

int fs_server_port(const fs_server* s) { return s ? s->service->port() : -1; }

void fs_server_stop(fs_server* s) {
  if (!s) return;
  s->service->stop();
  delete s;
}

}  // extern "C"
