/* C interface to the fiber-surface engine. Handles are opaque; every call
 * returns an fs_status and, on failure, leaves a message for fs_last_error()
 * on the calling thread. */
#ifndef FIBERSURF_H
#define FIBERSURF_H

#include <stddef.h>
#include <stdint.h>

#if defined(FIBERSURF_BUILDING)
#define FS_API __attribute__((visibility("default")))
#else
#define FS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fs_status {
  FS_OK = 0,
  FS_ERR_IO = 1,
  FS_ERR_PARSE = 2,
  FS_ERR_INVALID_MESH = 3,
  FS_ERR_NON_MANIFOLD = 4,
  FS_ERR_INVALID_ARGUMENT = 5,
  FS_ERR_NOT_FOUND = 6,
  FS_ERR_NOT_A_HIT = 7,
  FS_ERR_INTERNAL = 8
} fs_status;

typedef struct fs_dataset fs_dataset;
typedef struct fs_tetset fs_tetset;
typedef struct fs_surface fs_surface;
typedef struct fs_raster fs_raster;
typedef struct fs_server fs_server;

typedef struct fs_dataset_info {
  uint64_t n_vertices;
  uint64_t n_tets;
  uint64_t n_edges;
  uint64_t n_jacobi_edges;
  uint64_t n_extremum;
  uint64_t n_saddle;
  uint64_t n_boundary_folds;
  double range_rect[4]; /* a_min b_min a_max b_max */
} fs_dataset_info;

typedef struct fs_trace {
  uint64_t n_jacobi_intersections;
  uint64_t directed_searches;
  uint64_t directed_visited;
  uint64_t dead_ends;
  uint64_t seeds_found;
  uint64_t seeds_discarded;
  uint64_t restricted_visited;
  uint64_t enqueued;
  uint64_t n_tets_fs;
  double jacobi_intersections_ms;
  double directed_search_ms;
  double restricted_bfs_ms;
} fs_trace;

/* Control edge as {u.a, u.b, v.a, v.b}. */
typedef struct fs_edge {
  double u[2];
  double v[2];
} fs_edge;

FS_API const char* fs_last_error(void);
FS_API const char* fs_version(void);
/* 0 restores the hardware default. */
FS_API fs_status fs_set_threads(unsigned n);

/* Explicit mesh or structured grid, chosen by the header line. The Jacobi set
 * is computed on load. */
FS_API fs_status fs_dataset_load(const char* path, fs_dataset** out);
/* kind: "distance", "linear" or "random". */
FS_API fs_status fs_dataset_synth(const char* kind, unsigned n, uint64_t seed, fs_dataset** out);
FS_API void fs_dataset_free(fs_dataset* ds);
FS_API fs_status fs_dataset_info_get(const fs_dataset* ds, fs_dataset_info* out);
FS_API fs_status fs_jacobi_write(const fs_dataset* ds, const char* path);
/* Writes a synthetic structured-grid file. */
FS_API fs_status fs_synth_write(const char* kind, unsigned n, uint64_t seed, const char* path);

/* Jacobi-driven search for one control edge. trace may be NULL. */
FS_API fs_status fs_extract_tets(const fs_dataset* ds, const fs_edge* e, fs_tetset** out, fs_trace* trace);
FS_API fs_status fs_oracle_tets(const fs_dataset* ds, const fs_edge* e, fs_tetset** out);
/* Single component from one intersected Jacobi edge; FS_ERR_NOT_A_HIT when
 * the edge is not crossed by the control line. */
FS_API fs_status fs_component_tets(const fs_dataset* ds, const fs_edge* e, uint32_t jacobi_edge_id,
                                   fs_tetset** out, fs_trace* trace);
FS_API size_t fs_tetset_size(const fs_tetset* s);
FS_API uint32_t fs_tetset_num_components(const fs_tetset* s);
FS_API const uint32_t* fs_tetset_tets(const fs_tetset* s);
FS_API const uint32_t* fs_tetset_labels(const fs_tetset* s);
/* 1 when members and component partition are equal. */
FS_API int fs_tetset_equal(const fs_tetset* a, const fs_tetset* b);
FS_API void fs_tetset_free(fs_tetset* s);

/* Surface for a control polygon given as n_points (a, b) pairs. With
 * use_jacobi_edge the polygon must be a single edge and only the component
 * reached from jacobi_edge_id is extracted. */
FS_API fs_status fs_surface_extract(const fs_dataset* ds, const double* points, size_t n_points, int closed,
                                    int use_jacobi_edge, uint32_t jacobi_edge_id, fs_surface** out);
FS_API size_t fs_surface_num_vertices(const fs_surface* s);
FS_API size_t fs_surface_num_triangles(const fs_surface* s);
FS_API const double* fs_surface_positions(const fs_surface* s);       /* 3 per vertex */
FS_API const double* fs_surface_t(const fs_surface* s);               /* 1 per vertex */
FS_API const uint32_t* fs_surface_triangles(const fs_surface* s);     /* 3 per triangle */
FS_API const uint32_t* fs_surface_component_ids(const fs_surface* s); /* 1 per triangle */
FS_API const uint32_t* fs_surface_source_tets(const fs_surface* s);   /* 1 per triangle */
/* Tets summed over control edges. */
FS_API uint64_t fs_surface_tet_count(const fs_surface* s);
FS_API size_t fs_surface_num_edges(const fs_surface* s);
FS_API fs_status fs_surface_trace(const fs_surface* s, size_t edge_index, fs_trace* out);
FS_API fs_status fs_surface_write_obj(const fs_surface* s, const char* path);
FS_API fs_status fs_surface_write_sidecar(const fs_surface* s, const char* path);
/* One JSON object per control edge, one per line. */
FS_API fs_status fs_surface_write_trace(const fs_surface* s, const char* path);
FS_API void fs_surface_free(fs_surface* s);

/* Fiber polyline of one range point, written as OBJ lines. */
FS_API fs_status fs_fiber_write_obj(const fs_dataset* ds, double a, double b, const char* path, size_t* n_segments);

FS_API fs_status fs_density(const fs_dataset* ds, uint32_t width, uint32_t height, uint32_t samples_per_tet,
                            uint64_t seed, fs_raster** out);
FS_API uint32_t fs_raster_width(const fs_raster* r);
FS_API uint32_t fs_raster_height(const fs_raster* r);
FS_API const double* fs_raster_cells(const fs_raster* r); /* row-major, row 0 at b_min */
FS_API double fs_raster_total_mass(const fs_raster* r);
FS_API fs_status fs_raster_write_pgm(const fs_raster* r, const char* path);
FS_API void fs_raster_free(fs_raster* r);

/* Blocking server. */
FS_API fs_status fs_serve(const char* host, int port, const char* datasets_dir, unsigned workers);
/* Background server; port 0 picks a free port. */
FS_API fs_status fs_server_start(const char* host, int port, const char* datasets_dir, unsigned workers,
                                 fs_server** out);
FS_API int fs_server_port(const fs_server* s);
FS_API void fs_server_stop(fs_server* s);

#ifdef __cplusplus
}
#endif

#endif
