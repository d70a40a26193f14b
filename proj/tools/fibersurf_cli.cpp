// fibersurf command-line front end. Links only the C interface.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fibersurf/fibersurf.h"

namespace {

enum Exit { kOk = 0, kMismatch = 1, kIoError = 2, kBadArgs = 3 };

struct Failure {
  int code;
  std::string message;
};

int exit_for(fs_status s) {
  switch (s) {
    case FS_OK:
      return kOk;
    case FS_ERR_INVALID_ARGUMENT:
    case FS_ERR_NOT_A_HIT:
      return kBadArgs;
    default:
      return kIoError;
  }
}

void check(fs_status s) {
  if (s != FS_OK) throw Failure{exit_for(s), fs_last_error()};
}

struct DatasetDeleter {
  void operator()(fs_dataset* d) const { fs_dataset_free(d); }
};
struct TetsetDeleter {
  void operator()(fs_tetset* t) const { fs_tetset_free(t); }
};
struct SurfaceDeleter {
  void operator()(fs_surface* s) const { fs_surface_free(s); }
};
struct RasterDeleter {
  void operator()(fs_raster* r) const { fs_raster_free(r); }
};
using DatasetPtr = std::unique_ptr<fs_dataset, DatasetDeleter>;
using TetsetPtr = std::unique_ptr<fs_tetset, TetsetDeleter>;
using SurfacePtr = std::unique_ptr<fs_surface, SurfaceDeleter>;
using RasterPtr = std::unique_ptr<fs_raster, RasterDeleter>;

struct Options {
  std::string dataset;
  std::string out;
  std::string polygon;
  std::string polygon_file;
  bool closed = false;
  long long jacobi_edge = -1;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  std::string trace_out;
  std::string sidecar;

  std::string kind = "distance";
  unsigned n = 32;
  unsigned width = 256, height = 256, samples = 8;
  int random_edges = 0;
  bool inject_mismatch = false;

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string datasets_dir = ".";
  unsigned workers = 4;
};

// "a1,b1 a2,b2 ..." into a flat (a, b) list.
std::vector<double> parse_points(const std::string& text) {
  std::string s = text;
  for (char& c : s)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream in(s);
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  if (!in.eof() || out.size() % 2 != 0) throw Failure{kBadArgs, "malformed polygon '" + text + "'"};
  return out;
}

std::vector<double> read_polygon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kIoError, "cannot open " + path};
  std::string line, all;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    all += line + ' ';
  }
  return parse_points(all);
}

std::vector<double> polygon_points(const Options& o) {
  if (o.polygon.empty() == o.polygon_file.empty()) throw Failure{kBadArgs, "give exactly one of --polygon, --polygon-file"};
  std::vector<double> pts = o.polygon.empty() ? read_polygon_file(o.polygon_file) : parse_points(o.polygon);
  if (pts.size() < 4) throw Failure{kBadArgs, "a polygon needs at least two points"};
  return pts;
}

std::vector<fs_edge> polygon_edges(const std::vector<double>& pts, bool closed) {
  std::vector<fs_edge> edges;
  const std::size_t n = pts.size() / 2;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({{pts[2 * i], pts[2 * i + 1]}, {pts[2 * i + 2], pts[2 * i + 3]}});
  if (closed && n > 2) edges.push_back({{pts[2 * n - 2], pts[2 * n - 1]}, {pts[0], pts[1]}});
  return edges;
}

DatasetPtr load(const Options& o) {
  if (o.dataset.empty()) throw Failure{kBadArgs, "--dataset is required"};
  fs_dataset* ds = nullptr;
  check(fs_dataset_load(o.dataset.c_str(), &ds));
  return DatasetPtr(ds);
}

std::string trace_line(const fs_trace& t, std::size_t edge) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "{\"control_edge\":%zu,\"jacobi_intersections_ms\":%.6g,\"directed_search_ms\":%.6g,"
                "\"restricted_bfs_ms\":%.6g,\"n_jacobi_intersections\":%llu,\"n_tets_fs\":%llu,"
                "\"directed_searches\":%llu,\"directed_visited\":%llu,\"dead_ends\":%llu,\"seeds_found\":%llu,"
                "\"seeds_discarded\":%llu,\"restricted_visited\":%llu,\"enqueued\":%llu}",
                edge, t.jacobi_intersections_ms, t.directed_search_ms, t.restricted_bfs_ms,
                static_cast<unsigned long long>(t.n_jacobi_intersections),
                static_cast<unsigned long long>(t.n_tets_fs), static_cast<unsigned long long>(t.directed_searches),
                static_cast<unsigned long long>(t.directed_visited), static_cast<unsigned long long>(t.dead_ends),
                static_cast<unsigned long long>(t.seeds_found), static_cast<unsigned long long>(t.seeds_discarded),
                static_cast<unsigned long long>(t.restricted_visited), static_cast<unsigned long long>(t.enqueued));
  return buf;
}

int cmd_jacobi(const Options& o) {
  DatasetPtr ds = load(o);
  fs_dataset_info info{};
  check(fs_dataset_info_get(ds.get(), &info));
  if (!o.out.empty()) check(fs_jacobi_write(ds.get(), o.out.c_str()));
  std::cout << info.n_extremum << " extremum, " << info.n_saddle << " saddle, " << info.n_boundary_folds
            << " boundary folds\n";
  return kOk;
}

int cmd_extract(const Options& o) {
  const std::vector<double> pts = polygon_points(o);
  if (o.out.empty()) throw Failure{kBadArgs, "--out is required"};
  DatasetPtr ds = load(o);
  const bool component = o.jacobi_edge >= 0;
  if (component && pts.size() != 4) throw Failure{kBadArgs, "--jacobi-edge needs a single-edge polygon"};
  fs_surface* raw = nullptr;
  check(fs_surface_extract(ds.get(), pts.data(), pts.size() / 2, o.closed ? 1 : 0, component ? 1 : 0,
                           component ? static_cast<std::uint32_t>(o.jacobi_edge) : 0, &raw));
  SurfacePtr surface(raw);
  check(fs_surface_write_obj(surface.get(), o.out.c_str()));
  if (!o.sidecar.empty()) check(fs_surface_write_sidecar(surface.get(), o.sidecar.c_str()));
  if (!o.trace_out.empty()) check(fs_surface_write_trace(surface.get(), o.trace_out.c_str()));
  std::cout << fs_surface_num_triangles(surface.get()) << " triangles, " << fs_surface_num_vertices(surface.get())
            << " vertices, " << fs_surface_tet_count(surface.get()) << " tets\n";
  return kOk;
}

int cmd_validate(const Options& o) {
  DatasetPtr ds = load(o);
  std::vector<fs_edge> edges;
  if (o.random_edges > 0) {
    if (!o.polygon.empty() || !o.polygon_file.empty())
      throw Failure{kBadArgs, "--random-edges excludes --polygon and --polygon-file"};
    fs_dataset_info info{};
    check(fs_dataset_info_get(ds.get(), &info));
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> ua(info.range_rect[0], info.range_rect[2]);
    std::uniform_real_distribution<double> ub(info.range_rect[1], info.range_rect[3]);
    while (static_cast<int>(edges.size()) < o.random_edges) {
      fs_edge e{{ua(rng), ub(rng)}, {ua(rng), ub(rng)}};
      if (e.u[0] != e.v[0] || e.u[1] != e.v[1]) edges.push_back(e);
    }
  } else {
    edges = polygon_edges(polygon_points(o), o.closed);
  }

  std::ofstream trace;
  if (!o.trace_out.empty()) {
    trace.open(o.trace_out);
    if (!trace) throw Failure{kIoError, "cannot write " + o.trace_out};
  }
  bool all_equal = true;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    fs_tetset *found_raw = nullptr, *oracle_raw = nullptr;
    fs_trace tr{};
    check(fs_extract_tets(ds.get(), &edges[i], &found_raw, &tr));
    TetsetPtr found(found_raw);
    check(fs_oracle_tets(ds.get(), &edges[i], &oracle_raw));
    TetsetPtr oracle(oracle_raw);
    bool equal = fs_tetset_equal(found.get(), oracle.get()) != 0;
    if (o.inject_mismatch && i == 0) equal = false;
    all_equal = all_equal && equal;
    std::cout << "edge " << i << ": " << fs_tetset_size(found.get()) << (equal ? " = " : " != ")
              << fs_tetset_size(oracle.get()) << " (components " << fs_tetset_num_components(found.get()) << "/"
              << fs_tetset_num_components(oracle.get()) << ")" << (equal ? "" : " MISMATCH") << '\n';
    if (trace) trace << trace_line(tr, i) << '\n';
  }
  std::cout << (all_equal ? "validated" : "mismatch") << '\n';
  return all_equal ? kOk : kMismatch;
}

int cmd_synth(const Options& o) {
  if (o.out.empty()) throw Failure{kBadArgs, "--out is required"};
  check(fs_synth_write(o.kind.c_str(), o.n, o.seed, o.out.c_str()));
  return kOk;
}

int cmd_density(const Options& o) {
  if (o.out.empty()) throw Failure{kBadArgs, "--out is required"};
  DatasetPtr ds = load(o);
  fs_raster* raw = nullptr;
  check(fs_density(ds.get(), o.width, o.height, o.samples, o.seed, &raw));
  RasterPtr raster(raw);
  check(fs_raster_write_pgm(raster.get(), o.out.c_str()));
  std::printf("total mass %.9g\n", fs_raster_total_mass(raster.get()));
  return kOk;
}

int cmd_serve(const Options& o) {
  std::cout << "serving " << o.datasets_dir << " on " << o.host << ":" << o.port << std::endl;
  check(fs_serve(o.host.c_str(), o.port, o.datasets_dir.c_str(), o.workers));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fiber-surface extraction driven by Jacobi sets"};
  app.require_subcommand(1);
  Options o;

  auto add_dataset = [&](CLI::App* c) { c->add_option("--dataset", o.dataset, "Mesh or grid file")->required(); };
  auto add_polygon = [&](CLI::App* c) {
    c->add_option("--polygon", o.polygon, "Control polygon \"a1,b1 a2,b2 ...\"");
    c->add_option("--polygon-file", o.polygon_file, "Control polygon, two columns per line");
    c->add_flag("--closed", o.closed, "Connect the last point to the first");
  };
  auto add_common = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "Worker thread cap (0 = all cores)");
    c->add_option("--seed", o.seed, "Random seed");
  };

  CLI::App* jacobi = app.add_subcommand("jacobi", "Compute and export the Jacobi set");
  add_dataset(jacobi);
  add_common(jacobi);
  jacobi->add_option("--out", o.out, "Jacobi edge list");

  CLI::App* extract = app.add_subcommand("extract", "Extract a fiber surface as OBJ");
  add_dataset(extract);
  add_polygon(extract);
  add_common(extract);
  extract->add_option("--out", o.out, "OBJ output")->required();
  extract->add_option("--jacobi-edge", o.jacobi_edge, "Extract only the component reached from this Jacobi edge");
  extract->add_option("--trace-out", o.trace_out, "Per-edge timing and counters (JSON lines)");
  extract->add_option("--sidecar", o.sidecar, "Binary per-vertex t and per-triangle source tet");

  CLI::App* validate = app.add_subcommand("validate", "Compare the search against the exhaustive oracle");
  add_dataset(validate);
  add_polygon(validate);
  add_common(validate);
  validate->add_option("--random-edges", o.random_edges, "Validate N random edges inside the range rectangle");
  validate->add_option("--trace-out", o.trace_out, "Per-edge timing and counters (JSON lines)");
  validate->add_flag("--inject-mismatch", o.inject_mismatch, "Test hook: report the first edge as a mismatch");

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic structured grid");
  synth->add_option("--kind", o.kind, "distance | linear | random")
      ->check(CLI::IsMember({"distance", "linear", "random"}));
  synth->add_option("--n", o.n, "Grid points per axis")->check(CLI::Range(2u, 1024u));
  synth->add_option("--out", o.out, "Output file")->required();
  add_common(synth);

  CLI::App* density = app.add_subcommand("density", "Write the density raster as 16-bit PGM");
  add_dataset(density);
  add_common(density);
  density->add_option("--out", o.out, "PGM output")->required();
  density->add_option("--width", o.width, "Pixels along f1")->check(CLI::Range(1u, 16384u));
  density->add_option("--height", o.height, "Pixels along f2")->check(CLI::Range(1u, 16384u));
  density->add_option("--samples", o.samples, "Samples per tet")->check(CLI::Range(1u, 1u << 20));

  CLI::App* serve = app.add_subcommand("serve", "Run the HTTP exploration service");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--port", o.port, "Port")->check(CLI::Range(0, 65535));
  serve->add_option("--datasets-dir", o.datasets_dir, "Directory that session paths are resolved in");
  serve->add_option("--workers", o.workers, "Request worker threads")->check(CLI::Range(1u, 256u));
  add_common(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadArgs;
  }

  try {
    check(fs_set_threads(o.threads));
    if (jacobi->parsed()) return cmd_jacobi(o);
    if (extract->parsed()) return cmd_extract(o);
    if (validate->parsed()) return cmd_validate(o);
    if (synth->parsed()) return cmd_synth(o);
    if (density->parsed()) return cmd_density(o);
    if (serve->parsed()) return cmd_serve(o);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  }
  return kBadArgs;
}
