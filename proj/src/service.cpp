#include "fibersurf/service.hpp"

#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "fibersurf/fiber.hpp"
#include "fibersurf/io.hpp"
#include "fibersurf/jacobi.hpp"
#include "fibersurf/scatter.hpp"
#include "fibersurf/search.hpp"

namespace fibersurf {

namespace {

using nlohmann::json;

constexpr std::uint32_t kMaxRaster = 4096;
constexpr std::uint32_t kDensitySamples = 8;

struct Session {
  std::string id;
  Dataset data;
  JacobiSet jset;
  RangeRect rect;
  std::chrono::system_clock::time_point created;

  mutable std::mutex density_mutex;
  mutable std::map<std::pair<std::uint32_t, std::uint32_t>, std::shared_ptr<const DensityRaster>> density;
};

struct HttpError {
  int status;
  std::string message;
};

json point_json(RangePoint p) { return json::array({p.a, p.b}); }
json vec_json(const Vec3& p) { return json::array({p.x, p.y, p.z}); }
json rect_json(const RangeRect& r) { return json::array({r.a_min, r.b_min, r.a_max, r.b_max}); }

json trace_to_json(const SearchTrace& t) { return json::parse(trace_json(t, 0)); }

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw HttpError{400, "request body must be a JSON object"};
  return body;
}

RangePoint parse_point(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw HttpError{400, "a point must be [a, b]"};
  return {j[0].get<double>(), j[1].get<double>()};
}

ControlEdge parse_edge(const json& body) {
  if (!body.contains("edge")) throw HttpError{400, "missing 'edge'"};
  const json& e = body["edge"];
  if (!e.is_array() || e.size() != 2) throw HttpError{400, "'edge' must be [[a, b], [a, b]]"};
  try {
    return ControlEdge(parse_point(e[0]), parse_point(e[1]));
  } catch (const Error& err) {
    throw HttpError{400, err.what()};
  }
}

bool wants_binary(const httplib::Request& req) {
  return req.get_header_value("Accept").find("application/octet-stream") != std::string::npos;
}

void put_u32(std::string& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  put_u32(out, static_cast<std::uint32_t>(bits));
  put_u32(out, static_cast<std::uint32_t>(bits >> 32));
}

// Little-endian: "FSMB", u32 n_vertices, u32 n_triangles, u32 tet_count,
// f64 positions[3 nv], f64 t[nv], u32 triangles[3 nt], u32 component_ids[nt].
std::string surface_binary(const FiberSurfaceMesh& m, std::size_t tet_count) {
  std::string out = "FSMB";
  put_u32(out, static_cast<std::uint32_t>(m.num_vertices()));
  put_u32(out, static_cast<std::uint32_t>(m.num_triangles()));
  put_u32(out, static_cast<std::uint32_t>(tet_count));
  for (const Vec3& p : m.positions) {
    put_f64(out, p.x);
    put_f64(out, p.y);
    put_f64(out, p.z);
  }
  for (double t : m.t) put_f64(out, t);
  for (const auto& tri : m.triangles)
    for (std::uint32_t i : tri) put_u32(out, i);
  for (std::uint32_t c : m.component_id) put_u32(out, c);
  return out;
}

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  std::filesystem::path root;
  httplib::Server server;
  std::thread thread;
  std::atomic<std::uint64_t> next_id{1};

  std::shared_mutex sessions_mutex;
  std::map<std::string, std::shared_ptr<const Session>> sessions;

  explicit Impl(ServiceOptions opts) : options(std::move(opts)) {
    std::error_code ec;
    root = std::filesystem::weakly_canonical(options.datasets_dir, ec);
    if (ec) root = std::filesystem::absolute(options.datasets_dir);
    const unsigned workers = std::max(1u, options.workers);
    server.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
    routes();
  }

  std::shared_ptr<const Session> session(const std::string& id) {
    std::shared_lock lock(sessions_mutex);
    auto it = sessions.find(id);
    if (it == sessions.end()) throw HttpError{404, "unknown session '" + id + "'"};
    return it->second;
  }

  std::filesystem::path resolve(const std::string& rel) const {
    const std::filesystem::path p(rel);
    if (rel.empty() || p.is_absolute()) throw HttpError{400, "path must be relative to the datasets directory"};
    const std::filesystem::path full = std::filesystem::weakly_canonical(root / p);
    const auto [r_end, f_it] = std::mismatch(root.begin(), root.end(), full.begin(), full.end());
    if (r_end != root.end()) throw HttpError{400, "path escapes the datasets directory"};
    return full;
  }

  template <class F>
  httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const HttpError& e) {
        res.status = e.status;
        res.set_content(json{{"error", e.message}}.dump(), "application/json");
      } catch (const Error& e) {
        res.status = e.code() == ErrorCode::kNotAHit ? 409 : 400;
        res.set_content(json{{"error", e.what()}}.dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(json{{"error", e.what()}}.dump(), "application/json");
      }
    };
  }

  void routes() {
    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      if (!body.contains("path") || !body["path"].is_string()) throw HttpError{400, "missing string 'path'"};
      const std::filesystem::path path = resolve(body["path"].get<std::string>());
      auto s = std::make_shared<Session>();
      try {
        s->data = load_dataset(path);
      } catch (const Error& e) {
        throw HttpError{422, e.what()};
      }
      s->jset = compute_jacobi_set(s->data.mesh, s->data.field);
      s->rect = range_rect(s->data.field);
      s->created = std::chrono::system_clock::now();
      s->id = "s" + std::to_string(next_id.fetch_add(1));
      json out{{"session_id", s->id},
               {"n_vertices", s->data.mesh.num_vertices()},
               {"n_tets", s->data.mesh.num_tets()},
               {"n_jacobi_edges", s->jset.size()},
               {"n_boundary_folds", s->jset.folds.size()},
               {"range_rect", rect_json(s->rect)}};
      {
        std::unique_lock lock(sessions_mutex);
        sessions.emplace(s->id, std::move(s));
      }
      res.status = 201;
      res.set_content(out.dump(), "application/json");
    }));

    server.Get(R"(/sessions/([^/]+)/jacobi)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto s = session(req.matches[1]);
      json out = json::array();
      for (const JacobiEdge* jp : s->jset.seeds()) {
        const JacobiEdge& j = *jp;
        const Edge& e = s->data.mesh.edge(j.edge_id);
        out.push_back({{"edge_id", j.edge_id},
                       {"kind", to_string(j.kind)},
                       {"image", json::array({point_json(j.image_lo), point_json(j.image_hi)})},
                       {"domain", json::array({vec_json(s->data.mesh.position(e.lo)),
                                               vec_json(s->data.mesh.position(e.hi))})}});
      }
      res.set_content(out.dump(), "application/json");
    }));

    server.Get(R"(/sessions/([^/]+)/density)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto s = session(req.matches[1]);
      auto dim = [&](const char* key) -> std::uint32_t {
        if (!req.has_param(key)) return 256;
        const std::string v = req.get_param_value(key);
        std::uint32_t n = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
        if (ec != std::errc() || ptr != v.data() + v.size() || n == 0 || n > kMaxRaster)
          throw HttpError{400, std::string("'") + key + "' must be an integer in [1, 4096]"};
        return n;
      };
      const std::uint32_t w = dim("w"), h = dim("h");
      std::shared_ptr<const DensityRaster> raster;
      {
        std::lock_guard lock(s->density_mutex);
        auto& slot = s->density[{w, h}];
        if (!slot) slot = std::make_shared<const DensityRaster>(
                       density_raster(s->data.mesh, s->data.field, w, h, kDensitySamples, 0));
        raster = slot;
      }
      if (wants_binary(req)) {
        std::ostringstream os;
        write_pgm(os, *raster);
        res.set_content(os.str(), "application/octet-stream");
        return;
      }
      const double peak = raster->max_density();
      json pixels = json::array();
      for (double c : raster->cells)
        pixels.push_back(peak > 0 ? static_cast<std::uint16_t>(std::lround(c / peak * 65535.0)) : 0);
      json out{{"width", w},
               {"height", h},
               {"range_rect", rect_json(raster->rect)},
               {"max_density", peak},
               {"pixels", std::move(pixels)}};
      res.set_content(out.dump(), "application/json");
    }));

    server.Post(R"(/sessions/([^/]+)/query)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto s = session(req.matches[1]);
      const ControlEdge e = parse_edge(parse_body(req));
      const auto t0 = std::chrono::steady_clock::now();
      const std::vector<IntersectionHit> hits = jacobi_intersections(s->jset, e);
      SearchTrace trace;
      trace.n_jacobi_intersections = hits.size();
      trace.jacobi_intersections_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      json jh = json::array();
      for (const IntersectionHit& h : hits) {
        const JacobiEdge* j = s->jset.find(h.jacobi_edge_id);
        const Edge& ed = s->data.mesh.edge(h.jacobi_edge_id);
        jh.push_back({{"jacobi_edge_id", h.jacobi_edge_id},
                      {"kind", to_string(h.kind)},
                      {"point", point_json(h.point)},
                      {"image", json::array({point_json(j->image_lo), point_json(j->image_hi)})},
                      {"domain", json::array({vec_json(s->data.mesh.position(ed.lo)),
                                              vec_json(s->data.mesh.position(ed.hi))})}});
      }
      json out{{"hits", std::move(jh)},
               {"trace",
                {{"n_jacobi_intersections", trace.n_jacobi_intersections},
                 {"jacobi_intersections_ms", trace.jacobi_intersections_ms}}}};
      res.set_content(out.dump(), "application/json");
    }));

    server.Post(R"(/sessions/([^/]+)/extract)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto s = session(req.matches[1]);
      const json body = parse_body(req);
      const ControlEdge e = parse_edge(body);
      FiberSurfaceResult r;
      if (body.contains("jacobi_edge_id") && !body["jacobi_edge_id"].is_null()) {
        if (!body["jacobi_edge_id"].is_number_unsigned()) throw HttpError{400, "'jacobi_edge_id' must be an edge id"};
        r = extract_component(s->data.mesh, s->data.field, s->jset, e, body["jacobi_edge_id"].get<EdgeId>());
      } else {
        r = extract_fiber_surface(s->data.mesh, s->data.field, s->jset, ControlPolygon{{e.u(), e.v()}, false});
      }
      const std::size_t tet_count = r.tet_sets.front().size();
      if (wants_binary(req)) {
        res.set_header("X-Tet-Count", std::to_string(tet_count));
        res.set_content(surface_binary(r.surface, tet_count), "application/octet-stream");
        return;
      }
      const FiberSurfaceMesh& m = r.surface;
      json positions = json::array(), triangles = json::array();
      for (const Vec3& p : m.positions) {
        positions.push_back(p.x);
        positions.push_back(p.y);
        positions.push_back(p.z);
      }
      for (const auto& tri : m.triangles)
        for (std::uint32_t i : tri) triangles.push_back(i);
      json out{{"mesh",
                {{"positions", std::move(positions)},
                 {"triangles", std::move(triangles)},
                 {"component_ids", m.component_id},
                 {"t", m.t}}},
               {"tet_count", tet_count},
               {"trace", trace_to_json(r.traces.front())}};
      res.set_content(out.dump(), "application/json");
    }));
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() { stop(); }

int Service::start() {
  int port = impl_->options.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(impl_->options.host);
  } else if (!impl_->server.bind_to_port(impl_->options.host, port)) {
    port = -1;
  }
  if (port < 0) throw Error(ErrorCode::kIo, "cannot bind " + impl_->options.host);
  impl_->options.port = port;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::run() {
  if (!impl_->server.listen(impl_->options.host, impl_->options.port))
    throw Error(ErrorCode::kIo, "cannot listen on " + impl_->options.host + ":" + std::to_string(impl_->options.port));
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int Service::port() const { return impl_->options.port; }

}  // namespace fibersurf
