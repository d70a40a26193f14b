// HTTP endpoints, driven through the C server API and a plain HTTP client.
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "fibersurf/fibersurf.h"

using nlohmann::json;

namespace {

class ServiceTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = std::filesystem::temp_directory_path() / "fibersurf_service";
    std::filesystem::create_directories(dir_ / "sub");
    ASSERT_EQ(fs_synth_write("distance", 16, 0, (dir_ / "distance.grid").c_str()), FS_OK);
    ASSERT_EQ(fs_synth_write("linear", 6, 0, (dir_ / "sub" / "linear.grid").c_str()), FS_OK);
    std::ofstream(dir_ / "broken.grid") << "3 3 3\nnot numbers\n";
    ASSERT_EQ(fs_server_start("127.0.0.1", 0, dir_.c_str(), 4, &server_), FS_OK) << fs_last_error();
    ASSERT_GT(fs_server_port(server_), 0);
  }
  static void TearDownTestSuite() {
    fs_server_stop(server_);
    server_ = nullptr;
  }

  static httplib::Client client() {
    httplib::Client c("127.0.0.1", fs_server_port(server_));
    c.set_read_timeout(120, 0);
    return c;
  }

  static json post(const std::string& path, const json& body, int expect) {
    auto res = client().Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << path << " " << res->body;
    return json::parse(res->body, nullptr, false);
  }

  static std::string open_session(const std::string& path) {
    return post("/sessions", {{"path", path}}, 201)["session_id"].get<std::string>();
  }

  static const std::string& distance_session() {
    static const std::string id = open_session("distance.grid");
    return id;
  }

  static inline std::filesystem::path dir_;
  static inline fs_server* server_ = nullptr;
};

const json kShellEdge = json::array({json::array({-0.1, 0.45}), json::array({-0.1, 0.55})});

}  // namespace

TEST_F(ServiceTest, CreateSession) {
  const json r = post("/sessions", {{"path", "distance.grid"}}, 201);
  EXPECT_EQ(r["n_vertices"], 16 * 16 * 16);
  EXPECT_EQ(r["n_tets"], 6 * 15 * 15 * 15);
  EXPECT_GT(r["n_jacobi_edges"].get<int>(), 0);
  const json rect = r["range_rect"];
  EXPECT_EQ(rect[0], -1.0);
  EXPECT_EQ(rect[2], 1.0);
  EXPECT_NE(r["session_id"], distance_session());
}

TEST_F(ServiceTest, SessionErrors) {
  post("/sessions", {{"path", "missing.grid"}}, 422);
  post("/sessions", {{"path", "broken.grid"}}, 422);
  post("/sessions", {{"path", "../outside.grid"}}, 400);
  post("/sessions", {{"path", "/etc/passwd"}}, 400);
  post("/sessions", {{"nopath", 1}}, 400);
  auto res = client().Post("/sessions", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_TRUE(json::parse(res->body).contains("error"));
  res = client().Get("/sessions/s999999/jacobi");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  post("/sessions/s999999/query", {{"edge", kShellEdge}}, 404);
}

TEST_F(ServiceTest, LinearFieldHasOnlyBoundaryFolds) {
  const std::string id = open_session("sub/linear.grid");
  auto res = client().Get("/sessions/" + id + "/jacobi");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const json list = json::parse(res->body);
  ASSERT_TRUE(list.is_array());
  for (const json& j : list) EXPECT_EQ(j["kind"], "boundary") << j.dump();
}

TEST_F(ServiceTest, JacobiListing) {
  auto res = client().Get("/sessions/" + distance_session() + "/jacobi");
  ASSERT_TRUE(res);
  const json list = json::parse(res->body);
  ASSERT_GT(list.size(), 0u);
  std::size_t interior = 0;
  for (const json& j : list) {
    ASSERT_EQ(j["image"].size(), 2u);
    ASSERT_EQ(j["domain"].size(), 2u);
    interior += j["kind"] != "boundary";
    // f1 = z, so the image's a-coordinate is the domain z.
    EXPECT_EQ(j["image"][0][0], j["domain"][0][2]);
  }
  EXPECT_GT(interior, 0u);
}

TEST_F(ServiceTest, QueryAndExtract) {
  const std::string base = "/sessions/" + distance_session();
  const json q = post(base + "/query", {{"edge", kShellEdge}}, 200);
  const json& hits = q["hits"];
  ASSERT_GT(hits.size(), 0u);
  EXPECT_EQ(q["trace"]["n_jacobi_intersections"], hits.size());
  // Hits lie on the infinite line through the edge.
  for (const json& h : hits) EXPECT_NEAR(h["point"][0].get<double>(), -0.1, 1e-12);

  const json full = post(base + "/extract", {{"edge", kShellEdge}}, 200);
  const std::size_t tets = full["tet_count"];
  EXPECT_GT(tets, 0u);
  EXPECT_EQ(full["trace"]["n_tets_fs"], tets);
  EXPECT_EQ(full["trace"]["n_jacobi_intersections"], hits.size());
  const json& mesh = full["mesh"];
  EXPECT_EQ(mesh["positions"].size() % 3, 0u);
  EXPECT_EQ(mesh["triangles"].size(), 3 * mesh["component_ids"].size());
  EXPECT_EQ(mesh["t"].size() * 3, mesh["positions"].size());

  for (const json& h : hits) {
    const json comp = post(base + "/extract", {{"edge", kShellEdge}, {"jacobi_edge_id", h["jacobi_edge_id"]}}, 200);
    EXPECT_LE(comp["tet_count"].get<std::size_t>(), tets);
    EXPECT_LE(comp["mesh"]["component_ids"].size(), mesh["component_ids"].size());
  }
  // Edge 0 is never crossed by this line.
  post(base + "/extract", {{"edge", kShellEdge}, {"jacobi_edge_id", 0}}, 409);
  post(base + "/extract", {{"edge", kShellEdge}, {"jacobi_edge_id", "x"}}, 400);
  post(base + "/extract", {{"edge", json::array({json::array({0, 0})})}}, 400);
  post(base + "/extract", {{"edge", json::array({json::array({0, 0}), json::array({0, 0})})}}, 400);
}

TEST_F(ServiceTest, BinaryExtract) {
  auto res = client().Post("/sessions/" + distance_session() + "/extract", {{"Accept", "application/octet-stream"}},
                           json{{"edge", kShellEdge}}.dump(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const std::string& b = res->body;
  ASSERT_GE(b.size(), 16u);
  EXPECT_EQ(b.substr(0, 4), "FSMB");
  auto u32 = [&](std::size_t off) {
    std::uint32_t x = 0;
    for (int i = 3; i >= 0; --i) x = (x << 8) | static_cast<unsigned char>(b[off + i]);
    return x;
  };
  const std::uint32_t nv = u32(4), nt = u32(8);
  EXPECT_EQ(std::to_string(u32(12)), res->get_header_value("X-Tet-Count"));
  EXPECT_EQ(b.size(), 16u + 32u * nv + 16u * nt);
}

TEST_F(ServiceTest, ExtractIsDeterministicUnderConcurrency) {
  const std::string path = "/sessions/" + distance_session() + "/extract";
  const json body{{"edge", json::array({json::array({-0.6, 0.7}), json::array({0.6, 0.75})})}};
  const json ref = post(path, body, 200)["mesh"];
  std::vector<json> got(4);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < got.size(); ++i)
    threads.emplace_back([&, i] {
      auto res = client().Post(path, body.dump(), "application/json");
      if (res && res->status == 200) got[i] = json::parse(res->body)["mesh"];
    });
  for (auto& t : threads) t.join();
  for (const json& g : got) EXPECT_EQ(g, ref);
}

TEST_F(ServiceTest, Density) {
  const std::string base = "/sessions/" + distance_session() + "/density";
  auto res = client().Get(base + "?w=16&h=8");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const json d = json::parse(res->body);
  EXPECT_EQ(d["width"], 16);
  EXPECT_EQ(d["height"], 8);
  ASSERT_EQ(d["pixels"].size(), 128u);
  int peak = 0;
  for (const json& p : d["pixels"]) peak = std::max(peak, p.get<int>());
  EXPECT_EQ(peak, 65535);
  EXPECT_GT(d["max_density"].get<double>(), 0.0);

  // Cached raster gives the same answer.
  auto again = client().Get(base + "?w=16&h=8");
  ASSERT_TRUE(again);
  EXPECT_EQ(again->body, res->body);

  for (const char* bad : {"?w=0", "?w=abc", "?h=5000", "?w=3x"}) {
    auto r = client().Get(base + bad);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 400) << bad;
  }
  auto pgm = client().Get(base + "?w=4&h=4", {{"Accept", "application/octet-stream"}});
  ASSERT_TRUE(pgm);
  EXPECT_EQ(pgm->body.rfind("P5\n", 0), 0u);
}
