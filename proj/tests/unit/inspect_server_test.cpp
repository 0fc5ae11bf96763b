#include <gtest/gtest.h>

#include <random>
#include <set>
#include <thread>

#include "../support/temp_dir.hpp"
#include "inspath/error.hpp"
#include "inspath/inspect_server.hpp"
#include "inspath/io.hpp"
#include "inspath/pipeline.hpp"
#include "inspath/synth.hpp"
#include "json.hpp"

// After Eigen: resolv.h, pulled in by httplib, defines a _res macro.
#include "httplib.h"

namespace inspath {
namespace {

using nlohmann::json;
using testing::TempDir;

/// Two-blob checkpoint runs shared by every test; each test copies what it
/// mutates.
class ServerTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        root_ = new TempDir();
        SceneFile f = builtin_scene("two_blobs");
        PipelineConfig c;
        c.s = 3;
        c.cluster_selection = {SelectionPolicy::kInteractive, {}};
        SyntheticFrameSource src(f.scene, f.camera, {}, 11);
        run(src, c, (*root_) / "checkpoint");

        c.cluster_selection = {SelectionPolicy::kIds, {}};
        SyntheticFrameSource src2(f.scene, f.camera, {}, 11);
        try {
            run(src2, c, (*root_) / "failed");
        } catch (const Error&) {
        }
    }
    static void TearDownTestSuite() {
        delete root_;
        root_ = nullptr;
    }

    /// Fresh copy of a fixture run under this test's temp dir.
    std::filesystem::path copy_run(const std::string& name) {
        const auto dst = dir_ / name;
        std::filesystem::copy((*root_) / name, dst, std::filesystem::copy_options::recursive);
        return dst;
    }

    static TempDir* root_;
    TempDir dir_;
};

TempDir* ServerTest::root_ = nullptr;

json body_of(const HttpResponse& r) { return json::parse(r.body); }

TEST_F(ServerTest, ClustersOnCheckpoint) {
    InspectServer server;
    const std::string id = server.add_run(copy_run("checkpoint"));
    EXPECT_EQ(id, "checkpoint");
    const HttpResponse r = server.handle("GET", "/api/session/checkpoint/clusters");
    ASSERT_EQ(r.status, 200) << r.body;
    const json j = body_of(r);
    EXPECT_EQ(j["clusters"].size(), 2u);
    EXPECT_EQ(j["clusters"][0]["id"], 0);
    EXPECT_EQ(j["clusters"][1]["id"], 1);
    const std::size_t n = j["point_count"];
    EXPECT_EQ(j["labels"].size(), n);
    EXPECT_EQ(j["positions"].size(), 3 * n);
    EXPECT_EQ(j["colors"].size(), 3 * n);
    EXPECT_FALSE(j["thinned"].get<bool>());
}

TEST_F(ServerTest, ClustersPayloadRespectsCap) {
    InspectServer server(300);
    server.add_run(copy_run("checkpoint"));
    const json j = body_of(server.handle("GET", "/api/session/checkpoint/clusters"));
    EXPECT_LE(j["point_count"].get<std::size_t>(), 300u);
    EXPECT_GT(j["total_points"].get<std::size_t>(), 300u);
    EXPECT_TRUE(j["thinned"].get<bool>());
    EXPECT_EQ(j["labels"].size(), j["point_count"].get<std::size_t>());
}

TEST_F(ServerTest, UnknownSessionAndRoute) {
    InspectServer server;
    server.add_run(copy_run("checkpoint"));
    EXPECT_EQ(server.handle("GET", "/api/session/nope/clusters").status, 404);
    EXPECT_EQ(server.handle("GET", "/api/session/checkpoint/bogus").status, 404);
    EXPECT_EQ(server.handle("GET", "/index.html").status, 404);
    EXPECT_EQ(server.handle("GET", "/api/session/checkpoint/selection").status, 405);
}

TEST_F(ServerTest, WrongStateIs409) {
    InspectServer server;
    server.add_run(copy_run("checkpoint"));
    server.add_run(copy_run("failed"));
    EXPECT_EQ(server.handle("GET", "/api/session/checkpoint/plan").status, 409);
    EXPECT_EQ(server.handle("GET", "/api/session/failed/clusters").status, 409);
    EXPECT_EQ(server.handle("POST", "/api/session/failed/selection", R"({"ids":[0]})").status, 409);
    EXPECT_EQ(body_of(server.handle("GET", "/api/session/failed"))["state"], "error");
}

TEST_F(ServerTest, InvalidSelectionsAre422AndKeepState) {
    InspectServer server;
    const auto dir = copy_run("checkpoint");
    server.add_run(dir);
    const std::string session_before = read_text_file(dir / "session.json");
    for (const char* body : {R"({"ids":[]})", R"({"ids":[7]})", R"({"ids":[-1]})", "not json", R"({"ids":[0],"extra":1})",
                             R"({"slice":{"mode":"direction"}})", R"({"ids":[0],"slice":{"mode":"direction"}})",
                             R"({"ids":[0],"slice":{"band_width":-1}})", R"({"ids":"interactive"})", "[1]"}) {
        const HttpResponse r = server.handle("POST", "/api/session/checkpoint/selection", body);
        EXPECT_EQ(r.status, 422) << body << " -> " << r.body;
        EXPECT_TRUE(body_of(r).contains("error"));
    }
    EXPECT_EQ(body_of(server.handle("GET", "/api/session/checkpoint"))["state"], "awaiting_selection");
    EXPECT_EQ(read_text_file(dir / "session.json"), session_before);
}

TEST_F(ServerTest, SelectionPlansAndVersions) {
    InspectServer server;
    const auto dir = copy_run("checkpoint");
    server.add_run(dir);
    HttpResponse r = server.handle("POST", "/api/session/checkpoint/selection", R"({"ids":[0]})");
    ASSERT_EQ(r.status, 202) << r.body;
    EXPECT_EQ(body_of(r)["version"], 1);
    const HttpResponse plan1 = server.handle("GET", "/api/session/checkpoint/plan");
    ASSERT_EQ(plan1.status, 200);
    EXPECT_EQ(plan1.body, read_text_file(dir / "plan.json"));
    EXPECT_TRUE(json::parse(plan1.body).contains("targets"));

    r = server.handle("POST", "/api/session/checkpoint/selection",
                      R"({"ids":[1],"slice":{"mode":"direction","direction":[0,0,1],"row_count":2}})");
    ASSERT_EQ(r.status, 202) << r.body;
    EXPECT_EQ(body_of(r)["version"], 2);
    const json versions = body_of(server.handle("GET", "/api/session/checkpoint/plans"));
    EXPECT_EQ(versions["versions"].size(), 2u);
    EXPECT_EQ(server.handle("GET", "/api/session/checkpoint/plan?version=1").body, plan1.body);
    EXPECT_NE(server.handle("GET", "/api/session/checkpoint/plan").body, plan1.body);
    EXPECT_EQ(server.handle("GET", "/api/session/checkpoint/plan?version=3").status, 404);
    EXPECT_EQ(server.handle("GET", "/api/session/checkpoint/plan?version=x").status, 422);
    // Clusters stay available once planned.
    EXPECT_EQ(server.handle("GET", "/api/session/checkpoint/clusters").status, 200);
}

TEST_F(ServerTest, RestartReconstructsSession) {
    const auto dir = copy_run("checkpoint");
    std::string before, clusters_before;
    {
        InspectServer server;
        server.add_run(dir);
        ASSERT_EQ(server.handle("POST", "/api/session/checkpoint/selection", R"({"ids":"largest"})").status, 202);
        before = server.handle("GET", "/api/session/checkpoint").body;
        clusters_before = server.handle("GET", "/api/session/checkpoint/clusters").body;
    }
    InspectServer again;
    again.add_run(dir);
    EXPECT_EQ(again.handle("GET", "/api/session/checkpoint").body, before);
    EXPECT_EQ(again.handle("GET", "/api/session/checkpoint/clusters").body, clusters_before);
    EXPECT_EQ(again.handle("GET", "/api/session/checkpoint/plan").body, read_text_file(dir / "plan.json"));
}

TEST_F(ServerTest, ConcurrentSelectionsSerialize) {
    InspectServer server;
    server.add_run(copy_run("checkpoint"));
    std::vector<int> versions(4, 0);
    std::vector<std::thread> threads;
    for (int i = 0; i < 4; ++i) {
        threads.emplace_back([&, i] {
            const HttpResponse r =
                server.handle("POST", "/api/session/checkpoint/selection", R"({"ids":[)" + std::to_string(i % 2) + "]}");
            if (r.status == 202) versions[i] = json::parse(r.body)["version"];
        });
    }
    for (auto& t : threads) t.join();
    EXPECT_EQ(std::set<int>(versions.begin(), versions.end()), (std::set<int>{1, 2, 3, 4}));
}

TEST_F(ServerTest, SessionsListing) {
    InspectServer server;
    server.add_run(copy_run("checkpoint"));
    server.add_run(copy_run("failed"));
    const json j = body_of(server.handle("GET", "/api/sessions"));
    ASSERT_EQ(j["sessions"].size(), 2u);
    EXPECT_EQ(j["sessions"][0]["id"], "checkpoint");
    EXPECT_THROW(server.add_run(dir_ / "checkpoint"), Error);
    EXPECT_THROW(server.add_run(dir_ / "missing"), Error);
}

TEST_F(ServerTest, ServesOverHttp) {
    InspectServer server;
    server.add_run(copy_run("checkpoint"));
    const int port = server.bind("127.0.0.1", 0);
    std::thread t([&] { server.listen(); });
    httplib::Client client("127.0.0.1", port);
    auto res = client.Get("/api/session/checkpoint/clusters");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
    res = client.Post("/api/session/checkpoint/selection", R"({"ids":[]})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 422);

    InspectServer other;
    try {
        other.bind("127.0.0.1", port);
        ADD_FAILURE() << "second bind should fail";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kIo);
    }
    server.stop();
    t.join();
}

TEST(ThinToCap, KeepsEverythingUnderCap) {
    std::vector<Vec3> pts{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    EXPECT_EQ(thin_to_cap(pts, 3), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_TRUE(thin_to_cap(pts, 0).empty());
}

TEST(ThinToCap, DenseCloudStaysUnderCapAndCoversExtent) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec3> pts;
    for (int i = 0; i < 20000; ++i) pts.emplace_back(u(rng), u(rng), 0.0);  // flat cloud
    for (std::size_t cap : {10u, 1000u, 5000u}) {
        const auto kept = thin_to_cap(pts, cap);
        EXPECT_LE(kept.size(), cap);
        EXPECT_GT(kept.size(), cap / 4) << "voxel grew more than needed";
        EXPECT_TRUE(std::is_sorted(kept.begin(), kept.end()));
        EXPECT_EQ(std::set<std::size_t>(kept.begin(), kept.end()).size(), kept.size());
    }
    std::vector<Vec3> same(50, Vec3(1, 2, 3));
    EXPECT_EQ(thin_to_cap(same, 5).size(), 1u);
}

}  // namespace
}  // namespace inspath
