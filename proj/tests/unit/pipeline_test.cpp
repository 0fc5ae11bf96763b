#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "../support/temp_dir.hpp"
#include "inspath/error.hpp"
#include "inspath/io.hpp"
#include "inspath/pipeline.hpp"
#include "inspath/synth.hpp"

namespace inspath {
namespace {

using testing::TempDir;
namespace fs = std::filesystem;

SyntheticFrameSource source_for(const std::string& name, NoiseSpec noise = {}, std::uint64_t seed = 7) {
    SceneFile f = builtin_scene(name);
    return SyntheticFrameSource(f.scene, f.camera, noise, seed);
}

PipelineConfig quick_config() {
    PipelineConfig c;
    c.s = 3;
    return c;
}

TEST(Pipeline, InclinedPlaneTargetsSitAtStandoffFacingSurface) {
    const SceneFile scene = builtin_scene("inclined_plane");
    auto src = source_for("inclined_plane");
    const RunRecord r = run(src, quick_config());
    ASSERT_EQ(r.state, RunState::kPlanned);
    ASSERT_TRUE(r.plan.has_value());
    ASSERT_GT(r.plan->targets.size(), 3u);
    for (const RigidTransform& w : r.plan->world_poses) {
        EXPECT_NEAR(surface_distance(scene.scene, w.translation()), 0.3, 1e-3);
        const Vec3 n = ground_truth_normal(scene.scene, w.translation(), 0.31);
        const Vec3 z = w.rotation().apply(Vec3::UnitZ());
        EXPECT_GT(z.dot(-n), std::cos(1.0 * M_PI / 180.0));
    }
    for (const char* s : {"sample", "merge", "hpr", "downsample", "normals", "cluster", "select", "profile", "targets"}) {
        EXPECT_NE(r.stage(s), nullptr) << s;
    }
    EXPECT_EQ(r.frame_counts.size(), 3u);
    EXPECT_EQ(r.final_targets(), r.plan->targets.size());
}

TEST(Pipeline, InsufficientFramesIsTagged) {
    SceneFile f = builtin_scene("plane");
    SyntheticFrameSource src(f.scene, f.camera, {}, 1, 2);
    try {
        run(src, quick_config());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kInsufficientFrames);
        EXPECT_EQ(e.stage(), "sample");
    }
}

TEST(Pipeline, ErrorMarksSessionOnDisk) {
    TempDir dir;
    auto src = source_for("plane");
    PipelineConfig c = quick_config();
    c.cluster_selection = {SelectionPolicy::kIds, {}};
    EXPECT_THROW(run(src, c, dir / "run"), Error);
    const std::string session = read_text_file(dir / "run" / "session.json");
    EXPECT_NE(session.find("\"error\""), std::string::npos);
    EXPECT_NE(session.find("empty"), std::string::npos);
}

TEST(Pipeline, EmptySelectionIsEmptyProfile) {
    auto src = source_for("plane");
    PipelineConfig c = quick_config();
    c.cluster_selection = {SelectionPolicy::kIds, {}};
    try {
        run(src, c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kEmptyProfile);
    }
}

TEST(Pipeline, InteractiveSuspendsAndLargestResumeMatchesHeadless) {
    TempDir dir;
    PipelineConfig c = quick_config();
    auto headless_src = source_for("two_blobs");
    const RunRecord headless = run(headless_src, c, dir / "headless");

    c.cluster_selection = {SelectionPolicy::kInteractive, {}};
    auto src = source_for("two_blobs");
    const RunRecord paused = run(src, c, dir / "interactive");
    EXPECT_EQ(paused.state, RunState::kAwaitingSelection);
    EXPECT_FALSE(paused.plan.has_value());
    EXPECT_FALSE(fs::exists(dir / "interactive" / "plan.json"));
    EXPECT_EQ(paused.clusters.cluster_count(), 2u);

    const RunRecord resumed = resume(paused, Selection{{SelectionPolicy::kLargest, {}}, std::nullopt});
    EXPECT_EQ(resumed.state, RunState::kPlanned);
    EXPECT_EQ(read_text_file(dir / "interactive" / "plan.json"), read_text_file(dir / "headless" / "plan.json"));
}

TEST(Pipeline, TwoResumesGiveDistinctVersionsOverSameUpstream) {
    TempDir dir;
    PipelineConfig c = quick_config();
    c.cluster_selection = {SelectionPolicy::kInteractive, {}};
    auto src = source_for("two_blobs");
    const RunRecord paused = run(src, c, dir / "run");
    const std::string normals_before = fnv1a_hex(read_text_file(dir / "run" / "stage-normals.ply"));

    const RunRecord a = resume(paused, Selection{{SelectionPolicy::kIds, {0}}, std::nullopt});
    const RunRecord b = resume(a, Selection{{SelectionPolicy::kIds, {1}}, std::nullopt});
    EXPECT_EQ(a.plan_version, 1u);
    EXPECT_EQ(b.plan_version, 2u);
    const std::string p1 = read_text_file(dir / "run" / "plans" / "plan-0001.json");
    const std::string p2 = read_text_file(dir / "run" / "plans" / "plan-0002.json");
    EXPECT_NE(p1, p2);
    EXPECT_EQ(read_text_file(dir / "run" / "plan.json"), p2);
    EXPECT_EQ(fnv1a_hex(read_text_file(dir / "run" / "stage-normals.ply")), normals_before);
    EXPECT_EQ(a.stage("normals")->points, b.stage("normals")->points);
    EXPECT_EQ(b.config.cluster_selection.ids, std::vector<int>{1});
}

TEST(Pipeline, InvalidResumeLeavesCheckpointUntouched) {
    TempDir dir;
    PipelineConfig c = quick_config();
    c.cluster_selection = {SelectionPolicy::kInteractive, {}};
    auto src = source_for("two_blobs");
    const RunRecord paused = run(src, c, dir / "run");
    const std::string session = read_text_file(dir / "run" / "session.json");
    EXPECT_THROW(resume(paused, Selection{{SelectionPolicy::kIds, {42}}, std::nullopt}), Error);
    EXPECT_EQ(read_text_file(dir / "run" / "session.json"), session);
    const RunRecord reloaded = load_run(dir / "run");
    EXPECT_EQ(reloaded.state, RunState::kAwaitingSelection);
}

TEST(Pipeline, ResumeRejectsUnfinishedRuns) {
    RunRecord r;
    r.state = RunState::kError;
    try {
        resume(r, Selection{{SelectionPolicy::kLargest, {}}, std::nullopt});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kState);
    }
}

TEST(Pipeline, ConfigSnapshotReproducesInteractivePlan) {
    TempDir dir;
    PipelineConfig c = quick_config();
    c.cluster_selection = {SelectionPolicy::kInteractive, {}};
    auto src = source_for("two_blobs");
    const RunRecord paused = run(src, c, dir / "run");
    const RunRecord planned = resume(paused, Selection{{SelectionPolicy::kIds, {1}}, std::nullopt});

    const RunRecord reloaded = load_run(dir / "run");
    EXPECT_EQ(reloaded.state, RunState::kPlanned);
    EXPECT_EQ(reloaded.plan_version, 1u);
    auto again_src = source_for("two_blobs");
    run(again_src, reloaded.config, dir / "again");
    EXPECT_EQ(read_text_file(dir / "again" / "plan.json"), read_text_file(dir / "run" / "plan.json"));
    EXPECT_EQ(parse_config(config_to_json(reloaded.config)).cluster_selection.ids, std::vector<int>{1});
}

TEST(Pipeline, LoadRunRestoresCheckpoint) {
    TempDir dir;
    PipelineConfig c = quick_config();
    c.cluster_selection = {SelectionPolicy::kInteractive, {}};
    auto src = source_for("two_blobs");
    const RunRecord paused = run(src, c, dir / "run", "scene two_blobs");
    const RunRecord loaded = load_run(dir / "run");
    EXPECT_EQ(loaded.source, "scene two_blobs");
    EXPECT_EQ(loaded.processed.size(), paused.processed.size());
    EXPECT_EQ(loaded.clusters.labels, paused.clusters.labels);
    EXPECT_EQ(loaded.stages.size(), paused.stages.size());
    EXPECT_TRUE(loaded.camera.isApprox(paused.camera));
}

TEST(Pipeline, ManifestHashesMatchFiles) {
    TempDir dir;
    auto src = source_for("plane");
    run(src, quick_config(), dir / "run");
    const std::string manifest = read_text_file(dir / "run" / "manifest.json");
    for (const char* f : {"stage-merged.ply", "stage-normals.ply", "plan.json"}) {
        const std::string h = fnv1a_hex(read_text_file(dir / "run" / f));
        EXPECT_NE(manifest.find(h), std::string::npos) << f;
    }
}

TEST(Pipeline, MultiSliceRowsAreOffset) {
    auto src = source_for("cylinder");
    PipelineConfig c = quick_config();
    SliceSpec a;
    a.mode = SliceMode::kDirection;
    a.direction = Vec3(0, 0, 1);
    a.row_count = 2;
    a.band_width = 0.03;
    SliceSpec b = a;
    b.row_count = 1;
    c.slices = {a, b};
    const RunRecord r = run(src, c);
    std::set<std::size_t> rows;
    for (const TargetPose& t : r.plan->targets) rows.insert(t.row_index);
    EXPECT_TRUE(rows.count(2)) << "third row comes from the second slice";
}

TEST(Pipeline, NoFilesWithoutRunDir) {
    auto src = source_for("plane");
    const RunRecord r = run(src, quick_config());
    EXPECT_TRUE(r.run_dir.empty());
    EXPECT_EQ(r.plan_version, 1u);
}

TEST(Pipeline, Fnv1aKnownVectors) {
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
    EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(Pipeline, StageTableHasSummaryColumns) {
    auto src = source_for("plane");
    const RunRecord r = run(src, quick_config());
    const std::string t = format_stage_table(r);
    for (const char* h : {"Number of points", "Sampling time", "Object profile points", "Final targets generated"}) {
        EXPECT_NE(t.find(h), std::string::npos) << h;
    }
    EXPECT_EQ(t.find("\x1b["), std::string::npos);
    EXPECT_NE(format_stage_table(r, true).find("\x1b[1m"), std::string::npos);
}

TEST(Pipeline, RunStateNamesRoundTrip) {
    for (RunState s : {RunState::kRendering, RunState::kAwaitingSelection, RunState::kPlanned, RunState::kError}) {
        EXPECT_EQ(run_state_from_string(to_string(s)), s);
    }
    EXPECT_THROW(run_state_from_string("done"), Error);
}

}  // namespace
}  // namespace inspath
