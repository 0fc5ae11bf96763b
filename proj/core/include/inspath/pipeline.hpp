#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "inspath/acquisition.hpp"
#include "inspath/clustering.hpp"
#include "inspath/config.hpp"
#include "inspath/target_gen.hpp"

namespace inspath {

enum class RunState { kRendering, kAwaitingSelection, kPlanned, kError };

std::string to_string(RunState state);
RunState run_state_from_string(const std::string& s);

struct StageStat {
    std::string name;
    std::size_t points = 0;
    double millis = 0.0;
};

/// Outcome of one run. With a run directory the same information lives in
/// record.json, session.json, plan.json and the stage clouds.
struct RunRecord {
    PipelineConfig config;
    RunState state = RunState::kRendering;
    std::string source;
    std::vector<StageStat> stages;
    std::vector<std::size_t> frame_counts;  // per sampled frame after cropping
    std::vector<std::size_t> vote_selected;
    Vec3 camera = Vec3::Zero();  // first frame's camera position
    std::vector<std::string> warnings;
    std::string error;

    std::filesystem::path run_dir;  // empty: nothing persisted
    std::size_t plan_version = 0;
    std::optional<PathPlan> plan;

    // Checkpoint content, kept in memory so resume works without a run dir.
    PointCloud processed;  // downsampled cloud with normals
    ClusterSet clusters;

    const StageStat* stage(const std::string& name) const;
    /// Table I columns: downsampled points, sampling time (ms), profile points
    /// and final targets.
    std::size_t downsampled_points() const;
    double sampling_millis() const;
    std::size_t profile_points() const;
    std::size_t final_targets() const;
};

/// Operator choices applied at the selection checkpoint.
struct Selection {
    ClusterSelection clusters;
    std::optional<std::vector<SliceSpec>> slices;
};

/// Runs sampling through planning. When the config asks for interactive
/// selection the run stops after clustering with state awaiting_selection.
/// Stage failures are rethrown tagged with the stage name; with a run dir the
/// session is marked as errored first.
RunRecord run(FrameSource& source, const PipelineConfig& config, const std::filesystem::path& run_dir = {},
              const std::string& source_description = {});

/// Continues a suspended or planned run with new operator choices. Each call
/// produces a new plan version; earlier versions stay on disk. Selection ids
/// are written back into the config snapshot so a headless re-run with that
/// snapshot reproduces the plan.
RunRecord resume(const RunRecord& checkpoint, const Selection& selection);

/// Reconstructs a record (including the checkpoint) from a run directory.
RunRecord load_run(const std::filesystem::path& run_dir);

/// Human-readable per-stage table plus the Table I summary line.
std::string format_stage_table(const RunRecord& record, bool color = false);

/// 64-bit FNV-1a over raw bytes, as lower-case hex.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace inspath
