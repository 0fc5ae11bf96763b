#include "inspath/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "config_json.hpp"
#include "inspath/cloud_ops.hpp"
#include "inspath/error.hpp"
#include "inspath/io.hpp"
#include "inspath/profile.hpp"

namespace inspath {

namespace fs = std::filesystem;
using nlohmann::json;
using detail::ojson;

std::string to_string(RunState state) {
    switch (state) {
        case RunState::kRendering: return "rendering";
        case RunState::kAwaitingSelection: return "awaiting_selection";
        case RunState::kPlanned: return "planned";
        case RunState::kError: return "error";
    }
    return "error";
}

RunState run_state_from_string(const std::string& s) {
    if (s == "rendering") return RunState::kRendering;
    if (s == "awaiting_selection") return RunState::kAwaitingSelection;
    if (s == "planned") return RunState::kPlanned;
    if (s == "error") return RunState::kError;
    fail(ErrorCode::kParse, "unknown run state '" + s + "'");
}

const StageStat* RunRecord::stage(const std::string& name) const {
    for (const StageStat& s : stages) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

std::size_t RunRecord::downsampled_points() const {
    const StageStat* s = stage("downsample");
    return s ? s->points : 0;
}

double RunRecord::sampling_millis() const {
    const StageStat* s = stage("sample");
    return s ? s->millis : 0.0;
}

std::size_t RunRecord::profile_points() const {
    const StageStat* s = stage("profile");
    return s ? s->points : 0;
}

std::size_t RunRecord::final_targets() const {
    const StageStat* s = stage("targets");
    return s ? s->points : 0;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Runs `fn` as a named stage: times it, records the point count it returns
/// and tags any error with the stage name.
template <typename Fn>
void stage(RunRecord& record, const std::string& name, Fn&& fn) {
    const auto start = Clock::now();
    std::size_t points = 0;
    try {
        points = fn();
    } catch (const Error& e) {
        throw e.stage().empty() ? e.with_stage(name) : e;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::kInternal, e.what(), name);
    }
    record.stages.push_back(StageStat{name, points, millis_since(start)});
}

const char* kStageFiles[][2] = {{"merge", "stage-merged.ply"},       {"hpr", "stage-hpr.ply"},
                                {"downsample", "stage-downsampled.ply"}, {"normals", "stage-normals.ply"},
                                {"select", "stage-object.ply"},        {"profile", "stage-profile.ply"}};

void save_stage_cloud(const RunRecord& record, const std::string& stage_name, const PointCloud& cloud) {
    if (record.run_dir.empty()) return;
    for (const auto& entry : kStageFiles) {
        if (stage_name == entry[0]) write_cloud(cloud, record.run_dir / entry[1], CloudFormat::kPlyBinary);
    }
}

void write_manifest(const RunRecord& record) {
    ojson m;
    m["artifacts"] = ojson::array();
    auto add = [&](const std::string& rel, const std::string& stage_name, std::optional<std::size_t> points) {
        const fs::path p = record.run_dir / rel;
        if (!fs::exists(p)) return;
        ojson a;
        a["file"] = rel;
        a["stage"] = stage_name;
        if (points) a["points"] = *points;
        a["fnv1a"] = fnv1a_hex(read_text_file(p));
        m["artifacts"].push_back(a);
    };
    for (const auto& entry : kStageFiles) {
        const StageStat* s = record.stage(entry[0]);
        add(entry[1], entry[0], s ? std::optional<std::size_t>(s->points) : std::nullopt);
    }
    add("clusters.json", "cluster", std::nullopt);
    if (record.plan_version > 0) {
        add("plan.json", "targets", std::nullopt);
        for (std::size_t v = 1; v <= record.plan_version; ++v) {
            char name[64];
            std::snprintf(name, sizeof name, "plans/plan-%04zu.json", v);
            add(name, "targets", std::nullopt);
        }
    }
    write_text_file(record.run_dir / "manifest.json", m.dump(2) + "\n");
}

std::vector<std::string> plan_files(std::size_t version) {
    std::vector<std::string> out;
    for (std::size_t v = 1; v <= version; ++v) {
        char name[64];
        std::snprintf(name, sizeof name, "plans/plan-%04zu.json", v);
        out.emplace_back(name);
    }
    return out;
}

void write_session(const RunRecord& record) {
    if (record.run_dir.empty()) return;
    ojson s;
    s["run_id"] = record.run_dir.filename().string();
    s["state"] = to_string(record.state);
    s["cluster_selection"] = detail::selection_to_json(record.config.cluster_selection);
    s["slice"] = detail::slices_to_json(record.config.slices);
    s["plan_version"] = record.plan_version;
    s["plans"] = plan_files(record.plan_version);
    s["error"] = record.error;
    write_text_file(record.run_dir / "session.json", s.dump(2) + "\n");
}

void write_record(const RunRecord& record) {
    if (record.run_dir.empty()) return;
    ojson r;
    r["source"] = record.source;
    r["state"] = to_string(record.state);
    r["error"] = record.error;
    r["config"] = detail::config_to_ojson(record.config);
    r["camera"] = detail::vec3_to_json(record.camera);
    r["frame_counts"] = record.frame_counts;
    r["vote_selected"] = record.vote_selected;
    r["stages"] = ojson::array();
    for (const StageStat& s : record.stages) {
        ojson e;
        e["name"] = s.name;
        e["points"] = s.points;
        e["millis"] = s.millis;
        r["stages"].push_back(e);
    }
    r["table"]["number_of_points"] = record.downsampled_points();
    r["table"]["sampling_time_ms"] = record.sampling_millis();
    r["table"]["object_profile_points"] = record.profile_points();
    r["table"]["final_targets_generated"] = record.final_targets();
    r["warnings"] = record.warnings;
    r["plan_version"] = record.plan_version;
    r["plan"] = record.plan_version > 0 ? ojson("plan.json") : ojson(nullptr);
    write_text_file(record.run_dir / "record.json", r.dump(2) + "\n");
    write_session(record);
    write_manifest(record);
}

void mark_error(RunRecord& record, const Error& e) {
    record.state = RunState::kError;
    record.error = e.what();
    try {
        write_record(record);
    } catch (const Error&) {
        // The original failure is the one worth reporting.
    }
}

/// Selection, slicing and target generation on top of a checkpoint.
void plan_from_checkpoint(RunRecord& record) {
    std::erase_if(record.stages, [](const StageStat& s) {
        return s.name == "select" || s.name == "profile" || s.name == "targets";
    });
    record.warnings.clear();
    const PipelineConfig& cfg = record.config;

    PointCloud object;
    stage(record, "select", [&] {
        std::vector<int> ids = cfg.cluster_selection.ids;
        if (cfg.cluster_selection.policy == SelectionPolicy::kLargest) ids = {record.clusters.largest()};
        object = select_clusters(record.clusters, record.processed, ids);
        save_stage_cloud(record, "select", object);
        return object.size();
    });

    std::vector<Profile> profiles;
    stage(record, "profile", [&] {
        std::size_t row_offset = 0;
        std::size_t points = 0;
        PointCloud all;
        for (const SliceSpec& spec : cfg.slices) {
            std::vector<std::string> warnings;
            std::vector<Profile> rows;
            try {
                rows = extract_profiles(object, spec, &warnings);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::kEmptyProfile || cfg.slices.size() == 1) throw;
                warnings.push_back(std::string("slice produced no rows: ") + e.message());
            }
            for (std::string& w : warnings) record.warnings.push_back("profile: " + w);
            for (Profile& p : rows) {
                p.row_index += row_offset;
                points += p.size();
                PointCloud part;
                part.points = p.points;
                part.normals = p.normals;
                all.append(part);
                profiles.push_back(std::move(p));
            }
            row_offset += spec.row_count;
        }
        if (profiles.empty()) fail(ErrorCode::kEmptyProfile, "no slice produced a row");
        save_stage_cloud(record, "profile", all);
        return points;
    });

    stage(record, "targets", [&] {
        record.plan = generate_plan(profiles, cfg.plan_params());
        return record.plan->targets.size();
    });

    record.state = RunState::kPlanned;
    record.error.clear();
    ++record.plan_version;
    if (!record.run_dir.empty()) {
        const std::string text = plan_to_json(*record.plan);
        fs::create_directories(record.run_dir / "plans");
        write_text_file(record.run_dir / plan_files(record.plan_version).back(), text);
        write_text_file(record.run_dir / "plan.json", text);
        write_record(record);
    }
}

}  // namespace

RunRecord run(FrameSource& source, const PipelineConfig& config, const fs::path& run_dir,
              const std::string& source_description) {
    config.validate();
    RunRecord record;
    record.config = config;
    record.run_dir = run_dir;
    record.source = source_description;
    if (!run_dir.empty()) {
        fs::create_directories(run_dir);
        write_session(record);
    }

    try {
        std::vector<PointCloud> clouds;
        stage(record, "sample", [&] {
            std::size_t total = 0;
            for (std::size_t i = 0; i < config.s; ++i) {
                std::optional<Frame> frame = source.next();
                if (!frame) {
                    fail(ErrorCode::kInsufficientFrames, "source exhausted after " + std::to_string(i) + " of " +
                                                             std::to_string(config.s) + " frames");
                }
                if (i == 0) record.camera = frame->camera_pose.translation();
                clouds.push_back(filter_passthrough(generate_point_cloud(*frame), config.crop, config.ground_z));
                record.frame_counts.push_back(clouds.back().size());
                total += clouds.back().size();
            }
            return total;
        });

        PointCloud cloud;
        stage(record, "merge", [&] {
            VoteResult vote = majority_vote(clouds, config.vote_tolerance);
            clouds.clear();
            record.vote_selected = vote.selected;
            cloud = std::move(vote.merged);
            if (cloud.empty()) fail(ErrorCode::kInvalidArgument, "no points survive cropping");
            save_stage_cloud(record, "merge", cloud);
            return cloud.size();
        });

        stage(record, "hpr", [&] {
            if (config.hpr.enabled) {
                const Vec3 cam = config.hpr.camera.value_or(record.camera);
                cloud = cloud.select(hidden_point_removal(cloud, cam, config.hpr.radius_scale));
            }
            save_stage_cloud(record, "hpr", cloud);
            return cloud.size();
        });

        stage(record, "downsample", [&] {
            cloud = voxel_downsample(cloud, config.voxel);
            save_stage_cloud(record, "downsample", cloud);
            return cloud.size();
        });

        stage(record, "normals", [&] {
            cloud = estimate_normals(cloud, config.normals.k, config.normals.viewpoint.value_or(record.camera));
            save_stage_cloud(record, "normals", cloud);
            return cloud.size();
        });

        stage(record, "cluster", [&] {
            record.clusters = dbscan(cloud, config.dbscan.eps, config.dbscan.min_pts);
            if (!run_dir.empty()) write_text_file(run_dir / "clusters.json", cluster_summaries_to_json(record.clusters));
            return cloud.size() - record.clusters.noise_count();
        });
        record.processed = std::move(cloud);

        if (config.cluster_selection.policy == SelectionPolicy::kInteractive) {
            record.state = RunState::kAwaitingSelection;
            write_record(record);
            return record;
        }
        plan_from_checkpoint(record);
    } catch (const Error& e) {
        mark_error(record, e);
        throw;
    }
    return record;
}

RunRecord resume(const RunRecord& checkpoint, const Selection& selection) {
    if (checkpoint.state != RunState::kAwaitingSelection && checkpoint.state != RunState::kPlanned) {
        fail(ErrorCode::kState, "run is " + to_string(checkpoint.state) + "; nothing to resume");
    }
    if (selection.clusters.policy == SelectionPolicy::kInteractive) {
        fail(ErrorCode::kInvalidArgument, "resume needs concrete cluster ids or the largest policy");
    }
    RunRecord record = checkpoint;
    record.config.cluster_selection = selection.clusters;
    if (selection.slices) record.config.slices = *selection.slices;
    record.config.validate();
    // Failures leave the checkpoint and its files untouched.
    plan_from_checkpoint(record);
    return record;
}

RunRecord load_run(const fs::path& run_dir) {
    const fs::path record_path = run_dir / "record.json";
    if (!fs::exists(record_path)) fail(ErrorCode::kIo, "not a run directory (no record.json): " + run_dir.string());
    const json r = detail::parse_json(read_text_file(record_path), record_path.string());
    RunRecord record;
    record.run_dir = run_dir;
    try {
        record.source = r.at("source").get<std::string>();
        record.state = run_state_from_string(r.at("state").get<std::string>());
        record.error = r.at("error").get<std::string>();
        record.config = detail::config_from_json(r.at("config"));
        record.camera = detail::vec3_from_json(r.at("camera"), "camera");
        record.frame_counts = r.at("frame_counts").get<std::vector<std::size_t>>();
        record.vote_selected = r.at("vote_selected").get<std::vector<std::size_t>>();
        for (const json& s : r.at("stages")) {
            record.stages.push_back(StageStat{s.at("name").get<std::string>(), s.at("points").get<std::size_t>(),
                                              s.at("millis").get<double>()});
        }
        record.warnings = r.at("warnings").get<std::vector<std::string>>();
        record.plan_version = r.at("plan_version").get<std::size_t>();
    } catch (const json::exception& e) {
        fail(ErrorCode::kParse, record_path.string() + ": " + e.what());
    }
    const fs::path normals = run_dir / "stage-normals.ply";
    if (fs::exists(normals)) {
        record.processed = read_cloud(normals);
        record.clusters = dbscan(record.processed, record.config.dbscan.eps, record.config.dbscan.min_pts);
    }
    return record;
}

std::string format_stage_table(const RunRecord& record, bool color) {
    const char* bold = color ? "\x1b[1m" : "";
    const char* reset = color ? "\x1b[0m" : "";
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%s%-12s %12s %12s%s\n", bold, "stage", "points", "time (ms)", reset);
    out += line;
    for (const StageStat& s : record.stages) {
        std::snprintf(line, sizeof line, "%-12s %12zu %12.1f\n", s.name.c_str(), s.points, s.millis);
        out += line;
    }
    out += "\n";
    std::snprintf(line, sizeof line, "%s%-18s | %-17s | %-21s | %s%s\n", bold, "Number of points", "Sampling time",
                  "Object profile points", "Final targets generated", reset);
    out += line;
    char time[32];
    std::snprintf(time, sizeof time, "%.1f ms", record.sampling_millis());
    std::snprintf(line, sizeof line, "%-18zu | %-17s | %-21zu | %zu\n", record.downsampled_points(), time,
                  record.profile_points(), record.final_targets());
    out += line;
    return out;
}

}  // namespace inspath
