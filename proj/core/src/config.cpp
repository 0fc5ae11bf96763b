#include "inspath/config.hpp"

#include <cmath>

#include "config_json.hpp"
#include "inspath/error.hpp"
#include "inspath/io.hpp"

namespace inspath {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    fail(ErrorCode::kConfig, path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) config_error(path.empty() ? "(root)" : path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) config_error(join(path, it.key()), "unknown key");
    }
}

double real_of(const json& j, const std::string& path) {
    if (!j.is_number()) config_error(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) config_error(path, "must be finite");
    return v;
}

std::size_t count_of(const json& j, const std::string& path) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) config_error(path, "expected a non-negative integer");
    const auto v = j.get<long long>();
    if (v < 0) config_error(path, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

bool flag_of(const json& j, const std::string& path) {
    if (!j.is_boolean()) config_error(path, "expected true or false");
    return j.get<bool>();
}

Vec3 vec_of(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) config_error(path, "expected an array of 3 numbers");
    return Vec3(real_of(j[0], path + "[0]"), real_of(j[1], path + "[1]"), real_of(j[2], path + "[2]"));
}

CropBox box_of(const json& j, const std::string& path) {
    require_keys(j, path, {"min", "max"});
    CropBox b;
    if (j.contains("min")) b.min = vec_of(j["min"], path + ".min");
    if (j.contains("max")) b.max = vec_of(j["max"], path + ".max");
    if (!b.valid()) config_error(path, "min exceeds max");
    return b;
}

RigidTransform transform_of(const json& j, const std::string& path) {
    require_keys(j, path, {"quaternion", "translation"});
    Rotation r;
    Vec3 t = Vec3::Zero();
    if (j.contains("quaternion")) {
        const json& q = j["quaternion"];
        if (!q.is_array() || q.size() != 4) config_error(path + ".quaternion", "expected [w, x, y, z]");
        double v[4];
        for (int i = 0; i < 4; ++i) v[i] = real_of(q[i], path + ".quaternion[" + std::to_string(i) + "]");
        if (std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]) + std::abs(v[3]) == 0.0) {
            config_error(path + ".quaternion", "must be non-zero");
        }
        r = Rotation(v[0], v[1], v[2], v[3]);
    }
    if (j.contains("translation")) t = vec_of(j["translation"], path + ".translation");
    return RigidTransform(r, t);
}

SliceSpec slice_of(const json& j, double voxel, const std::string& path) {
    require_keys(j, path, {"mode", "direction", "segment", "band_width", "row_count"});
    SliceSpec s;
    s.band_width = 1.5 * voxel;
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) config_error(path + ".mode", "expected a string");
        const std::string m = j["mode"].get<std::string>();
        if (m == "auto") s.mode = SliceMode::kAuto;
        else if (m == "direction") s.mode = SliceMode::kDirection;
        else if (m == "segment") s.mode = SliceMode::kSegment;
        else config_error(path + ".mode", "expected auto, direction or segment");
    } else if (j.contains("direction")) {
        s.mode = SliceMode::kDirection;
    } else if (j.contains("segment")) {
        s.mode = SliceMode::kSegment;
    }
    if (j.contains("direction")) {
        const Vec3 d = vec_of(j["direction"], path + ".direction");
        if (d.norm() < 1e-12) config_error(path + ".direction", "must be non-zero");
        s.direction = std::abs(d.norm() - 1.0) > 1e-12 ? Vec3(d.normalized()) : d;
    }
    if (j.contains("segment")) s.segment = box_of(j["segment"], path + ".segment");
    if (j.contains("band_width")) s.band_width = real_of(j["band_width"], path + ".band_width");
    if (j.contains("row_count")) s.row_count = count_of(j["row_count"], path + ".row_count");
    if (s.direction.has_value() != (s.mode == SliceMode::kDirection)) {
        config_error(path + ".direction", "required exactly when mode is direction");
    }
    if (s.segment.has_value() != (s.mode == SliceMode::kSegment)) {
        config_error(path + ".segment", "required exactly when mode is segment");
    }
    if (!(s.band_width > 0)) config_error(path + ".band_width", "must be positive");
    if (s.row_count < 1) config_error(path + ".row_count", "must be at least 1");
    return s;
}

}  // namespace

namespace detail {

std::vector<SliceSpec> slices_from_json(const json& j, double voxel, const std::string& path) {
    std::vector<SliceSpec> out;
    if (j.is_array()) {
        if (j.empty()) config_error(path, "needs at least one slice");
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(slice_of(j[i], voxel, path + "[" + std::to_string(i) + "]"));
    } else {
        out.push_back(slice_of(j, voxel, path));
    }
    return out;
}

ojson slices_to_json(const std::vector<SliceSpec>& slices) {
    ojson arr = ojson::array();
    for (const SliceSpec& s : slices) {
        ojson j;
        j["mode"] = to_string(s.mode);
        if (s.direction) j["direction"] = vec3_to_json(*s.direction);
        if (s.segment) {
            j["segment"]["min"] = vec3_to_json(s.segment->min);
            j["segment"]["max"] = vec3_to_json(s.segment->max);
        }
        j["band_width"] = s.band_width;
        j["row_count"] = s.row_count;
        arr.push_back(j);
    }
    return arr;
}

ClusterSelection selection_from_json(const json& j, const std::string& path) {
    ClusterSelection sel;
    if (j.is_string()) {
        const std::string p = j.get<std::string>();
        if (p == "largest") sel.policy = SelectionPolicy::kLargest;
        else if (p == "interactive") sel.policy = SelectionPolicy::kInteractive;
        else config_error(path, "expected an id list, \"largest\" or \"interactive\"");
    } else if (j.is_array()) {
        sel.policy = SelectionPolicy::kIds;
        for (std::size_t i = 0; i < j.size(); ++i) {
            const std::string p = path + "[" + std::to_string(i) + "]";
            if (!j[i].is_number_integer() || j[i].get<long long>() < 0) config_error(p, "expected a cluster id");
            sel.ids.push_back(static_cast<int>(j[i].get<long long>()));
        }
    } else {
        config_error(path, "expected an id list, \"largest\" or \"interactive\"");
    }
    return sel;
}

ojson selection_to_json(const ClusterSelection& selection) {
    switch (selection.policy) {
        case SelectionPolicy::kLargest: return "largest";
        case SelectionPolicy::kInteractive: return "interactive";
        case SelectionPolicy::kIds: return ojson(selection.ids);
    }
    return "largest";
}

PipelineConfig config_from_json(const json& j) {
    require_keys(j, "", {"s", "crop", "ground_z", "vote_tolerance", "hpr", "voxel", "normals", "dbscan",
                       "cluster_selection", "slice", "standoff", "min_clearance", "decimation_n", "reverse",
                       "hand_eye", "base_in_world"});
    PipelineConfig c;
    if (j.contains("voxel")) c.voxel = real_of(j["voxel"], "voxel");
    if (!(c.voxel > 0)) config_error("voxel", "must be positive");
    c.dbscan.eps = 2.0 * c.voxel;
    c.slices = {SliceSpec{}};
    c.slices[0].band_width = 1.5 * c.voxel;

    if (j.contains("s")) c.s = count_of(j["s"], "s");
    if (j.contains("crop")) c.crop = box_of(j["crop"], "crop");
    if (j.contains("ground_z")) c.ground_z = real_of(j["ground_z"], "ground_z");
    if (j.contains("vote_tolerance")) c.vote_tolerance = real_of(j["vote_tolerance"], "vote_tolerance");
    if (j.contains("hpr")) {
        const json& h = j["hpr"];
        require_keys(h, "hpr", {"enabled", "camera", "radius_scale"});
        if (h.contains("enabled")) c.hpr.enabled = flag_of(h["enabled"], "hpr.enabled");
        if (h.contains("camera")) c.hpr.camera = vec_of(h["camera"], "hpr.camera");
        if (h.contains("radius_scale")) c.hpr.radius_scale = real_of(h["radius_scale"], "hpr.radius_scale");
    }
    if (j.contains("normals")) {
        const json& n = j["normals"];
        require_keys(n, "normals", {"k", "viewpoint"});
        if (n.contains("k")) c.normals.k = count_of(n["k"], "normals.k");
        if (n.contains("viewpoint")) c.normals.viewpoint = vec_of(n["viewpoint"], "normals.viewpoint");
    }
    if (j.contains("dbscan")) {
        const json& d = j["dbscan"];
        require_keys(d, "dbscan", {"eps", "min_pts"});
        if (d.contains("eps")) c.dbscan.eps = real_of(d["eps"], "dbscan.eps");
        if (d.contains("min_pts")) c.dbscan.min_pts = count_of(d["min_pts"], "dbscan.min_pts");
    }
    if (j.contains("cluster_selection")) c.cluster_selection = selection_from_json(j["cluster_selection"], "cluster_selection");
    if (j.contains("slice")) c.slices = slices_from_json(j["slice"], c.voxel, "slice");
    if (j.contains("standoff")) c.standoff = real_of(j["standoff"], "standoff");
    if (j.contains("min_clearance")) c.min_clearance = real_of(j["min_clearance"], "min_clearance");
    if (j.contains("decimation_n")) c.decimation_n = count_of(j["decimation_n"], "decimation_n");
    if (j.contains("reverse")) c.reverse = flag_of(j["reverse"], "reverse");
    if (j.contains("hand_eye")) c.hand_eye = transform_of(j["hand_eye"], "hand_eye");
    if (j.contains("base_in_world")) c.base_in_world = transform_of(j["base_in_world"], "base_in_world");
    c.validate();
    return c;
}

ojson config_to_ojson(const PipelineConfig& c) {
    ojson j;
    j["s"] = c.s;
    j["crop"]["min"] = vec3_to_json(c.crop.min);
    j["crop"]["max"] = vec3_to_json(c.crop.max);
    j["ground_z"] = c.ground_z;
    j["vote_tolerance"] = c.vote_tolerance;
    j["hpr"]["enabled"] = c.hpr.enabled;
    if (c.hpr.camera) j["hpr"]["camera"] = vec3_to_json(*c.hpr.camera);
    j["hpr"]["radius_scale"] = c.hpr.radius_scale;
    j["voxel"] = c.voxel;
    j["normals"]["k"] = c.normals.k;
    if (c.normals.viewpoint) j["normals"]["viewpoint"] = vec3_to_json(*c.normals.viewpoint);
    j["dbscan"]["eps"] = c.dbscan.eps;
    j["dbscan"]["min_pts"] = c.dbscan.min_pts;
    j["cluster_selection"] = selection_to_json(c.cluster_selection);
    j["slice"] = slices_to_json(c.slices);
    j["standoff"] = c.standoff;
    j["min_clearance"] = c.min_clearance;
    j["decimation_n"] = c.decimation_n;
    j["reverse"] = c.reverse;
    j["hand_eye"] = transform_to_json(c.hand_eye);
    j["base_in_world"] = transform_to_json(c.base_in_world);
    return j;
}

}  // namespace detail

void PipelineConfig::validate() const {
    if (s < 1) config_error("s", "must be at least 1");
    if (!crop.valid()) config_error("crop", "min exceeds max");
    if (!std::isfinite(ground_z)) config_error("ground_z", "must be finite");
    if (!(vote_tolerance >= 0 && vote_tolerance <= 1)) config_error("vote_tolerance", "must lie in [0,1]");
    if (!(hpr.radius_scale > 1)) config_error("hpr.radius_scale", "must exceed 1");
    if (!(voxel > 0)) config_error("voxel", "must be positive");
    if (normals.k < 3) config_error("normals.k", "must be at least 3");
    if (!(dbscan.eps > 0)) config_error("dbscan.eps", "must be positive");
    if (dbscan.min_pts < 1) config_error("dbscan.min_pts", "must be at least 1");
    if (slices.empty()) config_error("slice", "needs at least one slice");
    for (std::size_t i = 0; i < slices.size(); ++i) {
        try {
            slices[i].validate();
        } catch (const Error& e) {
            config_error("slice[" + std::to_string(i) + "]", e.message());
        }
    }
    if (!(standoff > 0)) config_error("standoff", "must be positive");
    if (!(min_clearance >= 0)) config_error("min_clearance", "must be non-negative");
}

PlanParams PipelineConfig::plan_params() const {
    PlanParams p;
    p.standoff = standoff;
    p.voxel = voxel;
    p.min_clearance = min_clearance;
    p.ground_z = ground_z;
    p.decimation_n = decimation_n;
    p.reverse = reverse;
    p.hand_eye = hand_eye;
    p.base_in_world = base_in_world;
    return p;
}

PipelineConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::kConfig, std::string("(root): invalid JSON: ") + e.what());
    }
    return detail::config_from_json(j);
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        fail(ErrorCode::kConfig, e.message());
    }
    return parse_config(text);
}

std::string config_to_json(const PipelineConfig& config) { return detail::config_to_ojson(config).dump(2) + "\n"; }

}  // namespace inspath
