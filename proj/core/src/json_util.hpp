#pragma once

#include <string>

#include "inspath/error.hpp"
#include "inspath/geom.hpp"
#include "json.hpp"

namespace inspath::detail {

using ojson = nlohmann::ordered_json;

inline nlohmann::json parse_json(const std::string& text, const std::string& origin) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::kParse, origin + ": " + e.what());
    }
}

inline Vec3 vec3_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(ErrorCode::kParse, path + ": expected an array of 3 numbers");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_number()) fail(ErrorCode::kParse, path + "[" + std::to_string(i) + "]: expected a number");
        v[i] = j[i].get<double>();
    }
    return v;
}

inline ojson vec3_to_json(const Vec3& v) { return ojson::array({v.x(), v.y(), v.z()}); }

inline Rotation rotation_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4) fail(ErrorCode::kParse, path + ": expected quaternion [w,x,y,z]");
    double q[4];
    for (int i = 0; i < 4; ++i) {
        if (!j[i].is_number()) fail(ErrorCode::kParse, path + "[" + std::to_string(i) + "]: expected a number");
        q[i] = j[i].get<double>();
    }
    try {
        return Rotation(q[0], q[1], q[2], q[3]);
    } catch (const Error& e) {
        fail(ErrorCode::kParse, path + ": " + e.message());
    }
}

inline ojson rotation_to_json(const Rotation& r) { return ojson::array({r.w(), r.x(), r.y(), r.z()}); }

inline RigidTransform transform_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) fail(ErrorCode::kParse, path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "quaternion" && it.key() != "translation") {
            fail(ErrorCode::kParse, path + "." + it.key() + ": unknown key");
        }
    }
    Rotation r;
    Vec3 t = Vec3::Zero();
    if (j.contains("quaternion")) r = rotation_from_json(j["quaternion"], path + ".quaternion");
    if (j.contains("translation")) t = vec3_from_json(j["translation"], path + ".translation");
    return RigidTransform(r, t);
}

inline ojson transform_to_json(const RigidTransform& t) {
    ojson j;
    j["quaternion"] = rotation_to_json(t.rotation());
    j["translation"] = vec3_to_json(t.translation());
    return j;
}

}  // namespace inspath::detail

namespace inspath::detail {

/// Rejects keys outside `allowed`, naming the offending path.
inline void check_keys(const nlohmann::json& j, const std::string& path, std::initializer_list<const char*> allowed,
                       ErrorCode code = ErrorCode::kParse) {
    if (!j.is_object()) fail(code, path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) fail(code, path + "." + it.key() + ": unknown key");
    }
}

inline double number_at(const nlohmann::json& j, const char* key, const std::string& path,
                        ErrorCode code = ErrorCode::kParse) {
    if (!j.contains(key)) fail(code, path + "." + key + ": missing");
    if (!j[key].is_number()) fail(code, path + "." + key + ": expected a number");
    return j[key].get<double>();
}

inline double number_or(const nlohmann::json& j, const char* key, double fallback, const std::string& path,
                        ErrorCode code = ErrorCode::kParse) {
    return j.contains(key) ? number_at(j, key, path, code) : fallback;
}

}  // namespace inspath::detail
