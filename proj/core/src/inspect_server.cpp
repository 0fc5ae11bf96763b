#include "inspath/inspect_server.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <regex>
#include <unordered_set>

#include "config_json.hpp"
#include "httplib.h"
#include "inspath/error.hpp"
#include "inspath/io.hpp"
#include "inspath/pipeline.hpp"

namespace inspath {

namespace fs = std::filesystem;
using nlohmann::json;
using detail::ojson;

std::vector<std::size_t> thin_to_cap(const std::vector<Vec3>& points, std::size_t cap) {
    std::vector<std::size_t> all(points.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (points.size() <= cap) return all;
    if (cap == 0) return {};

    Vec3 lo = points[0], hi = points[0];
    for (const Vec3& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double extent = std::max((hi - lo).maxCoeff(), 1e-9);
    constexpr double kMaxCells = double(1 << 20);

    auto thin = [&](double voxel) {
        std::unordered_set<std::uint64_t> seen;
        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Vec3 c = ((points[i] - lo) / voxel).array().floor();
            const std::uint64_t key = (std::uint64_t(c.x()) << 42) | (std::uint64_t(c.y()) << 21) | std::uint64_t(c.z());
            if (seen.insert(key).second) {
                kept.push_back(i);
                if (kept.size() > cap) break;
            }
        }
        return kept;
    };

    // Bisect on log(voxel) for the smallest voxel that respects the cap.
    double small = extent / std::min(double(cap), kMaxCells - 1);
    double large = extent * 2.0;
    std::vector<std::size_t> best = thin(large);
    for (int iter = 0; iter < 24; ++iter) {
        const double mid = std::sqrt(small * large);
        std::vector<std::size_t> kept = thin(mid);
        if (kept.size() <= cap) {
            large = mid;
            best = std::move(kept);
        } else {
            small = mid;
        }
    }
    return best;
}

namespace {

struct Session {
    std::mutex mutex;
    RunRecord record;
};

HttpResponse json_response(int status, const ojson& body) { return {status, body.dump(2) + "\n"}; }

HttpResponse error_response(int status, const std::string& message) {
    ojson j;
    j["error"] = message;
    j["status"] = status;
    return json_response(status, j);
}

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidArgument:
        case ErrorCode::kEmptyProfile:
        case ErrorCode::kConfig:
        case ErrorCode::kParse:
        case ErrorCode::kDegenerateGeometry:
        case ErrorCode::kDegenerateHull: return 422;
        case ErrorCode::kState: return 409;
        default: return 500;
    }
}

std::string plan_file(std::size_t version) {
    char name[64];
    std::snprintf(name, sizeof name, "plans/plan-%04zu.json", version);
    return name;
}

ojson session_json(const std::string& id, const RunRecord& r) {
    ojson s;
    s["id"] = id;
    s["state"] = to_string(r.state);
    s["source"] = r.source;
    s["cluster_selection"] = detail::selection_to_json(r.config.cluster_selection);
    s["slice"] = detail::slices_to_json(r.config.slices);
    s["plan_version"] = r.plan_version;
    s["plan"] = r.plan_version > 0 ? ojson("/api/session/" + id + "/plan") : ojson(nullptr);
    s["error"] = r.error;
    s["warnings"] = r.warnings;
    return s;
}

bool has_checkpoint(const RunRecord& r) {
    return r.state == RunState::kAwaitingSelection || r.state == RunState::kPlanned;
}

}  // namespace

struct InspectServer::Impl {
    std::size_t point_cap;
    mutable std::mutex sessions_mutex;
    std::map<std::string, std::unique_ptr<Session>> sessions;
    httplib::Server http;

    Session* find(const std::string& id) {
        std::lock_guard lock(sessions_mutex);
        auto it = sessions.find(id);
        return it == sessions.end() ? nullptr : it->second.get();
    }

    HttpResponse clusters(const std::string& id, Session& s) {
        std::lock_guard lock(s.mutex);
        const RunRecord& r = s.record;
        if (!has_checkpoint(r)) return error_response(409, "session is " + to_string(r.state) + "; no clusters yet");
        ojson j = ojson::parse(cluster_summaries_to_json(r.clusters));
        const std::vector<std::size_t> keep = thin_to_cap(r.processed.points, point_cap);
        ojson positions = ojson::array(), labels = ojson::array(), colors = ojson::array();
        for (std::size_t i : keep) {
            const Vec3& p = r.processed.points[i];
            positions.push_back(p.x());
            positions.push_back(p.y());
            positions.push_back(p.z());
            labels.push_back(r.clusters.labels[i]);
            if (r.processed.has_colors()) {
                const Vec3& c = r.processed.colors[i];
                colors.push_back(c.x());
                colors.push_back(c.y());
                colors.push_back(c.z());
            }
        }
        j["id"] = id;
        j["total_points"] = r.processed.size();
        j["point_count"] = keep.size();
        j["thinned"] = keep.size() < r.processed.size();
        j["positions"] = std::move(positions);
        j["labels"] = std::move(labels);
        j["colors"] = std::move(colors);
        return json_response(200, j);
    }

    HttpResponse selection(const std::string& id, Session& s, const std::string& body) {
        std::lock_guard lock(s.mutex);
        const RunRecord& r = s.record;
        if (!has_checkpoint(r)) return error_response(409, "session is " + to_string(r.state) + "; cannot select");
        Selection sel;
        try {
            const json j = detail::parse_json(body, "selection");
            if (!j.is_object()) fail(ErrorCode::kParse, "selection: expected an object");
            detail::check_keys(j, "selection", {"ids", "slice"});
            if (!j.contains("ids")) fail(ErrorCode::kParse, "selection.ids: required");
            sel.clusters = detail::selection_from_json(j.at("ids"), "ids");
            if (sel.clusters.policy == SelectionPolicy::kInteractive) {
                fail(ErrorCode::kInvalidArgument, "ids: give cluster ids or \"largest\"");
            }
            if (sel.clusters.policy == SelectionPolicy::kIds && sel.clusters.ids.empty()) {
                fail(ErrorCode::kEmptyProfile, "ids: selection is empty");
            }
            if (j.contains("slice")) sel.slices = detail::slices_from_json(j.at("slice"), r.config.voxel, "slice");
            RunRecord next = resume(r, sel);
            s.record = std::move(next);
        } catch (const Error& e) {
            return error_response(status_for(e.code()), e.what());
        }
        ojson out;
        out["id"] = id;
        out["state"] = to_string(s.record.state);
        out["version"] = s.record.plan_version;
        out["plan"] = "/api/session/" + id + "/plan?version=" + std::to_string(s.record.plan_version);
        out["file"] = plan_file(s.record.plan_version);
        out["targets"] = s.record.final_targets();
        out["warnings"] = s.record.warnings;
        return json_response(202, out);
    }

    HttpResponse plan(Session& s, const std::string& query) {
        std::lock_guard lock(s.mutex);
        const RunRecord& r = s.record;
        if (r.state != RunState::kPlanned || r.plan_version == 0) {
            return error_response(409, "session is " + to_string(r.state) + "; no plan yet");
        }
        std::string rel = "plan.json";
        std::smatch m;
        if (std::regex_search(query, m, std::regex("(?:^|&)version=([^&]*)"))) {
            std::size_t v = 0;
            try {
                v = std::stoul(m[1].str());
            } catch (const std::exception&) {
                return error_response(422, "version: expected a positive integer");
            }
            if (v == 0 || v > r.plan_version) return error_response(404, "no plan version " + m[1].str());
            rel = plan_file(v);
        }
        try {
            return {200, read_text_file(r.run_dir / rel)};
        } catch (const Error& e) {
            return error_response(500, e.what());
        }
    }

    HttpResponse plans(const std::string& id, Session& s) {
        std::lock_guard lock(s.mutex);
        ojson j;
        j["id"] = id;
        j["current"] = s.record.plan_version;
        j["versions"] = ojson::array();
        for (std::size_t v = 1; v <= s.record.plan_version; ++v) {
            ojson e;
            e["version"] = v;
            e["file"] = plan_file(v);
            e["url"] = "/api/session/" + id + "/plan?version=" + std::to_string(v);
            j["versions"].push_back(e);
        }
        return json_response(200, j);
    }
};

InspectServer::InspectServer(std::size_t point_cap) : impl_(std::make_unique<Impl>()) {
    impl_->point_cap = point_cap;
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        const HttpResponse out = handle(req.method, req.target, req.body);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    impl_->http.Get(".*", forward);
    impl_->http.Post(".*", forward);
    impl_->http.Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    impl_->http.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    // httplib's default adds SO_REUSEPORT, which lets a second server share
    // a busy port instead of failing.
    impl_->http.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof yes);
    });
}

InspectServer::~InspectServer() { stop(); }

std::string InspectServer::add_run(const fs::path& run_dir) {
    auto session = std::make_unique<Session>();
    session->record = load_run(run_dir);
    std::string id = fs::absolute(run_dir).lexically_normal().filename().string();
    if (id.empty()) id = fs::absolute(run_dir).lexically_normal().parent_path().filename().string();
    std::lock_guard lock(impl_->sessions_mutex);
    if (impl_->sessions.count(id)) fail(ErrorCode::kInvalidArgument, "duplicate session id '" + id + "'");
    impl_->sessions.emplace(id, std::move(session));
    return id;
}

std::vector<std::string> InspectServer::session_ids() const {
    std::lock_guard lock(impl_->sessions_mutex);
    std::vector<std::string> ids;
    for (const auto& [id, s] : impl_->sessions) ids.push_back(id);
    return ids;
}

HttpResponse InspectServer::handle(const std::string& method, const std::string& target, const std::string& body) {
    const std::size_t q = target.find('?');
    const std::string path = target.substr(0, q);
    const std::string query = q == std::string::npos ? "" : target.substr(q + 1);

    if (path == "/api/sessions") {
        if (method != "GET") return error_response(405, "method not allowed");
        ojson list = ojson::array();
        for (const std::string& id : session_ids()) {
            Session* s = impl_->find(id);
            std::lock_guard lock(s->mutex);
            list.push_back(session_json(id, s->record));
        }
        ojson j;
        j["sessions"] = std::move(list);
        return json_response(200, j);
    }

    static const std::regex route(R"(^/api/session/([^/]+)(?:/(clusters|selection|plan|plans))?/?$)");
    std::smatch m;
    if (!std::regex_match(path, m, route)) return error_response(404, "no route for " + path);
    const std::string id = m[1].str();
    const std::string what = m[2].str();
    Session* s = impl_->find(id);
    if (!s) return error_response(404, "unknown session '" + id + "'");

    const std::string expected = what == "selection" ? "POST" : "GET";
    if (method != expected) return error_response(405, "method not allowed");
    try {
        if (what.empty()) {
            std::lock_guard lock(s->mutex);
            return json_response(200, session_json(id, s->record));
        }
        if (what == "clusters") return impl_->clusters(id, *s);
        if (what == "selection") return impl_->selection(id, *s, body);
        if (what == "plan") return impl_->plan(*s, query);
        return impl_->plans(id, *s);
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

int InspectServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->http.bind_to_any_port(host);
        if (bound < 0) fail(ErrorCode::kIo, "cannot bind " + host);
        return bound;
    }
    if (!impl_->http.bind_to_port(host, port)) fail(ErrorCode::kIo, "port " + std::to_string(port) + " is busy");
    return port;
}

void InspectServer::listen() { impl_->http.listen_after_bind(); }

void InspectServer::stop() {
    if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace inspath
