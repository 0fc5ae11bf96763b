#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "inspath/geom.hpp"

namespace inspath {

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Session API over one or more run directories. Each run directory is a
/// session named after its directory; session state lives in the run dir so a
/// restarted server sees exactly what the previous one left.
///
///   GET  /api/sessions
///   GET  /api/session/{id}
///   GET  /api/session/{id}/clusters
///   POST /api/session/{id}/selection   {"ids": [..] | "largest", "slice": {..} | [..]}
///   GET  /api/session/{id}/plan[?version=N]
///   GET  /api/session/{id}/plans
///
/// Selections on one session are serialized. Invalid operator input maps to
/// 4xx and leaves the session as it was.
class InspectServer {
public:
    static constexpr std::size_t kDefaultPointCap = 100000;

    explicit InspectServer(std::size_t point_cap = kDefaultPointCap);
    ~InspectServer();
    InspectServer(const InspectServer&) = delete;
    InspectServer& operator=(const InspectServer&) = delete;

    /// Loads a run directory; returns the session id. Throws io-error when the
    /// directory holds no run and invalid-argument on a duplicate id.
    std::string add_run(const std::filesystem::path& run_dir);
    std::vector<std::string> session_ids() const;

    /// Dispatches one request without touching the network. `target` may carry
    /// a query string.
    HttpResponse handle(const std::string& method, const std::string& target, const std::string& body = {});

    /// Binds to host:port (0 picks a free port) and returns the bound port.
    /// Throws io-error when the port is taken.
    int bind(const std::string& host, int port);
    /// Serves until stop() is called from another thread.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Indices of at most `cap` points: one representative (the lowest index) per
/// voxel, growing the voxel until the cap holds. Returned in ascending order;
/// all indices when the cloud already fits.
std::vector<std::size_t> thin_to_cap(const std::vector<Vec3>& points, std::size_t cap);

}  // namespace inspath
