#include "inspath/error.hpp"

namespace inspath {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidArgument: return "invalid-argument";
        case ErrorCode::kDegenerateHull: return "degenerate-hull";
        case ErrorCode::kDegenerateGeometry: return "degenerate-geometry";
        case ErrorCode::kInsufficientFrames: return "insufficient-frames";
        case ErrorCode::kEmptyProfile: return "empty-profile";
        case ErrorCode::kParse: return "parse-error";
        case ErrorCode::kConfig: return "config-error";
        case ErrorCode::kIo: return "io-error";
        case ErrorCode::kState: return "state-error";
        case ErrorCode::kInternal: return "internal-error";
    }
    return "unknown";
}

namespace {
std::string compose_what(ErrorCode code, const std::string& message, const std::string& stage) {
    std::string what;
    if (!stage.empty()) what += "[" + stage + "] ";
    what += std::string(to_string(code));
    what += ": ";
    what += message;
    return what;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::string stage)
    : std::runtime_error(compose_what(code, message, stage)),
      code_(code),
      stage_(std::move(stage)),
      message_(message) {}

Error Error::with_stage(std::string stage) const { return Error(code_, message_, std::move(stage)); }

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace inspath
