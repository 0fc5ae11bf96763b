#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace inspath {

enum class ErrorCode {
    kInvalidArgument,
    kDegenerateHull,
    kDegenerateGeometry,
    kInsufficientFrames,
    kEmptyProfile,
    kParse,
    kConfig,
    kIo,
    kState,
    kInternal,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code and, once it has passed
// through the pipeline, the name of the stage that produced it.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string stage = {});

    ErrorCode code() const noexcept { return code_; }
    const std::string& stage() const noexcept { return stage_; }
    const std::string& message() const noexcept { return message_; }

    Error with_stage(std::string stage) const;

private:
    ErrorCode code_;
    std::string stage_;
    std::string message_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace inspath
