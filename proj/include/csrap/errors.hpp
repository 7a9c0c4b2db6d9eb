#pragma once
#include <stdexcept>
#include <string>

namespace csrap {

struct EmptyMotionError : std::invalid_argument {
    EmptyMotionError() : std::invalid_argument("motion estimate has no samples") {}
};

struct DegenerateTrackError : std::invalid_argument {
    explicit DegenerateTrackError(const std::string& what) : std::invalid_argument(what) {}
};

struct ZeroAccuracyError : std::invalid_argument {
    ZeroAccuracyError() : std::invalid_argument("last inspection accuracy is zero") {}
};

struct UnknownRatioError : std::invalid_argument {
    explicit UnknownRatioError(double ratio)
        : std::invalid_argument("ratio " + std::to_string(ratio) + " not present in accuracy profile") {}
};

struct NoFeasibleCanvasError : std::runtime_error {
    NoFeasibleCanvasError() : std::runtime_error("no candidate canvas size satisfies the resource constraints") {}
};

struct ScheduleInfeasibleError : std::runtime_error {
    explicit ScheduleInfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace csrap
