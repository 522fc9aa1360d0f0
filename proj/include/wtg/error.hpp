#pragma once

#include <stdexcept>
#include <string>

namespace wtg {

// Every failure the library reports carries the pipeline stage that raised it
// and a short machine-readable kind, e.g. {"parse", "unknown_location"}.
class Error : public std::runtime_error {
public:
    Error(std::string stage, std::string kind, std::string detail)
        : std::runtime_error(stage + "/" + kind + ": " + detail),
          stage_(std::move(stage)), kind_(std::move(kind)), detail_(std::move(detail)) {}

    const std::string& stage() const { return stage_; }
    const std::string& kind() const { return kind_; }
    const std::string& detail() const { return detail_; }

private:
    std::string stage_, kind_, detail_;
};

}  // namespace wtg
