#pragma once

#include <stdexcept>
#include <string>

namespace mflat {

/// Invalid parameters or dataset specification (CLI exit code 2).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable or malformed input data (CLI exit code 3).
class ingestion_error : public std::runtime_error {
public:
    explicit ingestion_error(const std::string& what) : std::runtime_error(what) {}
};

/// A deformation step produced non-finite coordinates (CLI exit code 4).
class divergence_error : public std::runtime_error {
public:
    divergence_error(const std::string& what, int step)
        : std::runtime_error(what), step_(step) {}

    int step() const noexcept { return step_; }

private:
    int step_;
};

}  // namespace mflat
