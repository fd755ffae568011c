#pragma once

#include <stdexcept>
#include <string>

namespace roadseg {

// Base error carrying an optional pipeline stage name so front ends can
// report which step failed without losing the error category.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}

    void set_stage(const std::string& stage) {
        if (stage_.empty()) {
            stage_ = stage;
            full_ = stage_ + ": " + std::runtime_error::what();
        }
    }

    const char* what() const noexcept override {
        return full_.empty() ? std::runtime_error::what() : full_.c_str();
    }

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
    std::string full_;
};

// Dimension or argument mismatch while building a raster or config.
class SizeError : public Error { public: using Error::Error; };

// No usable data (no valid pixels, empty histogram, ...).
class EmptyInputError : public Error { public: using Error::Error; };

// Fewer samples than model degrees of freedom.
class UnderdeterminedError : public Error { public: using Error::Error; };

// Rank-deficient fit geometry (e.g. all pixels on one row).
class DegenerateGeometryError : public Error { public: using Error::Error; };

// Histogram cannot be split (constant population).
class DegenerateHistogramError : public Error { public: using Error::Error; };

// Iterative refinement failed to settle.
class NonConvergenceError : public Error { public: using Error::Error; };

// File reading/writing problems, including unsupported formats.
class IoError : public Error { public: using Error::Error; };

}  // namespace roadseg
