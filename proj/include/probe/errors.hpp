#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace probe {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidGrid : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct NotConfining : Error { using Error::Error; };
struct NonPositive : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct NonPositiveFrequency : Error { using Error::Error; };
struct OutOfBox : Error { using Error::Error; };
struct UncertaintyViolated : Error { using Error::Error; };
struct UnknownLabel : Error { using Error::Error; };
struct BadPartition : Error { using Error::Error; };
struct DegenerateFit : Error { using Error::Error; };

struct OverlapGateFailed : Error {
    double max_overlap = 0.0;
    OverlapGateFailed(const std::string& msg, double overlap)
        : Error(msg), max_overlap(overlap) {}
};
struct NonPositiveLapse : Error { using Error::Error; };
struct FileNotFound : Error { using Error::Error; };

// Config validation reports every violation, not just the first.
struct SchemaError : Error {
    std::vector<std::string> violations;

    explicit SchemaError(std::vector<std::string> v)
        : Error(join(v)), violations(std::move(v)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "config schema violations:";
        for (const auto& s : v) {
            out += "\n  - ";
            out += s;
        }
        return out;
    }
};

}  // namespace probe
