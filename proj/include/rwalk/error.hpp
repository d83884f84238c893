#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwalk {

struct InvalidParameter : std::runtime_error {
    explicit InvalidParameter(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

// Random-graph construction exhausted its connectivity retry budget.
struct ConstructionFailure : std::runtime_error {
    int attempts;
    explicit ConstructionFailure(int attempts_)
        : std::runtime_error("graph construction failed after " + std::to_string(attempts_) +
                             " attempts (disconnected samples)"),
          attempts(attempts_) {}
};

// Iterative chain computation (power iteration / mixing time) hit its budget.
struct NonConvergence : std::runtime_error {
    std::uint64_t iterations;
    double residual;
    std::vector<double> last_iterate;  // may be empty for mixing-time failures
    NonConvergence(const std::string& what_, std::uint64_t iterations_, double residual_,
                   std::vector<double> last = {})
        : std::runtime_error(what_ + " (iterations=" + std::to_string(iterations_) +
                             ", residual=" + std::to_string(residual_) + ")"),
          iterations(iterations_),
          residual(residual_),
          last_iterate(std::move(last)) {}
};

// SGD iterate left the representable range.
struct DivergenceError : std::runtime_error {
    std::uint64_t iteration;
    explicit DivergenceError(std::uint64_t iteration_)
        : std::runtime_error("model diverged at update " + std::to_string(iteration_)),
          iteration(iteration_) {}
};

struct RankDeficiency : std::runtime_error {
    double condition;
    explicit RankDeficiency(double condition_)
        : std::runtime_error("normal matrix is singular or ill-conditioned (cond~" +
                             std::to_string(condition_) + ")"),
          condition(condition_) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rwalk
