#pragma once

#include "nnenc/network.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace nnenc {

/// One training pair: input vector and ideal output vector.
struct Example {
    std::vector<double> input;
    std::vector<double> target;
};

struct TrainConfig {
    double eta = 0.06;
    std::size_t max_iterations = 100;
    std::uint64_t seed = 1;
    double init_half_width = 0.5;

    /// Throws ConfigError unless eta > 0, max_iterations >= 1, init_half_width >= 0.
    void validate() const;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// E before training followed by E after each iteration; length max_iterations + 1.
using ErrorHistory = std::vector<double>;

/// E = 1/2 sum_h sum_k (z_k - o_k)^2, accumulated in sample order.
double error(const NetworkParams& params, std::span<const Example> samples);

/// Exact partial derivatives of E, laid out like the parameters themselves.
/// Accumulation runs in ascending sample index.
NetworkParams gradient(const NetworkParams& params, std::span<const Example> samples);

/// E and its gradient from a single forward/backward sweep. Overwrites grad.
double error_and_gradient(const NetworkParams& params, std::span<const Example> samples,
                          NetworkParams& grad);

/// Every weight and bias drawn uniformly from [-half_width, half_width].
NetworkParams init_params(std::size_t inputs, std::size_t hidden, std::size_t outputs,
                          std::uint64_t seed, double half_width);

struct TrainResult {
    NetworkParams params;
    ErrorHistory history;
};

/// Full-batch gradient descent, params <- params - eta * dE/dparams.
/// Throws DivergenceError when E stops being finite.
TrainResult train(NetworkParams params, std::span<const Example> samples,
                  const TrainConfig& config);

struct GradCheckReport {
    bool passed = true;
    double max_relative_error = 0.0;
    /// Coordinate with the largest relative error; set only on failure.
    std::optional<ParamCoordinate> worst;
};

/// Central-difference comparison of an analytic gradient against E.
/// Relative error is |a - n| / max(|a|, |n|, 1e-12).
GradCheckReport grad_check(const NetworkParams& params, std::span<const Example> samples,
                           const NetworkParams& analytic, double step, double tolerance);

/// Same, using gradient() as the analytic side.
GradCheckReport grad_check(const NetworkParams& params, std::span<const Example> samples,
                           double step, double tolerance);

/// A random (params, samples) pair: inputs, hidden and outputs each drawn
/// from 1..max_width (hidden from 0..max_width), 1..max_samples samples,
/// weights and inputs uniform in [-1, 1], 0/1 targets.
struct GradCheckInstance {
    NetworkParams params;
    std::vector<Example> samples;
};

GradCheckInstance random_instance(std::uint64_t seed, std::size_t max_width = 5,
                                  std::size_t max_samples = 10);

struct GradCheckSuiteReport {
    bool passed = true;
    std::size_t instances = 0;
    double max_relative_error = 0.0;
    /// Seed and coordinate of the first failing instance.
    std::optional<std::uint64_t> failing_seed;
    std::optional<ParamCoordinate> failing_coordinate;
};

/// Checks `instances` random instances seeded with seed, seed + 1, ...
/// With corrupt set, the largest-magnitude entry of each analytic gradient
/// is doubled before comparison, which must make the suite fail.
GradCheckSuiteReport grad_check_suite(std::uint64_t seed, std::size_t instances, double step,
                                      double tolerance, bool corrupt = false);

}  // namespace nnenc
