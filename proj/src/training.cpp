#include "nnenc/training.hpp"

#include "nnenc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace nnenc {

void TrainConfig::validate() const
{
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw ConfigError("learning rate must be positive, got " + std::to_string(eta));
    }
    if (max_iterations < 1) throw ConfigError("max-iterations must be at least 1");
    if (!(init_half_width >= 0.0) || !std::isfinite(init_half_width)) {
        throw ConfigError("init-half-width must be non-negative");
    }
}

namespace {

void check_example(const NetworkParams& params, const Example& ex)
{
    if (ex.input.size() != params.inputs) {
        throw DimensionError("sample has " + std::to_string(ex.input.size()) +
                             " features, network expects " + std::to_string(params.inputs));
    }
    if (ex.target.size() != params.outputs) {
        throw DimensionError("target has width " + std::to_string(ex.target.size()) +
                             ", network has " + std::to_string(params.outputs) + " outputs");
    }
}

double sample_error(const std::vector<double>& output, const std::vector<double>& target)
{
    double e = 0.0;
    for (std::size_t k = 0; k < output.size(); ++k) {
        const double d = target[k] - output[k];
        e += d * d;
    }
    return e;
}

// params += scale * step, block by block.
void add_scaled(NetworkParams& params, double scale, const NetworkParams& step)
{
    auto axpy = [scale](std::span<double> dst, std::span<const double> src) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
    };
    axpy(params.V.values(), step.V.values());
    axpy(params.b1, step.b1);
    axpy(params.W.values(), step.W.values());
    axpy(params.b2, step.b2);
}

}  // namespace

double error(const NetworkParams& params, std::span<const Example> samples)
{
    double total = 0.0;
    for (const Example& ex : samples) {
        check_example(params, ex);
        total += sample_error(forward(params, ex.input).output, ex.target);
    }
    return 0.5 * total;
}

double error_and_gradient(const NetworkParams& params, std::span<const Example> samples,
                          NetworkParams& grad)
{
    grad = NetworkParams::zeros(params.inputs, params.hidden, params.outputs);
    std::vector<double> delta_out(params.outputs);
    std::vector<double> delta_hidden(params.hidden);
    double total = 0.0;

    for (const Example& ex : samples) {
        check_example(params, ex);
        const Activations a = forward(params, ex.input);
        total += sample_error(a.output, ex.target);
        const std::span<const double> fan_in =
            params.has_hidden_layer() ? std::span<const double>(a.hidden) : ex.input;

        // dE/d(net_k) for output node k, where net_k = W_k . y - b2_k.
        for (std::size_t k = 0; k < params.outputs; ++k) {
            const double o = a.output[k];
            delta_out[k] = (o - ex.target[k]) * o * (1.0 - o);
        }
        for (std::size_t k = 0; k < params.outputs; ++k) {
            auto gw = grad.W.row(k);
            for (std::size_t j = 0; j < fan_in.size(); ++j) gw[j] += delta_out[k] * fan_in[j];
            grad.b2[k] -= delta_out[k];
        }

        if (!params.has_hidden_layer()) continue;

        for (std::size_t j = 0; j < params.hidden; ++j) {
            double back = 0.0;
            for (std::size_t k = 0; k < params.outputs; ++k) back += delta_out[k] * params.W(k, j);
            const double y = a.hidden[j];
            delta_hidden[j] = back * y * (1.0 - y);
        }
        for (std::size_t j = 0; j < params.hidden; ++j) {
            auto gv = grad.V.row(j);
            for (std::size_t i = 0; i < params.inputs; ++i) gv[i] += delta_hidden[j] * ex.input[i];
            grad.b1[j] -= delta_hidden[j];
        }
    }
    return 0.5 * total;
}

NetworkParams gradient(const NetworkParams& params, std::span<const Example> samples)
{
    NetworkParams g;
    error_and_gradient(params, samples, g);
    return g;
}

NetworkParams init_params(std::size_t inputs, std::size_t hidden, std::size_t outputs,
                          std::uint64_t seed, double half_width)
{
    NetworkParams p = NetworkParams::zeros(inputs, hidden, outputs);
    if (half_width == 0.0) return p;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-half_width, half_width);
    const std::size_t count = parameter_count(p);
    for (std::size_t i = 0; i < count; ++i) parameter(p, i) = dist(rng);
    return p;
}

TrainResult train(NetworkParams params, std::span<const Example> samples,
                  const TrainConfig& config)
{
    config.validate();
    params.validate();

    TrainResult result;
    result.history.reserve(config.max_iterations + 1);

    auto record = [&](std::size_t iteration, double e) {
        if (!std::isfinite(e)) {
            throw DivergenceError("error function became non-finite at iteration " +
                                      std::to_string(iteration),
                                  iteration);
        }
        result.history.push_back(e);
    };

    NetworkParams grad;
    record(0, error_and_gradient(params, samples, grad));
    for (std::size_t it = 1; it <= config.max_iterations; ++it) {
        add_scaled(params, -config.eta, grad);
        // The last step needs E only.
        const double e = it < config.max_iterations ? error_and_gradient(params, samples, grad)
                                                    : error(params, samples);
        record(it, e);
    }
    result.params = std::move(params);
    return result;
}

GradCheckReport grad_check(const NetworkParams& params, std::span<const Example> samples,
                           const NetworkParams& analytic, double step, double tolerance)
{
    if (!(step > 0.0)) throw ConfigError("finite-difference step must be positive");
    if (parameter_count(analytic) != parameter_count(params)) {
        throw DimensionError("analytic gradient does not match parameter shape");
    }

    GradCheckReport report;
    std::size_t worst_index = 0;
    NetworkParams probe = params;
    for (std::size_t i = 0; i < parameter_count(params); ++i) {
        const double original = parameter(params, i);
        parameter(probe, i) = original + step;
        const double plus = error(probe, samples);
        parameter(probe, i) = original - step;
        const double minus = error(probe, samples);
        parameter(probe, i) = original;

        const double numeric = (plus - minus) / (2.0 * step);
        const double a = parameter(analytic, i);
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-12});
        const double rel = std::abs(a - numeric) / denom;
        if (rel > report.max_relative_error) {
            report.max_relative_error = rel;
            worst_index = i;
        }
    }
    report.passed = report.max_relative_error <= tolerance;
    if (!report.passed) report.worst = locate(params, worst_index);
    return report;
}

GradCheckReport grad_check(const NetworkParams& params, std::span<const Example> samples,
                           double step, double tolerance)
{
    return grad_check(params, samples, gradient(params, samples), step, tolerance);
}

GradCheckInstance random_instance(std::uint64_t seed, std::size_t max_width,
                                  std::size_t max_samples)
{
    std::mt19937_64 rng(seed);
    auto pick = [&rng](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    const std::size_t n = pick(1, max_width);
    const std::size_t m = pick(0, max_width);
    const std::size_t p = pick(1, max_width);
    const std::size_t count = pick(1, max_samples);

    GradCheckInstance inst;
    inst.params = init_params(n, m, p, rng(), 1.0);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::bernoulli_distribution bit(0.5);
    for (std::size_t h = 0; h < count; ++h) {
        Example ex;
        for (std::size_t i = 0; i < n; ++i) ex.input.push_back(value(rng));
        for (std::size_t k = 0; k < p; ++k) ex.target.push_back(bit(rng) ? 1.0 : 0.0);
        inst.samples.push_back(std::move(ex));
    }
    return inst;
}

GradCheckSuiteReport grad_check_suite(std::uint64_t seed, std::size_t instances, double step,
                                      double tolerance, bool corrupt)
{
    GradCheckSuiteReport suite;
    suite.instances = instances;
    for (std::size_t i = 0; i < instances; ++i) {
        const std::uint64_t instance_seed = seed + i;
        const GradCheckInstance inst = random_instance(instance_seed);
        NetworkParams analytic = gradient(inst.params, inst.samples);
        if (corrupt) {
            std::size_t largest = 0;
            for (std::size_t c = 1; c < parameter_count(analytic); ++c) {
                if (std::abs(parameter(analytic, c)) > std::abs(parameter(analytic, largest))) {
                    largest = c;
                }
            }
            parameter(analytic, largest) *= 2.0;
        }
        const GradCheckReport r = grad_check(inst.params, inst.samples, analytic, step, tolerance);
        suite.max_relative_error = std::max(suite.max_relative_error, r.max_relative_error);
        if (!r.passed && suite.passed) {
            suite.passed = false;
            suite.failing_seed = instance_seed;
            suite.failing_coordinate = r.worst;
        }
    }
    return suite;
}

}  // namespace nnenc
