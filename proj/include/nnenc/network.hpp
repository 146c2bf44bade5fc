#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nnenc {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Weights and biases of a feedforward net with at most one hidden layer.
///
/// Hidden units compute f(V_j . x - b1_j) and outputs f(W_k . y - b2_k); the
/// biases are subtracted. With hidden == 0 the hidden layer is absent, V and
/// b1 are empty and W is outputs x inputs.
struct NetworkParams {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::size_t outputs = 0;
    Matrix V;                    // hidden x inputs
    std::vector<double> b1;      // hidden
    Matrix W;                    // outputs x (hidden, or inputs when hidden == 0)
    std::vector<double> b2;      // outputs

    /// All-zero parameters of the given shape.
    static NetworkParams zeros(std::size_t inputs, std::size_t hidden, std::size_t outputs);

    bool has_hidden_layer() const noexcept { return hidden > 0; }
    /// Width of the layer feeding the output nodes.
    std::size_t output_fan_in() const noexcept { return hidden > 0 ? hidden : inputs; }

    /// Throws DimensionError on inconsistent shapes, nnenc::Error on non-finite entries.
    void validate() const;

    friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

/// Logistic function 1 / (1 + exp(-t)), evaluated without overflow for any finite t.
inline double sigmoid(double t) noexcept
{
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

struct Activations {
    std::vector<double> hidden;  // empty without a hidden layer
    std::vector<double> output;
};

/// Forward pass. Throws DimensionError if x.size() != params.inputs.
Activations forward(const NetworkParams& params, std::span<const double> x);

// Flat coordinate view over all parameters, ordered V (row-major), b1, W, b2.

enum class ParamBlock { V, b1, W, b2 };

struct ParamCoordinate {
    ParamBlock block;
    std::size_t row;
    std::size_t col;  // 0 for bias vectors

    friend bool operator==(const ParamCoordinate&, const ParamCoordinate&) = default;
};

std::string to_string(const ParamCoordinate& c);

std::size_t parameter_count(const NetworkParams& params) noexcept;
double& parameter(NetworkParams& params, std::size_t index);
double parameter(const NetworkParams& params, std::size_t index);
ParamCoordinate locate(const NetworkParams& params, std::size_t index);

// Text serialization:
//
//   nnenc-params 1
//   dims <inputs> <hidden> <outputs>
//   V          followed by `hidden` rows of `inputs` values
//   b1         followed by one line of `hidden` values
//   W          followed by `outputs` rows of fan-in values
//   b2         followed by one line of `outputs` values
//
// Values are printed with 17 significant digits so a reload is bit-exact.
// Empty blocks keep their tag line and have no value lines.

void write_params(std::ostream& os, const NetworkParams& params);
/// Throws DataError on malformed input.
NetworkParams read_params(std::istream& is);

}  // namespace nnenc
