#include "nnenc/network.hpp"

#include "nnenc/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace nnenc {

NetworkParams NetworkParams::zeros(std::size_t inputs, std::size_t hidden, std::size_t outputs)
{
    NetworkParams p;
    p.inputs = inputs;
    p.hidden = hidden;
    p.outputs = outputs;
    p.V = Matrix(hidden, hidden > 0 ? inputs : 0);
    p.b1.assign(hidden, 0.0);
    p.W = Matrix(outputs, hidden > 0 ? hidden : inputs);
    p.b2.assign(outputs, 0.0);
    return p;
}

void NetworkParams::validate() const
{
    const std::size_t v_cols = hidden > 0 ? inputs : 0;
    if (V.rows() != hidden || V.cols() != v_cols || b1.size() != hidden ||
        W.rows() != outputs || W.cols() != output_fan_in() || b2.size() != outputs) {
        throw DimensionError("network parameters have inconsistent shapes");
    }
    for (std::size_t i = 0; i < parameter_count(*this); ++i) {
        if (!std::isfinite(parameter(*this, i))) {
            throw Error("non-finite network parameter at " + to_string(locate(*this, i)));
        }
    }
}

namespace {

// out_j = f(M_j . in - bias_j)
void layer(const Matrix& m, const std::vector<double>& bias, std::span<const double> in,
           std::vector<double>& out)
{
    out.resize(m.rows());
    for (std::size_t j = 0; j < m.rows(); ++j) {
        const auto w = m.row(j);
        double net = 0.0;
        for (std::size_t i = 0; i < in.size(); ++i) net += w[i] * in[i];
        out[j] = sigmoid(net - bias[j]);
    }
}

}  // namespace

Activations forward(const NetworkParams& params, std::span<const double> x)
{
    if (x.size() != params.inputs) {
        throw DimensionError("forward: expected " + std::to_string(params.inputs) +
                             " inputs, got " + std::to_string(x.size()));
    }
    Activations a;
    if (params.has_hidden_layer()) {
        layer(params.V, params.b1, x, a.hidden);
        layer(params.W, params.b2, a.hidden, a.output);
    } else {
        layer(params.W, params.b2, x, a.output);
    }
    return a;
}

std::string to_string(const ParamCoordinate& c)
{
    switch (c.block) {
        case ParamBlock::V: return "V[" + std::to_string(c.row) + "][" + std::to_string(c.col) + "]";
        case ParamBlock::W: return "W[" + std::to_string(c.row) + "][" + std::to_string(c.col) + "]";
        case ParamBlock::b1: return "b1[" + std::to_string(c.row) + "]";
        case ParamBlock::b2: return "b2[" + std::to_string(c.row) + "]";
    }
    return "?";
}

std::size_t parameter_count(const NetworkParams& p) noexcept
{
    return p.V.values().size() + p.b1.size() + p.W.values().size() + p.b2.size();
}

ParamCoordinate locate(const NetworkParams& p, std::size_t index)
{
    std::size_t i = index;
    const std::size_t nv = p.V.values().size();
    if (i < nv) return {ParamBlock::V, i / p.V.cols(), i % p.V.cols()};
    i -= nv;
    if (i < p.b1.size()) return {ParamBlock::b1, i, 0};
    i -= p.b1.size();
    const std::size_t nw = p.W.values().size();
    if (i < nw) return {ParamBlock::W, i / p.W.cols(), i % p.W.cols()};
    i -= nw;
    if (i < p.b2.size()) return {ParamBlock::b2, i, 0};
    throw DimensionError("parameter index " + std::to_string(index) + " out of range");
}

double& parameter(NetworkParams& p, std::size_t index)
{
    const ParamCoordinate c = locate(p, index);
    switch (c.block) {
        case ParamBlock::V: return p.V(c.row, c.col);
        case ParamBlock::b1: return p.b1[c.row];
        case ParamBlock::W: return p.W(c.row, c.col);
        case ParamBlock::b2: return p.b2[c.row];
    }
    throw DimensionError("bad parameter block");
}

double parameter(const NetworkParams& p, std::size_t index)
{
    return parameter(const_cast<NetworkParams&>(p), index);
}

namespace {

constexpr const char* kParamsMagic = "nnenc-params";

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_row(std::ostream& os, std::span<const double> row)
{
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ' ';
        os << format_double(row[i]);
    }
    os << '\n';
}

void write_matrix(std::ostream& os, const char* tag, const Matrix& m)
{
    os << tag << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) write_row(os, m.row(r));
}

void write_vector(std::ostream& os, const char* tag, const std::vector<double>& v)
{
    os << tag << '\n';
    if (!v.empty()) write_row(os, v);
}

class LineReader {
public:
    explicit LineReader(std::istream& is) : is_(is) {}

    std::string next()
    {
        std::string line;
        if (!std::getline(is_, line)) throw DataError("unexpected end of parameter data", line_ + 1);
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    void expect(const std::string& tag)
    {
        if (next() != tag) throw DataError("expected '" + tag + "'", line_);
    }

    std::vector<double> values(std::size_t count)
    {
        const std::string line = next();
        std::istringstream ss(line);
        std::vector<double> out;
        std::string tok;
        while (ss >> tok) {
            double v = 0.0;
            // from_chars for doubles is exact and locale-independent.
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
                throw DataError("bad number '" + tok + "'", line_);
            }
            out.push_back(v);
        }
        if (out.size() != count) {
            throw DataError("expected " + std::to_string(count) + " values, got " +
                                std::to_string(out.size()),
                            line_);
        }
        return out;
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::istream& is_;
    std::size_t line_ = 0;
};

void read_matrix(LineReader& in, const char* tag, Matrix& m)
{
    in.expect(tag);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = in.values(m.cols());
        std::copy(row.begin(), row.end(), m.row(r).begin());
    }
}

void read_vector(LineReader& in, const char* tag, std::vector<double>& v)
{
    in.expect(tag);
    if (!v.empty()) v = in.values(v.size());
}

}  // namespace

void write_params(std::ostream& os, const NetworkParams& p)
{
    os << kParamsMagic << " 1\n";
    os << "dims " << p.inputs << ' ' << p.hidden << ' ' << p.outputs << '\n';
    write_matrix(os, "V", p.V);
    write_vector(os, "b1", p.b1);
    write_matrix(os, "W", p.W);
    write_vector(os, "b2", p.b2);
}

NetworkParams read_params(std::istream& is)
{
    LineReader in(is);
    in.expect(std::string(kParamsMagic) + " 1");

    std::istringstream dims(in.next());
    std::string tag;
    std::size_t n = 0, m = 0, p = 0;
    if (!(dims >> tag >> n >> m >> p) || tag != "dims" || n == 0 || p == 0) {
        throw DataError("malformed dims line", in.line());
    }

    NetworkParams params = NetworkParams::zeros(n, m, p);
    read_matrix(in, "V", params.V);
    read_vector(in, "b1", params.b1);
    read_matrix(in, "W", params.W);
    read_vector(in, "b2", params.b2);
    params.validate();
    return params;
}

}  // namespace nnenc
