#include "nnenc/errors.hpp"
#include "nnenc/network.hpp"
#include "nnenc/training.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace nnenc;

namespace {

// n = m = p = 1 with V = 2, b1 = 1, W = 3, b2 = 0.
NetworkParams tiny_net()
{
    NetworkParams p = NetworkParams::zeros(1, 1, 1);
    p.V(0, 0) = 2.0;
    p.b1[0] = 1.0;
    p.W(0, 0) = 3.0;
    p.b2[0] = 0.0;
    return p;
}

}  // namespace

TEST(Sigmoid, KnownValues)
{
    EXPECT_EQ(sigmoid(0.0), 0.5);
    // 30-digit reference: 0.731058578630004879...
    EXPECT_NEAR(sigmoid(1.0), 0.7310585786300049, 1e-15);
}

TEST(Sigmoid, SymmetryAndRange)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> t(-40.0, 40.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = t(rng);
        EXPECT_NEAR(sigmoid(v) + sigmoid(-v), 1.0, 1e-15);
        EXPECT_GE(sigmoid(v), 0.0);
        EXPECT_LE(sigmoid(v), 1.0);
    }
}

TEST(Sigmoid, LargeArgumentsStayFinite)
{
    for (double t : {-1e6, -745.0, -500.0, 500.0, 745.0, 1e6}) {
        EXPECT_TRUE(std::isfinite(sigmoid(t))) << t;
    }
    EXPECT_LT(sigmoid(-500.0), 1e-200);
    EXPECT_EQ(sigmoid(500.0), 1.0);
}

TEST(Forward, ZeroParamsGiveOneHalf)
{
    const NetworkParams p = NetworkParams::zeros(3, 2, 4);
    const Activations a = forward(p, std::vector<double>{1.0, -2.0, 7.0});
    ASSERT_EQ(a.hidden.size(), 2u);
    ASSERT_EQ(a.output.size(), 4u);
    for (double y : a.hidden) EXPECT_EQ(y, 0.5);
    for (double o : a.output) EXPECT_EQ(o, 0.5);
}

TEST(Forward, HandEvaluatedTinyNet)
{
    const Activations a = forward(tiny_net(), std::vector<double>{1.0});
    // mpmath: y = f(1), o = f(3 f(1)) = f(2.19317573589001463...)
    EXPECT_NEAR(a.hidden[0], 0.7310585786300049, 1e-15);
    EXPECT_NEAR(a.output[0], 0.8996350136597180, 1e-15);
}

TEST(Forward, BiasIsSubtracted)
{
    NetworkParams p = NetworkParams::zeros(1, 0, 1);
    p.b2[0] = 2.0;
    EXPECT_NEAR(forward(p, std::vector<double>{0.0}).output[0], sigmoid(-2.0), 1e-16);
}

TEST(Forward, SaturatedOutputUnderflowsQuietly)
{
    NetworkParams p = NetworkParams::zeros(1, 0, 1);
    p.W(0, 0) = -1000.0;
    const double o = forward(p, std::vector<double>{1.0}).output[0];
    EXPECT_LT(o, 1e-200);
    EXPECT_GE(o, 0.0);
}

TEST(Forward, NoHiddenLayerMapsInputsDirectly)
{
    NetworkParams p = NetworkParams::zeros(2, 0, 1);
    p.W(0, 0) = 1.0;
    p.W(0, 1) = -1.0;
    const Activations a = forward(p, std::vector<double>{0.3, 0.1});
    EXPECT_TRUE(a.hidden.empty());
    EXPECT_NEAR(a.output[0], sigmoid(0.2), 1e-16);
}

TEST(Forward, DimensionMismatchThrows)
{
    const NetworkParams p = NetworkParams::zeros(3, 2, 1);
    EXPECT_THROW(forward(p, std::vector<double>{1.0, 2.0}), DimensionError);
}

TEST(Forward, MonotoneAlongPositivePath)
{
    NetworkParams p = NetworkParams::zeros(1, 1, 1);
    p.V(0, 0) = 1.5;
    p.W(0, 0) = 2.0;
    double prev = -1.0;
    for (double x = -3.0; x <= 3.0; x += 0.25) {
        const double o = forward(p, std::vector<double>{x}).output[0];
        EXPECT_GT(o, prev);
        prev = o;
    }
}

TEST(Forward, FiniteAndDeterministicOnRandomNets)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const NetworkParams p = init_params(4, 3, 2, seed, 30.0);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-100.0, 100.0);
        const std::vector<double> x{u(rng), u(rng), u(rng), u(rng)};
        const Activations a = forward(p, x);
        const Activations b = forward(p, x);
        EXPECT_EQ(a.output, b.output);
        for (double o : a.output) {
            EXPECT_TRUE(std::isfinite(o));
            EXPECT_GE(o, 0.0);
            EXPECT_LE(o, 1.0);
        }
    }
}

TEST(Params, ValidateCatchesShapeErrors)
{
    NetworkParams p = NetworkParams::zeros(3, 2, 2);
    EXPECT_NO_THROW(p.validate());
    p.b1.push_back(0.0);
    EXPECT_THROW(p.validate(), DimensionError);

    NetworkParams q = NetworkParams::zeros(3, 2, 2);
    q.W(1, 1) = std::nan("");
    EXPECT_THROW(q.validate(), Error);
}

TEST(Params, FlatIndexingCoversEveryEntryInOrder)
{
    NetworkParams p = NetworkParams::zeros(3, 2, 2);
    ASSERT_EQ(parameter_count(p), 6u + 2u + 4u + 2u);
    EXPECT_EQ(locate(p, 0), (ParamCoordinate{ParamBlock::V, 0, 0}));
    EXPECT_EQ(locate(p, 5), (ParamCoordinate{ParamBlock::V, 1, 2}));
    EXPECT_EQ(locate(p, 6), (ParamCoordinate{ParamBlock::b1, 0, 0}));
    EXPECT_EQ(locate(p, 8), (ParamCoordinate{ParamBlock::W, 0, 0}));
    EXPECT_EQ(locate(p, 13), (ParamCoordinate{ParamBlock::b2, 1, 0}));
    EXPECT_THROW(locate(p, 14), DimensionError);

    parameter(p, 11) = 4.0;
    EXPECT_EQ(p.W(1, 1), 4.0);
    EXPECT_EQ(to_string(locate(p, 11)), "W[1][1]");
}

TEST(Serialization, RoundTripIsBitExact)
{
    for (std::size_t hidden : {0u, 3u}) {
        const NetworkParams p = init_params(4, hidden, 2, 99, 0.5);
        std::stringstream ss;
        write_params(ss, p);
        const NetworkParams q = read_params(ss);
        EXPECT_EQ(p, q);
    }
}

TEST(Serialization, FormatHeader)
{
    std::stringstream ss;
    write_params(ss, tiny_net());
    EXPECT_EQ(ss.str(), "nnenc-params 1\ndims 1 1 1\nV\n2\nb1\n1\nW\n3\nb2\n0\n");
}

TEST(Serialization, MalformedInputIsDataError)
{
    std::istringstream bad_magic("something 1\n");
    EXPECT_THROW(read_params(bad_magic), DataError);

    std::istringstream short_row("nnenc-params 1\ndims 2 1 1\nV\n1\nb1\n0\nW\n1\nb2\n0\n");
    EXPECT_THROW(read_params(short_row), DataError);

    std::istringstream junk("nnenc-params 1\ndims 1 0 1\nV\nb1\nW\nabc\nb2\n0\n");
    EXPECT_THROW(read_params(junk), DataError);
}
