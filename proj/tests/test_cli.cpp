#include "nnenc/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace nnenc;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "nnenc");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() /
              ("nnenc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        blobs = (dir / "blobs.csv").string();
        const Result r = run({"gen-synthetic", "--kind", "blobs", "--classes", "4", "--points", "5",
                              "--spread", "0.1", "--seed", "3", "--out", blobs});
        ASSERT_EQ(r.code, 0) << r.err;
    }
    void TearDown() override { fs::remove_all(dir); }

    fs::path dir;
    std::string blobs;
};

}  // namespace

TEST_F(Cli, TrainWritesModelAndHistoryDeterministically)
{
    const std::string out1 = (dir / "a").string();
    const std::string out2 = (dir / "b").string();
    const std::vector<std::string> common{"train", "--data", blobs, "--scheme", "binary", "--hidden",
                                          "2", "--eta", "0.06", "--iters", "100", "--seed", "7"};
    auto args1 = common;
    args1.insert(args1.end(), {"--output-dir", out1});
    auto args2 = common;
    args2.insert(args2.end(), {"--output-dir", out2});

    const Result r1 = run(args1);
    ASSERT_EQ(r1.code, 0) << r1.err;
    EXPECT_NE(r1.out.find("final E: "), std::string::npos);
    EXPECT_NE(r1.out.find("training accuracy: "), std::string::npos);
    ASSERT_TRUE(fs::exists(fs::path(out1) / "model.txt"));
    ASSERT_TRUE(fs::exists(fs::path(out1) / "history.txt"));
    EXPECT_FALSE(fs::exists(fs::path(out1) / "model.txt.tmp"));

    ASSERT_EQ(run(args2).code, 0);
    EXPECT_EQ(slurp(fs::path(out1) / "model.txt"), slurp(fs::path(out2) / "model.txt"));

    std::istringstream history(slurp(fs::path(out1) / "history.txt"));
    int lines = 0;
    for (std::string l; std::getline(history, l);) ++lines;
    EXPECT_EQ(lines, 101);
}

TEST_F(Cli, EvalScoresSavedModel)
{
    const std::string out = (dir / "m").string();
    ASSERT_EQ(run({"train", "--data", blobs, "--scheme", "one-to-one", "--iters", "300", "--eta",
                   "0.5", "--output-dir", out})
                  .code,
              0);
    const Result r = run({"eval", "--model", out + "/model.txt", "--data", blobs});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("samples: 20"), std::string::npos);
    EXPECT_NE(r.out.find("accuracy: "), std::string::npos);
}

TEST_F(Cli, UnknownSchemeIsUsageError)
{
    const Result r = run({"train", "--data", blobs, "--scheme", "onehot", "--output-dir", dir.string()});
    EXPECT_EQ(r.code, cli::kUsage);
    EXPECT_NE(r.err.find("one-to-one, binary, reduced-one-hot"), std::string::npos) << r.err;
}

TEST_F(Cli, MissingRequiredFlagIsUsageError)
{
    EXPECT_EQ(run({"train", "--scheme", "binary"}).code, cli::kUsage);
    EXPECT_EQ(run({}).code, cli::kUsage);
    EXPECT_EQ(run({"bogus"}).code, cli::kUsage);
}

TEST_F(Cli, MissingDataFileIsDataError)
{
    const Result r = run({"train", "--data", (dir / "nope.csv").string(), "--scheme", "binary",
                          "--output-dir", dir.string()});
    EXPECT_EQ(r.code, cli::kDataError);
}

TEST_F(Cli, DivergenceExitCode)
{
    const fs::path wild = dir / "wild.csv";
    {
        std::ofstream out(wild);
        out << "1e300,1,0\n0,1,1\n";
    }
    const Result r = run({"train", "--data", wild.string(), "--scheme", "binary", "--hidden", "0",
                          "--eta", "1e10", "--iters", "5", "--no-normalize", "--init-half-width", "0", "--output-dir",
                          dir.string()});
    EXPECT_EQ(r.code, cli::kDivergence) << r.err;
    EXPECT_NE(r.err.find("iteration 1"), std::string::npos) << r.err;
}

TEST_F(Cli, ExperimentSmoke)
{
    const std::string out = (dir / "exp").string();
    const Result r = run({"experiment", "--data", blobs, "--folds", "2", "--repeats", "1",
                          "--output-dir", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("one-to-one: 2 runs"), std::string::npos);
    EXPECT_NE(r.out.find("binary: 2 runs"), std::string::npos);
    EXPECT_NE(r.out.find("average training accuracy"), std::string::npos);
    for (const char* f : {"report_one-to-one.csv", "report_binary.csv", "comparison.txt",
                          "curve_average_binary.txt", "curve_best_one-to-one.txt"}) {
        EXPECT_TRUE(fs::exists(fs::path(out) / f)) << f;
    }
}

TEST_F(Cli, ExperimentWithThreeSchemes)
{
    const std::string out = (dir / "exp3").string();
    const Result r = run({"experiment", "--data", blobs, "--folds", "2", "--repeats", "1",
                          "--schemes", "one-to-one,binary,reduced-one-hot", "--jobs", "3",
                          "--output-dir", out});
    ASSERT_EQ(r.code, 0) << r.err;
    int reports = 0;
    for (const auto& e : fs::directory_iterator(out)) {
        if (e.path().filename().string().rfind("report_", 0) == 0) ++reports;
    }
    EXPECT_EQ(reports, 3);
}

TEST_F(Cli, ExperimentOutputIndependentOfJobs)
{
    const std::string a = (dir / "j1").string();
    const std::string b = (dir / "j4").string();
    ASSERT_EQ(run({"experiment", "--data", blobs, "--folds", "5", "--repeats", "2", "--iters", "20",
                   "--output-dir", a, "--jobs", "1"})
                  .code,
              0);
    ASSERT_EQ(run({"experiment", "--data", blobs, "--folds", "5", "--repeats", "2", "--iters", "20",
                   "--output-dir", b, "--jobs", "4"})
                  .code,
              0);
    for (const char* f : {"report_binary.csv", "report_one-to-one.csv", "comparison.txt"}) {
        EXPECT_EQ(slurp(fs::path(a) / f), slurp(fs::path(b) / f)) << f;
    }
}

TEST_F(Cli, ConfigFileSuppliesValues)
{
    const fs::path cfg = dir / "run.conf";
    {
        std::ofstream out(cfg);
        out << "eta = 0.2\nmax-iterations = 7\nseed = 5\nhidden = 3\n";
    }
    const std::string out = (dir / "cfg").string();
    const Result r = run({"train", "--config", cfg.string(), "--data", blobs, "--scheme", "binary",
                          "--output-dir", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("network 2-3-2"), std::string::npos) << r.out;
    std::istringstream history(slurp(fs::path(out) / "history.txt"));
    int lines = 0;
    for (std::string l; std::getline(history, l);) ++lines;
    EXPECT_EQ(lines, 8);

    // Flags override the file.
    const Result o = run({"train", "--config", cfg.string(), "--data", blobs, "--scheme", "binary",
                          "--hidden", "0", "--output-dir", out});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("network 2-0-2"), std::string::npos) << o.out;
}

TEST_F(Cli, GenSyntheticQuadrant)
{
    const std::string path = (dir / "q.csv").string();
    const Result r = run({"gen-synthetic", "--kind", "quadrant", "--points", "6", "--margin", "0.2",
                          "--out", path});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(slurp(path));
    int rows = 0;
    for (std::string l; std::getline(in, l);) ++rows;
    EXPECT_EQ(rows, 24);
    EXPECT_EQ(run({"gen-synthetic", "--kind", "spiral", "--out", path}).code, cli::kUsage);
}

TEST_F(Cli, GradCheck)
{
    const Result ok = run({"gradcheck"});
    EXPECT_EQ(ok.code, 0) << ok.err;
    EXPECT_NE(ok.out.find("instances: 100"), std::string::npos);

    const Result bad = run({"gradcheck", "--corrupt", "--instances", "5"});
    EXPECT_EQ(bad.code, cli::kGradCheckFailed);
    EXPECT_NE(bad.err.find("instance seed"), std::string::npos);

    const Result a = run({"gradcheck", "--seed", "42", "--instances", "10"});
    const Result b = run({"gradcheck", "--seed", "42", "--instances", "10"});
    EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, HelpDocumentsFlagsAndSchemes)
{
    const Result top = run({"--help"});
    EXPECT_EQ(top.code, 0);
    for (const char* cmd : {"train", "eval", "experiment", "gen-synthetic", "gradcheck"}) {
        EXPECT_NE(top.out.find(cmd), std::string::npos) << cmd;
    }

    const Result train = run({"train", "--help"});
    EXPECT_EQ(train.code, 0);
    for (const char* flag : {"--data", "--scheme", "--hidden", "--eta", "--max-iterations", "--seed",
                             "--init-half-width", "--output-dir", "--config",
                             "one-to-one, binary, reduced-one-hot"}) {
        EXPECT_NE(train.out.find(flag), std::string::npos) << flag;
    }

    const Result exp = run({"experiment", "--help"});
    for (const char* flag : {"--schemes", "--folds", "--repeats", "--jobs",
                             "one-to-one, binary, reduced-one-hot"}) {
        EXPECT_NE(exp.out.find(flag), std::string::npos) << flag;
    }
    EXPECT_NE(run({"gradcheck", "--help"}).out.find("--corrupt"), std::string::npos);
    EXPECT_NE(run({"eval", "--help"}).out.find("--model"), std::string::npos);
    EXPECT_NE(run({"gen-synthetic", "--help"}).out.find("--margin"), std::string::npos);
}
