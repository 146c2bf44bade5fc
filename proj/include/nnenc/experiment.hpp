#pragma once

#include "nnenc/data.hpp"
#include "nnenc/encoding.hpp"
#include "nnenc/network.hpp"
#include "nnenc/training.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nnenc {

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for repeat t: mix64(mix64(master) ^ t).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t repeat) noexcept
{
    return mix64(mix64(master) ^ repeat);
}

/// Seed for (repeat t, fold j): mix64(derive_seed(master, t) ^ (j << 32)).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t repeat,
                                    std::uint64_t fold) noexcept
{
    return mix64(derive_seed(master, repeat) ^ (fold << 32));
}

/// Hidden width, learning rate and iteration budget used for each benchmark
/// class count (4, 8, 10, 11, 26). Other class counts get hidden = ceil(log2 r),
/// which matches all five, with eta 0.1 and 200 iterations.
struct ProtocolDefaults {
    std::size_t hidden;
    double eta;
    std::size_t iterations;
};

ProtocolDefaults defaults_for_classes(int classes);

/// Fraction of samples decoded to their own label. Rejections count as wrong.
/// Throws DimensionError if the scheme width differs from params.outputs.
double accuracy(const NetworkParams& params, std::span<const Sample> samples,
                const EncodingScheme& scheme);

/// Pairs each sample's features with scheme.encode(label).
std::vector<Example> make_examples(std::span<const Sample> samples, const EncodingScheme& scheme);

struct RunResult {
    int repeat = 0;  // 1..repeats
    int fold = 0;    // 1..folds
    SchemeKind scheme = SchemeKind::OneToOne;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    ErrorHistory history;

    double final_error() const { return history.back(); }
};

/// Everything that must agree for two reports to be comparable.
struct Protocol {
    std::size_t samples = 0;
    std::size_t features = 0;
    int classes = 0;
    int folds = 0;
    int repeats = 0;
    std::size_t hidden = 0;
    TrainConfig train;
    bool normalize = true;

    friend bool operator==(const Protocol&, const Protocol&) = default;
};

struct ExperimentReport {
    SchemeKind scheme = SchemeKind::OneToOne;
    Protocol protocol;
    std::vector<FoldPlan> fold_plans;  // one per repeat
    std::vector<RunResult> runs;       // sorted by (repeat, fold)
    double avg_train = 0.0;
    double best_train = 0.0;
    double avg_test = 0.0;
    double best_test = 0.0;
    ErrorHistory averaged_error_curve;  // pointwise mean over runs
    ErrorHistory best_error_curve;      // history of the run with the lowest final E
};

struct RunOptions {
    unsigned jobs = 1;
    bool normalize = true;  // min-max fitted on the training folds
};

/// Repeated stratified k-fold cross-validation. Repeat t draws its folds with
/// derive_seed(master, t) and run (t, j) initialises with
/// derive_seed(master, t, j), where master = train.seed; neither depends on
/// the scheme. The report is identical for any number of jobs.
/// DivergenceError from a run is rethrown with its (repeat, fold).
ExperimentReport run_cross_validation(const Dataset& data, SchemeKind scheme, std::size_t hidden,
                                      const TrainConfig& train, int folds, int repeats,
                                      const RunOptions& options = {});

/// Recomputes the aggregates and curves from report.runs.
void aggregate(ExperimentReport& report);

/// 0.96582 -> "96.582%"
std::string format_percent(double fraction);

class ComparisonTable {
public:
    static constexpr std::array<const char*, 4> kRowNames{
        "average training accuracy", "highest training accuracy", "average test accuracy",
        "highest test accuracy"};

    const std::vector<SchemeKind>& schemes() const noexcept { return schemes_; }
    /// values(row)[column] as a fraction.
    const std::vector<double>& values(std::size_t row) const { return rows_.at(row); }
    /// Last column minus first column.
    double difference(std::size_t row) const;

    std::string to_text() const;

private:
    friend ComparisonTable compare(std::span<const ExperimentReport> reports);
    std::vector<SchemeKind> schemes_;
    std::array<std::vector<double>, 4> rows_;
};

/// Four accuracy rows, one column per report. Throws Error when the reports
/// were produced under different protocols.
ComparisonTable compare(std::span<const ExperimentReport> reports);
ComparisonTable compare(const ExperimentReport& a, const ExperimentReport& b);

/// One CSV row per run (repeat, fold, scheme, train_acc, test_acc, final_E)
/// followed by '#'-prefixed protocol and aggregate lines.
void write_report(std::ostream& os, const ExperimentReport& report);

/// Two columns: iteration and E.
void write_curve(std::ostream& os, std::span<const double> curve);

}  // namespace nnenc
