#include "nnenc/experiment.hpp"

#include "nnenc/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

namespace nnenc {

ProtocolDefaults defaults_for_classes(int classes)
{
    switch (classes) {
        case 4: return {2, 0.06, 100};
        case 8: return {3, 0.1, 500};
        case 10: return {4, 0.08, 100};
        case 11: return {4, 0.1, 200};
        case 26: return {5, 0.08, 500};
        default: break;
    }
    return {static_cast<std::size_t>(output_width(SchemeKind::Binary, classes)), 0.1, 200};
}

double accuracy(const NetworkParams& params, std::span<const Sample> samples,
                const EncodingScheme& scheme)
{
    if (static_cast<std::size_t>(scheme.width()) != params.outputs) {
        throw DimensionError("scheme width " + std::to_string(scheme.width()) +
                             " does not match network outputs " + std::to_string(params.outputs));
    }
    if (samples.empty()) return 0.0;
    std::size_t correct = 0;
    for (const Sample& s : samples) {
        const Decision d = decode(scheme, forward(params, s.x).output);
        if (!d.is_rejected() && d.class_index() == s.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

std::vector<Example> make_examples(std::span<const Sample> samples, const EncodingScheme& scheme)
{
    std::vector<Example> out;
    out.reserve(samples.size());
    for (const Sample& s : samples) out.push_back({s.x, scheme.encode(s.label)});
    return out;
}

namespace {

RunResult run_fold(const Dataset& data, const FoldPlan& plan, const EncodingScheme& scheme,
                   std::size_t hidden, const TrainConfig& base, bool normalize, int repeat,
                   int fold)
{
    Dataset train_set = data.subset(plan.train_indices(fold));
    Dataset test_set = data.subset(plan.test_indices(fold));
    if (normalize) {
        const MinMaxTable table = MinMaxTable::fit(train_set);
        train_set = table.apply(train_set);
        test_set = table.apply(test_set);
    }

    TrainConfig config = base;
    config.seed = derive_seed(base.seed, static_cast<std::uint64_t>(repeat),
                              static_cast<std::uint64_t>(fold));
    const NetworkParams init =
        init_params(data.features(), hidden, static_cast<std::size_t>(scheme.width()), config.seed,
                    config.init_half_width);
    const std::vector<Example> examples = make_examples(train_set.samples(), scheme);

    TrainResult trained;
    try {
        trained = train(init, examples, config);
    } catch (const DivergenceError& e) {
        throw DivergenceError("repeat " + std::to_string(repeat) + ", fold " +
                                  std::to_string(fold) + ": " + e.what(),
                              e.iteration());
    }

    RunResult r;
    r.repeat = repeat;
    r.fold = fold;
    r.scheme = scheme.kind();
    r.train_accuracy = accuracy(trained.params, train_set.samples(), scheme);
    r.test_accuracy = accuracy(trained.params, test_set.samples(), scheme);
    r.history = std::move(trained.history);
    return r;
}

}  // namespace

ExperimentReport run_cross_validation(const Dataset& data, SchemeKind scheme_kind,
                                      std::size_t hidden, const TrainConfig& train,
                                      int folds, int repeats, const RunOptions& options)
{
    train.validate();
    if (repeats < 1) throw ConfigError("repeats must be at least 1");
    const EncodingScheme scheme(scheme_kind, data.classes());

    ExperimentReport report;
    report.scheme = scheme_kind;
    report.protocol = {data.size(), data.features(), data.classes(), folds, repeats, hidden, train,
                       options.normalize};

    for (int t = 1; t <= repeats; ++t) {
        report.fold_plans.push_back(
            stratified_kfold(data, folds, derive_seed(train.seed, static_cast<std::uint64_t>(t))));
    }

    const std::size_t tasks = static_cast<std::size_t>(folds) * static_cast<std::size_t>(repeats);
    report.runs.resize(tasks);
    std::vector<std::exception_ptr> failures(tasks);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < tasks; i = next++) {
            const int t = static_cast<int>(i / static_cast<std::size_t>(folds)) + 1;
            const int j = static_cast<int>(i % static_cast<std::size_t>(folds)) + 1;
            try {
                report.runs[i] = run_fold(data, report.fold_plans[static_cast<std::size_t>(t - 1)],
                                          scheme, hidden, train, options.normalize, t, j);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    const unsigned jobs = std::max(1U, std::min<unsigned>(options.jobs, static_cast<unsigned>(tasks)));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
    }

    // Report the first failure in (repeat, fold) order, whatever finished first.
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    aggregate(report);
    return report;
}

void aggregate(ExperimentReport& report)
{
    const auto& runs = report.runs;
    if (runs.empty()) throw Error("cannot aggregate an empty report");

    double sum_train = 0.0;
    double sum_test = 0.0;
    report.best_train = runs.front().train_accuracy;
    report.best_test = runs.front().test_accuracy;
    const RunResult* best_run = &runs.front();
    const std::size_t length = runs.front().history.size();
    report.averaged_error_curve.assign(length, 0.0);

    for (const RunResult& r : runs) {
        if (r.history.size() != length) throw Error("runs have error histories of different length");
        sum_train += r.train_accuracy;
        sum_test += r.test_accuracy;
        report.best_train = std::max(report.best_train, r.train_accuracy);
        report.best_test = std::max(report.best_test, r.test_accuracy);
        if (r.final_error() < best_run->final_error()) best_run = &r;
        for (std::size_t i = 0; i < length; ++i) report.averaged_error_curve[i] += r.history[i];
    }

    const double n = static_cast<double>(runs.size());
    report.avg_train = sum_train / n;
    report.avg_test = sum_test / n;
    for (double& v : report.averaged_error_curve) v /= n;
    report.best_error_curve = best_run->history;
}

std::string format_percent(double fraction)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f%%", fraction * 100.0);
    return buf;
}

double ComparisonTable::difference(std::size_t row) const
{
    const auto& v = values(row);
    return v.back() - v.front();
}

std::string ComparisonTable::to_text() const
{
    std::size_t label_width = 0;
    for (const char* name : kRowNames) label_width = std::max(label_width, std::string(name).size());

    std::vector<std::string> headers;
    for (SchemeKind k : schemes_) headers.push_back(std::string(scheme_name(k)) + " approach");

    std::ostringstream os;
    auto cell = [&os](const std::string& text, std::size_t width) {
        os << " | " << text << std::string(width > text.size() ? width - text.size() : 0, ' ');
    };
    std::vector<std::size_t> widths;
    for (const auto& h : headers) widths.push_back(std::max<std::size_t>(h.size(), 8));

    os << std::string(label_width, ' ');
    for (std::size_t c = 0; c < headers.size(); ++c) cell(headers[c], widths[c]);
    os << '\n';
    for (std::size_t r = 0; r < kRowNames.size(); ++r) {
        const std::string name = kRowNames[r];
        os << name << std::string(label_width - name.size(), ' ');
        for (std::size_t c = 0; c < schemes_.size(); ++c) cell(format_percent(rows_[r][c]), widths[c]);
        os << '\n';
    }
    return os.str();
}

ComparisonTable compare(std::span<const ExperimentReport> reports)
{
    if (reports.empty()) throw Error("nothing to compare");
    ComparisonTable table;
    for (const ExperimentReport& r : reports) {
        if (!(r.protocol == reports.front().protocol)) {
            throw Error("cannot compare reports produced under different protocols");
        }
        table.schemes_.push_back(r.scheme);
        table.rows_[0].push_back(r.avg_train);
        table.rows_[1].push_back(r.best_train);
        table.rows_[2].push_back(r.avg_test);
        table.rows_[3].push_back(r.best_test);
    }
    return table;
}

ComparisonTable compare(const ExperimentReport& a, const ExperimentReport& b)
{
    const std::array<ExperimentReport, 2> pair{a, b};
    return compare(pair);
}

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_report(std::ostream& os, const ExperimentReport& report)
{
    const std::string scheme(scheme_name(report.scheme));
    os << "repeat,fold,scheme,train_acc,test_acc,final_E\n";
    for (const RunResult& r : report.runs) {
        os << r.repeat << ',' << r.fold << ',' << scheme_name(r.scheme) << ','
           << num(r.train_accuracy) << ',' << num(r.test_accuracy) << ',' << num(r.final_error())
           << '\n';
    }
    const Protocol& p = report.protocol;
    os << "# protocol,samples=" << p.samples << ",features=" << p.features
       << ",classes=" << p.classes << ",folds=" << p.folds << ",repeats=" << p.repeats
       << ",hidden=" << p.hidden << ",eta=" << num(p.train.eta)
       << ",iterations=" << p.train.max_iterations << ",seed=" << p.train.seed
       << ",init_half_width=" << num(p.train.init_half_width)
       << ",normalization=" << (p.normalize ? "minmax" : "none") << '\n';
    os << "# aggregate,scheme,avg_train,best_train,avg_test,best_test\n";
    os << "# aggregate," << scheme << ',' << num(report.avg_train) << ',' << num(report.best_train)
       << ',' << num(report.avg_test) << ',' << num(report.best_test) << '\n';
}

void write_curve(std::ostream& os, std::span<const double> curve)
{
    for (std::size_t i = 0; i < curve.size(); ++i) os << i << ' ' << num(curve[i]) << '\n';
}

}  // namespace nnenc
