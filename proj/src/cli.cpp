#include "nnenc/cli.hpp"

#include "nnenc/data.hpp"
#include "nnenc/encoding.hpp"
#include "nnenc/errors.hpp"
#include "nnenc/experiment.hpp"
#include "nnenc/io.hpp"
#include "nnenc/training.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

namespace nnenc::cli {

namespace fs = std::filesystem;

namespace {

// Flags shared by train and experiment. Unset optionals fall back to the
// defaults for the dataset's class count.
struct ModelFlags {
    std::string data;
    std::optional<std::size_t> hidden;
    std::optional<double> eta;
    std::optional<std::size_t> iterations;
    std::uint64_t seed = 1;
    double init_half_width = 0.5;
    bool no_normalize = false;
    std::string output_dir = ".";

    void add_to(CLI::App& app)
    {
        app.add_option("--data", data, "CSV dataset: numeric features, integer label last")
            ->required();
        app.add_option("--hidden", hidden,
                       "Hidden-layer width; 0 removes the hidden layer (default: by class count)");
        app.add_option("--eta", eta, "Learning rate (default: by class count)");
        app.add_option("--iters,--max-iterations", iterations,
                       "Full-batch gradient steps (default: by class count)");
        app.add_option("--seed", seed, "Master random seed")->capture_default_str();
        app.add_option("--init-half-width", init_half_width,
                       "Initial weights are uniform in [-w, w]")
            ->capture_default_str();
        app.add_flag("--no-normalize", no_normalize, "Skip min-max scaling of features");
        app.add_option("--output-dir", output_dir, "Directory for output files")
            ->capture_default_str();
    }

    std::size_t hidden_for(const Dataset& d) const
    {
        return hidden.value_or(defaults_for_classes(d.classes()).hidden);
    }

    TrainConfig train_config(const Dataset& d) const
    {
        const ProtocolDefaults def = defaults_for_classes(d.classes());
        TrainConfig c;
        c.eta = eta.value_or(def.eta);
        c.max_iterations = iterations.value_or(def.iterations);
        c.seed = seed;
        c.init_half_width = init_half_width;
        c.validate();
        return c;
    }
};

const std::string kSchemeHelp = "Output encoding: one of " + scheme_names();

SchemeKind scheme_or_throw(const std::string& name)
{
    const auto kind = parse_scheme(name);
    if (!kind) {
        throw ConfigError("unknown scheme '" + name + "'; valid names: " + scheme_names());
    }
    return *kind;
}

void ensure_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir);
}

std::string percent(double v) { return format_percent(v); }

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run_train(const ModelFlags& flags, const std::string& scheme_name_arg, std::ostream& out)
{
    const SchemeKind kind = scheme_or_throw(scheme_name_arg);
    const Dataset raw = load_csv(flags.data);
    const TrainConfig config = flags.train_config(raw);
    const std::size_t hidden = flags.hidden_for(raw);
    const EncodingScheme scheme(kind, raw.classes());

    Model model{scheme, raw.source_labels(), std::nullopt, {}};
    Dataset data = raw;
    if (!flags.no_normalize) {
        auto norm = normalize_minmax(raw);
        data = std::move(norm.data);
        model.normalization = std::move(norm.table);
    }

    const auto examples = make_examples(data.samples(), scheme);
    const NetworkParams init = init_params(data.features(), hidden,
                                           static_cast<std::size_t>(scheme.width()), config.seed,
                                           config.init_half_width);
    TrainResult result = train(init, examples, config);
    model.params = std::move(result.params);

    ensure_dir(flags.output_dir);
    const fs::path dir(flags.output_dir);
    write_file_atomic(dir / "model.txt", [&](std::ostream& os) { write_model(os, model); });
    write_file_atomic(dir / "history.txt",
                      [&](std::ostream& os) { write_curve(os, result.history); });

    out << "network " << data.features() << '-' << hidden << '-' << scheme.width() << " ("
        << scheme_name(kind) << ")\n";
    out << "final E: " << num(result.history.back()) << '\n';
    out << "training accuracy: " << percent(accuracy(model.params, data.samples(), scheme)) << '\n';
    return kSuccess;
}

int run_eval(const std::string& model_path, const std::string& data_path, std::ostream& out)
{
    std::ifstream in(model_path);
    if (!in) throw DataError("cannot open " + model_path);
    const Model model = read_model(in);
    const Dataset raw = load_csv(data_path);

    // The evaluation file numbers its own classes; translate through the
    // source labels so they line up with the model's classes.
    std::map<long long, int> model_class;
    for (std::size_t c = 0; c < model.source_labels.size(); ++c) {
        model_class[model.source_labels[c]] = static_cast<int>(c) + 1;
    }
    std::vector<Sample> samples;
    samples.reserve(raw.size());
    for (const Sample& s : raw.samples()) {
        const long long label = raw.source_labels()[static_cast<std::size_t>(s.label - 1)];
        int cls = static_cast<int>(label);
        if (!model_class.empty()) {
            const auto it = model_class.find(label);
            if (it == model_class.end()) {
                throw DataError("label " + std::to_string(label) + " is unknown to the model");
            }
            cls = it->second;
        }
        std::vector<double> x = model.normalization ? model.normalization->apply(s.x) : s.x;
        samples.push_back({std::move(x), cls});
    }

    const double acc = accuracy(model.params, samples, model.scheme);
    out << "samples: " << samples.size() << '\n';
    out << "accuracy: " << percent(acc) << '\n';
    return kSuccess;
}

struct ExperimentFlags {
    std::string schemes = "one-to-one,binary";
    int folds = 5;
    int repeats = 20;
    unsigned jobs = 1;
};

std::vector<SchemeKind> parse_scheme_list(const std::string& list)
{
    std::vector<SchemeKind> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t comma = std::min(list.find(',', start), list.size());
        const SchemeKind k = scheme_or_throw(list.substr(start, comma - start));
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
        start = comma + 1;
    }
    return out;
}

int run_experiment(const ModelFlags& flags, const ExperimentFlags& ex, std::ostream& out)
{
    const std::vector<SchemeKind> schemes = parse_scheme_list(ex.schemes);
    const Dataset data = load_csv(flags.data);
    const TrainConfig config = flags.train_config(data);
    const std::size_t hidden = flags.hidden_for(data);
    RunOptions options;
    options.jobs = std::max(1U, ex.jobs);
    options.normalize = !flags.no_normalize;

    ensure_dir(flags.output_dir);
    const fs::path dir(flags.output_dir);
    std::vector<ExperimentReport> reports;
    for (SchemeKind kind : schemes) {
        ExperimentReport report =
            run_cross_validation(data, kind, hidden, config, ex.folds, ex.repeats, options);
        const std::string name(scheme_name(kind));
        write_file_atomic(dir / ("report_" + name + ".csv"),
                          [&](std::ostream& os) { write_report(os, report); });
        write_file_atomic(dir / ("curve_average_" + name + ".txt"),
                          [&](std::ostream& os) { write_curve(os, report.averaged_error_curve); });
        write_file_atomic(dir / ("curve_best_" + name + ".txt"),
                          [&](std::ostream& os) { write_curve(os, report.best_error_curve); });
        out << name << ": " << report.runs.size() << " runs\n";
        reports.push_back(std::move(report));
    }

    const std::string table = compare(reports).to_text();
    write_file_atomic(dir / "comparison.txt", [&](std::ostream& os) { os << table; });
    out << table;
    return kSuccess;
}

struct SyntheticFlags {
    std::string kind = "blobs";
    int classes = 4;
    std::size_t points = 50;
    double margin = 0.1;
    double spread = 0.15;
    std::size_t dimension = 2;
    std::uint64_t seed = 1;
    std::string out;
};

int run_gen_synthetic(const SyntheticFlags& f, std::ostream& out)
{
    Dataset data;
    if (f.kind == "quadrant") {
        data = make_quadrant_dataset(f.points, f.margin, f.seed);
    } else if (f.kind == "blobs") {
        data = make_blobs_dataset(f.classes, f.points, f.spread, f.seed, f.dimension);
    } else {
        throw ConfigError("unknown dataset kind '" + f.kind + "'; valid kinds: quadrant, blobs");
    }
    write_file_atomic(f.out, [&](std::ostream& os) { write_csv(os, data); });
    out << "wrote " << data.size() << " samples (" << data.features() << " features, "
        << data.classes() << " classes) to " << f.out << '\n';
    return kSuccess;
}

struct GradCheckFlags {
    std::size_t instances = 100;
    std::uint64_t seed = 1;
    double step = 1e-5;
    double tolerance = 1e-5;
    bool corrupt = false;
};

int run_gradcheck(const GradCheckFlags& f, std::ostream& out, std::ostream& err)
{
    if (!(f.step > 0.0)) throw ConfigError("--step must be positive");
    const GradCheckSuiteReport r =
        grad_check_suite(f.seed, f.instances, f.step, f.tolerance, f.corrupt);
    out << "instances: " << r.instances << '\n';
    out << "max relative error: " << num(r.max_relative_error) << '\n';
    if (r.passed) {
        out << "PASS\n";
        return kSuccess;
    }
    err << "gradient check failed: instance seed " << *r.failing_seed << ", coordinate "
        << (r.failing_coordinate ? to_string(*r.failing_coordinate) : "?") << '\n';
    return kGradCheckFailed;
}

// Reads `key = value` lines ('#' starts a comment) as `--key=value` tokens.
std::vector<std::string> config_tokens(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::vector<std::string> tokens;
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string t) {
        const auto b = t.find_first_not_of(" \t\r");
        const auto e = t.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

// Splices the contents of `--config FILE` in right after the subcommand name,
// so options given on the command line come later and win.
std::vector<std::string> expand_config(std::vector<std::string> args)
{
    std::optional<std::string> path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (!path || args.size() < 2) return args;
    const auto tokens = config_tokens(*path);
    args.insert(args.begin() + 2, tokens.begin(), tokens.end());
    return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Feedforward networks with one-to-one, binary and reduced-one-hot output encodings",
                 "nnenc"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every command");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_path;
    auto add_config = [&config_path](CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "Configuration file of `key = value` lines naming long options "
                        "(e.g. eta = 0.06); command-line flags take precedence");
    };

    ModelFlags train_flags;
    std::string train_scheme;
    auto* train_cmd = app.add_subcommand("train", "Train one network on a whole dataset");
    add_config(train_cmd);
    train_flags.add_to(*train_cmd);
    train_cmd->add_option("--scheme", train_scheme, kSchemeHelp)->required();

    std::string model_path;
    std::string eval_data;
    auto* eval_cmd = app.add_subcommand("eval", "Score a saved model on a dataset");
    eval_cmd->add_option("--model", model_path, "Model file written by train")->required();
    eval_cmd->add_option("--data", eval_data, "CSV dataset")->required();
    add_config(eval_cmd);

    ModelFlags exp_flags;
    ExperimentFlags exp;
    auto* exp_cmd = app.add_subcommand(
        "experiment", "Repeated stratified k-fold cross-validation for several encodings");
    add_config(exp_cmd);
    exp_flags.add_to(*exp_cmd);
    exp_cmd->add_option("--schemes", exp.schemes,
                        "Comma-separated encodings, each one of " + scheme_names())
        ->capture_default_str();
    exp_cmd->add_option("--folds", exp.folds, "Folds per repeat")->capture_default_str();
    exp_cmd->add_option("--repeats", exp.repeats, "Cross-validation repeats")->capture_default_str();
    exp_cmd->add_option("--jobs", exp.jobs, "Parallel runs; output does not depend on it")
        ->capture_default_str();

    SyntheticFlags syn;
    auto* gen_cmd = app.add_subcommand("gen-synthetic", "Write a synthetic dataset as CSV");
    gen_cmd->add_option("--kind", syn.kind, "quadrant or blobs")->capture_default_str();
    gen_cmd->add_option("--classes", syn.classes, "Class count (blobs)")->capture_default_str();
    gen_cmd->add_option("--points", syn.points, "Points per class")->capture_default_str();
    gen_cmd->add_option("--margin", syn.margin, "Minimum distance from the axes (quadrant)")
        ->capture_default_str();
    gen_cmd->add_option("--spread", syn.spread, "Cluster standard deviation (blobs)")
        ->capture_default_str();
    gen_cmd->add_option("--dimension", syn.dimension, "Feature count: 2 or >= classes (blobs)")
        ->capture_default_str();
    gen_cmd->add_option("--seed", syn.seed, "Random seed")->capture_default_str();
    gen_cmd->add_option("--out", syn.out, "Output CSV path")->required();
    add_config(gen_cmd);

    GradCheckFlags gc;
    auto* gc_cmd = app.add_subcommand(
        "gradcheck", "Compare backpropagation with central differences on random networks");
    gc_cmd->add_option("--instances", gc.instances, "Random instances")->capture_default_str();
    gc_cmd->add_option("--seed", gc.seed, "Seed of the first instance")->capture_default_str();
    gc_cmd->add_option("--step", gc.step, "Finite-difference step")->capture_default_str();
    gc_cmd->add_option("--tolerance", gc.tolerance, "Maximum relative error")
        ->capture_default_str();
    gc_cmd->add_flag("--corrupt", gc.corrupt, "Double one analytic partial (fault injection)");
    add_config(gc_cmd);

    std::vector<std::string> expanded;
    try {
        expanded = expand_config(args);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    std::vector<const char*> argv;
    for (const auto& a : expanded) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (*train_cmd) return run_train(train_flags, train_scheme, out);
        if (*eval_cmd) return run_eval(model_path, eval_data, out);
        if (*exp_cmd) return run_experiment(exp_flags, exp, out);
        if (*gen_cmd) return run_gen_synthetic(syn, out);
        if (*gc_cmd) return run_gradcheck(gc, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DivergenceError& e) {
        err << "diverged: " << e.what() << '\n';
        return kDivergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsage;
}

}  // namespace nnenc::cli
