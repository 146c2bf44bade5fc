#include "nnenc/data.hpp"

#include "nnenc/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <string_view>

namespace nnenc {

Dataset::Dataset(std::vector<Sample> samples, int classes, std::vector<long long> source_labels)
    : samples_(std::move(samples)), classes_(classes), source_labels_(std::move(source_labels))
{
    if (classes_ < 2) throw DataError("a dataset needs at least 2 classes");
    if (samples_.empty()) throw DataError("dataset is empty");
    if (!source_labels_.empty() && source_labels_.size() != static_cast<std::size_t>(classes_)) {
        throw DataError("label map size does not match class count");
    }
    features_ = samples_.front().x.size();
    if (features_ == 0) throw DataError("samples have no features");

    class_counts_.assign(static_cast<std::size_t>(classes_), 0);
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const Sample& s = samples_[i];
        if (s.x.size() != features_) {
            throw DataError("sample " + std::to_string(i) + " has " + std::to_string(s.x.size()) +
                            " features, expected " + std::to_string(features_));
        }
        if (s.label < 1 || s.label > classes_) {
            throw DataError("sample " + std::to_string(i) + " has label " +
                            std::to_string(s.label) + " outside 1.." + std::to_string(classes_));
        }
        if (!std::all_of(s.x.begin(), s.x.end(), [](double v) { return std::isfinite(v); })) {
            throw DataError("sample " + std::to_string(i) + " has a non-finite feature");
        }
        ++class_counts_[static_cast<std::size_t>(s.label - 1)];
    }
    for (int c = 1; c <= classes_; ++c) {
        if (class_counts_[static_cast<std::size_t>(c - 1)] == 0) {
            throw DataError("class " + std::to_string(c) + " has no samples");
        }
    }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const
{
    Dataset out;
    out.features_ = features_;
    out.classes_ = classes_;
    out.source_labels_ = source_labels_;
    out.class_counts_.assign(static_cast<std::size_t>(classes_), 0);
    out.samples_.reserve(indices.size());
    for (std::size_t i : indices) {
        out.samples_.push_back(samples_.at(i));
        ++out.class_counts_[static_cast<std::size_t>(samples_[i].label - 1)];
    }
    return out;
}

Dataset Dataset::map_features(
    const std::function<std::vector<double>(std::span<const double>)>& fn) const
{
    Dataset out = *this;
    for (std::size_t i = 0; i < out.samples_.size(); ++i) {
        out.samples_[i].x = fn(samples_[i].x);
        if (out.samples_[i].x.size() != out.samples_.front().x.size()) {
            throw DimensionError("feature map changed width between samples");
        }
    }
    if (!out.samples_.empty()) out.features_ = out.samples_.front().x.size();
    return out;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& out)
{
    if (field.empty()) return false;
    // from_chars rejects a leading '+'.
    if (field.front() == '+') field.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc{} && ptr == field.data() + field.size();
}

}  // namespace

Dataset read_csv(std::istream& is)
{
    struct Row {
        std::vector<double> x;
        long long label;
    };
    std::vector<Row> rows;
    std::size_t columns = 0;
    std::size_t line_no = 0;
    std::string line;

    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);

        if (columns == 0) {
            if (fields.size() < 2) throw DataError("need at least one feature and a label", line_no);
            columns = fields.size();
            double probe = 0.0;
            const bool header = std::any_of(fields.begin(), fields.end() - 1, [&](std::string_view f) {
                return !parse_number(f, probe);
            });
            if (header) continue;
        } else if (fields.size() != columns) {
            throw DataError("expected " + std::to_string(columns) + " columns, found " +
                                std::to_string(fields.size()),
                            line_no);
        }

        Row row;
        row.x.resize(columns - 1);
        for (std::size_t c = 0; c + 1 < columns; ++c) {
            if (!parse_number(fields[c], row.x[c]) || !std::isfinite(row.x[c])) {
                throw DataError("non-numeric feature '" + std::string(fields[c]) + "' in column " +
                                    std::to_string(c + 1),
                                line_no);
            }
        }
        if (!parse_number(fields.back(), row.label)) {
            throw DataError("label '" + std::string(fields.back()) + "' is not an integer", line_no);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("no data rows");

    std::map<long long, int> remap;
    for (const Row& r : rows) remap.emplace(r.label, 0);
    std::vector<long long> source_labels;
    for (auto& [label, cls] : remap) {
        source_labels.push_back(label);
        cls = static_cast<int>(source_labels.size());
    }

    std::vector<Sample> samples;
    samples.reserve(rows.size());
    for (Row& r : rows) samples.push_back({std::move(r.x), remap.at(r.label)});
    if (remap.size() < 2) throw DataError("file contains a single class");
    return Dataset(std::move(samples), static_cast<int>(remap.size()), std::move(source_labels));
}

Dataset load_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_csv(in);
}

void write_csv(std::ostream& os, const Dataset& data)
{
    char buf[32];
    for (const Sample& s : data.samples()) {
        for (double v : s.x) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << buf << ',';
        }
        const auto& labels = data.source_labels();
        os << (labels.empty() ? s.label : labels[static_cast<std::size_t>(s.label - 1)]) << '\n';
    }
}

MinMaxTable MinMaxTable::fit(const Dataset& data)
{
    if (data.empty()) throw DataError("cannot normalize an empty dataset");
    MinMaxTable t;
    t.ranges_.resize(data.features());
    for (std::size_t f = 0; f < data.features(); ++f) {
        t.ranges_[f] = {data[0].x[f], data[0].x[f]};
    }
    for (const Sample& s : data.samples()) {
        for (std::size_t f = 0; f < s.x.size(); ++f) {
            t.ranges_[f].min = std::min(t.ranges_[f].min, s.x[f]);
            t.ranges_[f].max = std::max(t.ranges_[f].max, s.x[f]);
        }
    }
    return t;
}

MinMaxTable MinMaxTable::from_ranges(std::vector<Range> ranges)
{
    for (const Range& r : ranges) {
        if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min > r.max) {
            throw DataError("invalid normalization range");
        }
    }
    MinMaxTable t;
    t.ranges_ = std::move(ranges);
    return t;
}

double MinMaxTable::apply(std::size_t feature, double value) const
{
    const Range& r = ranges_.at(feature);
    if (r.max == r.min) return 0.5;
    return (value - r.min) / (r.max - r.min);
}

std::vector<double> MinMaxTable::apply(std::span<const double> x) const
{
    if (x.size() != ranges_.size()) {
        throw DimensionError("normalization table has " + std::to_string(ranges_.size()) +
                             " features, sample has " + std::to_string(x.size()));
    }
    std::vector<double> out(x.size());
    for (std::size_t f = 0; f < x.size(); ++f) out[f] = apply(f, x[f]);
    return out;
}

Dataset MinMaxTable::apply(const Dataset& data) const
{
    return data.map_features([this](std::span<const double> x) { return apply(x); });
}

Normalized normalize_minmax(const Dataset& data)
{
    MinMaxTable table = MinMaxTable::fit(data);
    Dataset scaled = table.apply(data);
    return {std::move(scaled), std::move(table)};
}

std::vector<std::size_t> FoldPlan::test_indices(int fold) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] != fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const
{
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assignments) ++sizes[static_cast<std::size_t>(a - 1)];
    return sizes;
}

FoldPlan stratified_kfold(const Dataset& data, int k, std::uint64_t seed)
{
    if (k < 2) throw ConfigError("fold count must be at least 2, got " + std::to_string(k));
    if (static_cast<std::size_t>(k) > data.size()) {
        throw ConfigError("fold count " + std::to_string(k) + " exceeds sample count " +
                          std::to_string(data.size()));
    }

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(data.classes()));
    for (std::size_t i = 0; i < data.size(); ++i) {
        by_class[static_cast<std::size_t>(data[i].label - 1)].push_back(i);
    }

    FoldPlan plan;
    plan.k = k;
    plan.assignments.assign(data.size(), 0);
    std::mt19937_64 rng(seed);
    std::size_t next = 0;
    for (auto& members : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t i : members) {
            plan.assignments[i] = static_cast<int>(next % static_cast<std::size_t>(k)) + 1;
            ++next;
        }
    }
    return plan;
}

Dataset make_quadrant_dataset(std::size_t points_per_class, double margin, std::uint64_t seed)
{
    if (points_per_class < 1) throw ConfigError("points per class must be at least 1");
    if (!(margin > 0.0 && margin < 1.0)) throw ConfigError("margin must lie in (0, 1)");

    const std::array<std::array<double, 2>, 3> anchors{{{margin, margin}, {margin, 1.0}, {1.0, margin}}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> magnitude(margin, 1.0);

    std::vector<Sample> samples;
    samples.reserve(4 * points_per_class);
    for (int cls = 1; cls <= 4; ++cls) {
        const double sx = (cls == 2 || cls == 4) ? -1.0 : 1.0;
        const double sy = (cls == 3 || cls == 4) ? -1.0 : 1.0;
        for (std::size_t i = 0; i < points_per_class; ++i) {
            double ax = 0.0;
            double ay = 0.0;
            if (i < anchors.size()) {
                ax = anchors[i][0];
                ay = anchors[i][1];
            } else {
                ax = magnitude(rng);
                ay = magnitude(rng);
            }
            samples.push_back({{sx * ax, sy * ay}, cls});
        }
    }
    return Dataset(std::move(samples), 4);
}

namespace {

// slot[c - 1] is the position of class c on the circle.
std::vector<int> circle_slots(int classes, BlobLayout layout)
{
    std::vector<int> slot(static_cast<std::size_t>(classes));
    if (layout == BlobLayout::Sequential) {
        for (int c = 0; c < classes; ++c) slot[static_cast<std::size_t>(c)] = c;
        return slot;
    }
    int next = 0;
    for (unsigned g = 0; next < classes; ++g) {
        const unsigned code = g ^ (g >> 1);
        if (code < static_cast<unsigned>(classes)) slot[code] = next++;
    }
    return slot;
}

}  // namespace

Dataset make_blobs_dataset(int classes, std::size_t points_per_class, double spread,
                           std::uint64_t seed, std::size_t dimension, BlobLayout layout)
{
    if (classes < 2) throw ConfigError("blobs need at least 2 classes");
    if (points_per_class < 1) throw ConfigError("points per class must be at least 1");
    if (!(spread > 0.0)) throw ConfigError("spread must be positive");
    if (dimension != 2 && dimension < static_cast<std::size_t>(classes)) {
        throw ConfigError("blob dimension must be 2 or at least the class count");
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, spread);

    const std::vector<int> slot = circle_slots(classes, layout);
    std::vector<Sample> samples;
    samples.reserve(static_cast<std::size_t>(classes) * points_per_class);
    for (int cls = 1; cls <= classes; ++cls) {
        std::vector<double> centre(dimension, 0.0);
        if (dimension == 2) {
            const double angle =
                2.0 * std::numbers::pi * slot[static_cast<std::size_t>(cls - 1)] / classes;
            centre[0] = std::cos(angle);
            centre[1] = std::sin(angle);
        } else {
            centre[static_cast<std::size_t>(cls - 1)] = 1.0;
        }
        for (std::size_t i = 0; i < points_per_class; ++i) {
            Sample s{centre, cls};
            for (double& v : s.x) v += noise(rng);
            samples.push_back(std::move(s));
        }
    }
    return Dataset(std::move(samples), classes);
}

}  // namespace nnenc
