#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace nnenc {

struct Sample {
    std::vector<double> x;
    int label = 0;  // 1..r

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// Labeled samples with a fixed feature width and class count. Every class
/// 1..r has at least one sample. Immutable once built.
class Dataset {
public:
    Dataset() = default;

    /// Throws DataError if widths disagree, labels fall outside 1..classes,
    /// a class is empty or a feature is non-finite. `source_labels`, when given,
    /// holds the file-native label of each class (size == classes).
    Dataset(std::vector<Sample> samples, int classes, std::vector<long long> source_labels = {});

    std::span<const Sample> samples() const noexcept { return samples_; }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    std::size_t features() const noexcept { return features_; }
    int classes() const noexcept { return classes_; }
    /// class_counts()[c - 1] is the number of samples of class c.
    const std::vector<std::size_t>& class_counts() const noexcept { return class_counts_; }
    /// source_labels()[c - 1] is the label class c had in the source file.
    const std::vector<long long>& source_labels() const noexcept { return source_labels_; }

    /// Samples at the given indices, keeping the class count and label map.
    /// Unlike the constructor, classes may end up empty.
    Dataset subset(std::span<const std::size_t> indices) const;

    /// Same labels, each feature vector replaced by fn(x).
    Dataset map_features(
        const std::function<std::vector<double>(std::span<const double>)>& fn) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::vector<Sample> samples_;
    std::size_t features_ = 0;
    int classes_ = 0;
    std::vector<std::size_t> class_counts_;
    std::vector<long long> source_labels_;
};

/// Reads comma-separated features with an integer label in the last column.
/// A first row with a non-numeric feature is taken as a header. Labels are
/// renumbered 1..r in ascending order of their distinct values.
/// Throws DataError naming the offending line.
Dataset load_csv(const std::filesystem::path& path);
Dataset read_csv(std::istream& is);

/// Writes samples as CSV using the source labels when present.
void write_csv(std::ostream& os, const Dataset& data);

/// Per-feature affine map onto [0,1] fitted on one dataset and reusable on others.
class MinMaxTable {
public:
    struct Range {
        double min;
        double max;
    };

    static MinMaxTable fit(const Dataset& data);
    /// Throws DataError if any range has min > max or a non-finite bound.
    static MinMaxTable from_ranges(std::vector<Range> ranges);

    /// Constant features map to 0.5; values outside the fitted range are not clamped.
    double apply(std::size_t feature, double value) const;
    std::vector<double> apply(std::span<const double> x) const;
    Dataset apply(const Dataset& data) const;

    const std::vector<Range>& ranges() const noexcept { return ranges_; }

private:
    std::vector<Range> ranges_;
};

struct Normalized {
    Dataset data;
    MinMaxTable table;
};

/// Throws DataError on an empty dataset.
Normalized normalize_minmax(const Dataset& data);

/// Fold membership for k-fold cross-validation. Folds are numbered 1..k.
struct FoldPlan {
    int k = 0;
    std::vector<int> assignments;  // per sample

    std::vector<std::size_t> test_indices(int fold) const;
    std::vector<std::size_t> train_indices(int fold) const;
    std::vector<std::size_t> fold_sizes() const;

    friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Shuffles each class with a generator seeded by `seed` and deals its samples
/// round-robin over the folds, continuing where the previous class stopped.
/// Per-class fold sizes and total fold sizes each differ by at most one.
/// Throws ConfigError if k < 2 or k exceeds the sample count.
FoldPlan stratified_kfold(const Dataset& data, int k, std::uint64_t seed);

/// Four classes in the quadrants of [-1,1]^2, every point at least `margin`
/// from both axes. Class numbering follows the binary code of the class:
/// the first bit is set when y < 0 and the second when x < 0, so
///   1: (+,+)   2: (-,+)   3: (+,-)   4: (-,-).
/// The first three points of each class sit at the corners of its region,
/// (margin, margin), (margin, 1) and (1, margin) up to sign, which keeps every
/// class overlapping the convex hull of its two neighbours whenever
/// points_per_class >= 3 and margin <= 1/3. Remaining points are uniform.
/// Throws ConfigError unless points_per_class >= 1 and 0 < margin < 1.
Dataset make_quadrant_dataset(std::size_t points_per_class, double margin, std::uint64_t seed);

/// Order of the cluster centres around the circle in 2-D.
enum class BlobLayout {
    /// Classes ordered by the reflected Gray code of (i - 1), so neighbouring
    /// clusters differ in one bit of their binary target (same convention as
    /// the quadrant data).
    GrayCode,
    /// Class i at angle 2 pi (i - 1) / r.
    Sequential,
};

/// r isotropic Gaussian clusters with standard deviation `spread`. In 2-D the
/// centres sit on the unit circle in the given layout; for dimension >= r they
/// are the unit basis vectors e_1..e_r and the layout is irrelevant.
Dataset make_blobs_dataset(int classes, std::size_t points_per_class, double spread,
                           std::uint64_t seed, std::size_t dimension = 2,
                           BlobLayout layout = BlobLayout::GrayCode);

}  // namespace nnenc
