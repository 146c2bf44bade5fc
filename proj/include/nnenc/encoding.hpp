#pragma once

// Output-layer encodings for r-class classification.
//
// Three schemes are supported:
//   one-to-one       r output nodes, node i is 1 for class i (one-hot)
//   binary           q output nodes with 2^(q-1) < r <= 2^q, target is the
//                    base-2 numeral of (i-1), most significant bit first
//   reduced-one-hot  one-hot with the last node dropped; class r is all zeros
//
// Network outputs are read back through the 40-20-40 quantizer: [0, 0.4] is a
// zero, [0.6, 1] is a one and anything strictly between is indeterminate,
// which rejects the whole sample.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nnenc {

enum class SchemeKind { OneToOne, Binary, ReducedOneHot };

/// The exact CLI/config spelling: "one-to-one", "binary", "reduced-one-hot".
std::string_view scheme_name(SchemeKind kind) noexcept;

/// Inverse of scheme_name. Returns nullopt for anything else (case-sensitive).
std::optional<SchemeKind> parse_scheme(std::string_view name) noexcept;

/// Comma-joined list of all scheme names, for help and error messages.
std::string scheme_names();

/// Number of output nodes the scheme needs for r classes. Throws ClassError if r < 2.
int output_width(SchemeKind kind, int classes);

class EncodingScheme {
public:
    /// Throws ClassError if classes < 2.
    EncodingScheme(SchemeKind kind, int classes);

    SchemeKind kind() const noexcept { return kind_; }
    int classes() const noexcept { return classes_; }
    int width() const noexcept { return width_; }

    /// Ideal output vector for class index 1..r. Throws ClassError when out of range.
    std::vector<double> encode(int class_index) const;

    friend bool operator==(const EncodingScheme&, const EncodingScheme&) = default;

private:
    SchemeKind kind_;
    int classes_;
    int width_;
};

enum class Trit { Zero, One, Indeterminate };

/// 40-20-40 band assignment. Both 0.40 and 0.60 belong to the outer bands.
constexpr Trit quantize(double v) noexcept
{
    if (v <= 0.40) return Trit::Zero;
    if (v >= 0.60) return Trit::One;
    // NaN falls through both comparisons.
    return Trit::Indeterminate;
}

/// Either a class in 1..r or a rejection.
class Decision {
public:
    static Decision rejected() noexcept { return Decision{0}; }
    static Decision of_class(int class_index);

    bool is_rejected() const noexcept { return class_ == 0; }
    /// 0 when rejected.
    int class_index() const noexcept { return class_; }

    friend bool operator==(const Decision&, const Decision&) = default;

private:
    explicit Decision(int c) noexcept : class_(c) {}
    int class_;
};

std::string to_string(const Decision& d);

/// Maps a network output vector back to a class. Throws DimensionError if
/// outputs.size() != scheme.width().
Decision decode(const EncodingScheme& scheme, std::span<const double> outputs);

}  // namespace nnenc
