#include "nnenc/encoding.hpp"

#include "nnenc/errors.hpp"

#include <algorithm>
#include <array>

namespace nnenc {

namespace {

constexpr std::array<SchemeKind, 3> kAllKinds{SchemeKind::OneToOne, SchemeKind::Binary,
                                              SchemeKind::ReducedOneHot};

// Smallest q with r <= 2^q.
int binary_width(int classes)
{
    int q = 0;
    while ((1LL << q) < classes) ++q;
    return q;
}

}  // namespace

std::string_view scheme_name(SchemeKind kind) noexcept
{
    switch (kind) {
        case SchemeKind::OneToOne: return "one-to-one";
        case SchemeKind::Binary: return "binary";
        case SchemeKind::ReducedOneHot: return "reduced-one-hot";
    }
    return "unknown";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) noexcept
{
    for (SchemeKind k : kAllKinds) {
        if (scheme_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string scheme_names()
{
    std::string out;
    for (SchemeKind k : kAllKinds) {
        if (!out.empty()) out += ", ";
        out += scheme_name(k);
    }
    return out;
}

int output_width(SchemeKind kind, int classes)
{
    if (classes < 2) {
        throw ClassError("class count must be at least 2, got " + std::to_string(classes));
    }
    switch (kind) {
        case SchemeKind::OneToOne: return classes;
        case SchemeKind::Binary: return binary_width(classes);
        case SchemeKind::ReducedOneHot: return classes - 1;
    }
    return 0;
}

EncodingScheme::EncodingScheme(SchemeKind kind, int classes)
    : kind_(kind), classes_(classes), width_(output_width(kind, classes))
{
}

std::vector<double> EncodingScheme::encode(int class_index) const
{
    if (class_index < 1 || class_index > classes_) {
        throw ClassError("class index " + std::to_string(class_index) + " outside 1.." +
                         std::to_string(classes_));
    }
    std::vector<double> z(static_cast<std::size_t>(width_), 0.0);
    switch (kind_) {
        case SchemeKind::OneToOne:
            z[static_cast<std::size_t>(class_index - 1)] = 1.0;
            break;
        case SchemeKind::ReducedOneHot:
            if (class_index < classes_) z[static_cast<std::size_t>(class_index - 1)] = 1.0;
            break;
        case SchemeKind::Binary: {
            const unsigned code = static_cast<unsigned>(class_index - 1);
            for (int bit = 0; bit < width_; ++bit) {
                // z[0] is the most significant bit.
                z[static_cast<std::size_t>(width_ - 1 - bit)] = ((code >> bit) & 1U) ? 1.0 : 0.0;
            }
            break;
        }
    }
    return z;
}

Decision Decision::of_class(int class_index)
{
    if (class_index < 1) throw ClassError("class index must be >= 1");
    return Decision{class_index};
}

std::string to_string(const Decision& d)
{
    return d.is_rejected() ? "rejected" : "class " + std::to_string(d.class_index());
}

Decision decode(const EncodingScheme& scheme, std::span<const double> outputs)
{
    if (outputs.size() != static_cast<std::size_t>(scheme.width())) {
        throw DimensionError("decode: expected " + std::to_string(scheme.width()) +
                             " outputs, got " + std::to_string(outputs.size()));
    }

    std::vector<int> bits;
    bits.reserve(outputs.size());
    for (double v : outputs) {
        switch (quantize(v)) {
            case Trit::Zero: bits.push_back(0); break;
            case Trit::One: bits.push_back(1); break;
            case Trit::Indeterminate: return Decision::rejected();
        }
    }

    switch (scheme.kind()) {
        case SchemeKind::Binary: {
            long long code = 0;
            for (int b : bits) code = code * 2 + b;
            // Codes >= r have no class attached.
            if (code + 1 <= scheme.classes()) return Decision::of_class(static_cast<int>(code + 1));
            return Decision::rejected();
        }
        case SchemeKind::OneToOne:
        case SchemeKind::ReducedOneHot: {
            const auto ones = std::count(bits.begin(), bits.end(), 1);
            if (ones == 1) {
                const auto pos = std::find(bits.begin(), bits.end(), 1) - bits.begin();
                return Decision::of_class(static_cast<int>(pos) + 1);
            }
            if (ones == 0 && scheme.kind() == SchemeKind::ReducedOneHot) {
                return Decision::of_class(scheme.classes());
            }
            return Decision::rejected();
        }
    }
    return Decision::rejected();
}

}  // namespace nnenc
