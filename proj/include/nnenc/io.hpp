#pragma once

#include "nnenc/data.hpp"
#include "nnenc/encoding.hpp"
#include "nnenc/network.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace nnenc {

/// Writes through `<path>.tmp` and renames over `path`, so readers never see
/// a partial file. Throws Error on I/O failure.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

/// A trained network plus what `eval` needs to score new data with it.
///
///   nnenc-model 1
///   scheme <name>
///   classes <r>
///   labels <source label of class 1> ... <class r>
///   normalization <feature count, 0 when disabled>
///   <min> <max>          one line per feature
///   <params block, see write_params>
struct Model {
    EncodingScheme scheme{SchemeKind::Binary, 2};
    std::vector<long long> source_labels;
    std::optional<MinMaxTable> normalization;
    NetworkParams params;
};

void write_model(std::ostream& os, const Model& model);
/// Throws DataError on malformed input.
Model read_model(std::istream& is);

}  // namespace nnenc
