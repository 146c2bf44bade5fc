#include "nnenc/io.hpp"

#include "nnenc/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace nnenc {

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        writer(out);
        out.flush();
        if (!out) throw Error("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot rename " + tmp.string() + " to " + path.string());
    }
}

void write_model(std::ostream& os, const Model& model)
{
    os << "nnenc-model 1\n";
    os << "scheme " << scheme_name(model.scheme.kind()) << '\n';
    os << "classes " << model.scheme.classes() << '\n';
    os << "labels";
    for (long long l : model.source_labels) os << ' ' << l;
    os << '\n';
    const auto* ranges = model.normalization ? &model.normalization->ranges() : nullptr;
    os << "normalization " << (ranges ? ranges->size() : 0) << '\n';
    if (ranges) {
        char buf[64];
        for (const auto& r : *ranges) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g", r.min, r.max);
            os << buf << '\n';
        }
    }
    write_params(os, model.params);
}

namespace {

std::istringstream expect_line(std::istream& is, const std::string& key)
{
    std::string line;
    if (!std::getline(is, line)) throw DataError("model file truncated before '" + key + "'");
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag != key) throw DataError("model file: expected '" + key + "', found '" + tag + "'");
    return ss;
}

}  // namespace

Model read_model(std::istream& is)
{
    std::string version;
    if (!(expect_line(is, "nnenc-model") >> version) || version != "1") {
        throw DataError("unsupported model file version");
    }

    std::string name;
    expect_line(is, "scheme") >> name;
    const auto kind = parse_scheme(name);
    if (!kind) throw DataError("model file: unknown scheme '" + name + "'");

    int classes = 0;
    if (!(expect_line(is, "classes") >> classes)) throw DataError("model file: bad class count");

    Model model;
    try {
        model.scheme = EncodingScheme(*kind, classes);
    } catch (const ClassError& e) {
        throw DataError(std::string("model file: ") + e.what());
    }

    auto labels = expect_line(is, "labels");
    for (long long l = 0; labels >> l;) model.source_labels.push_back(l);
    if (!model.source_labels.empty() &&
        model.source_labels.size() != static_cast<std::size_t>(classes)) {
        throw DataError("model file: label map does not match class count");
    }

    std::size_t features = 0;
    if (!(expect_line(is, "normalization") >> features)) {
        throw DataError("model file: bad normalization header");
    }
    if (features > 0) {
        std::vector<MinMaxTable::Range> ranges(features);
        for (auto& r : ranges) {
            std::string line;
            if (!std::getline(is, line)) throw DataError("model file: truncated normalization table");
            std::istringstream ss(line);
            if (!(ss >> r.min >> r.max)) throw DataError("model file: bad normalization range");
        }
        model.normalization = MinMaxTable::from_ranges(std::move(ranges));
    }

    model.params = read_params(is);
    if (model.params.outputs != static_cast<std::size_t>(model.scheme.width())) {
        throw DataError("model file: network width does not match scheme");
    }
    if (model.normalization && model.normalization->ranges().size() != model.params.inputs) {
        throw DataError("model file: normalization table does not match input width");
    }
    return model;
}

}  // namespace nnenc
