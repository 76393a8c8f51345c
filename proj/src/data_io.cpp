#include "flgc/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "flgc/errors.hpp"
#include "flgc/rng.hpp"

namespace flgc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string basename_no_ext(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base.resize(dot);
    return base;
}

// -1 means "no label column".
int resolve_label_column(const std::vector<std::string>& header, std::size_t column_count,
                         const std::string& label_column, bool has_header) {
    if (label_column.empty()) return -1;
    if (has_header) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == label_column) return static_cast<int>(i);
    }
    char* end = nullptr;
    const long idx = std::strtol(label_column.c_str(), &end, 10);
    if (end == label_column.c_str() || *end != '\0')
        throw MissingLabelColumn("load_csv: no column named '" + label_column + "'");
    const long resolved = idx < 0 ? static_cast<long>(column_count) + idx : idx;
    if (resolved < 0 || resolved >= static_cast<long>(column_count))
        throw MissingLabelColumn("load_csv: label column index " + label_column +
                                 " outside 0.." + std::to_string(column_count - 1));
    return static_cast<int>(resolved);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column, bool has_header,
                 const std::string& dataset_name) {
    std::ifstream in(path);
    if (!in) throw ConfigError("load_csv: cannot open " + path);

    Dataset ds;
    ds.name = dataset_name.empty() ? basename_no_ext(path) : dataset_name;

    std::string line;
    long line_no = 0;
    std::vector<std::string> header;
    if (has_header) {
        if (!std::getline(in, line)) throw EmptyInput("load_csv: " + path + " is empty");
        ++line_no;
        header = split_fields(line);
    }

    std::vector<double> values;
    std::vector<std::string> raw_labels;
    int label_idx = -2;  // resolved on the first data row
    std::size_t column_count = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (label_idx == -2) {
            column_count = fields.size();
            if (has_header && header.size() != column_count)
                throw ParseError("load_csv: header has " + std::to_string(header.size()) +
                                     " fields, data rows have " + std::to_string(column_count),
                                 line_no);
            label_idx = resolve_label_column(header, column_count, label_column, has_header);
            if (column_count - (label_idx >= 0 ? 1 : 0) == 0)
                throw EmptyInput("load_csv: no feature columns in " + path);
        }
        if (fields.size() != column_count)
            throw ParseError("load_csv: expected " + std::to_string(column_count) +
                                 " fields, found " + std::to_string(fields.size()),
                             line_no);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (static_cast<int>(i) == label_idx) {
                raw_labels.push_back(fields[i]);
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(fields[i].c_str(), &end);
            if (end == fields[i].c_str() || *end != '\0' || !std::isfinite(v))
                throw NonNumericFeature("load_csv: non-numeric feature '" + fields[i] +
                                            "' in column " + std::to_string(i),
                                        line_no);
            values.push_back(v);
        }
    }
    if (label_idx == -2) throw EmptyInput("load_csv: no data rows in " + path);

    const std::size_t feat_cols = column_count - (label_idx >= 0 ? 1 : 0);
    const std::size_t row_count = values.size() / feat_cols;
    ds.features = DenseMatrix(row_count, feat_cols, std::move(values));

    if (label_idx >= 0) {
        std::map<std::string, int> id_of;
        ds.labels.reserve(raw_labels.size());
        for (const std::string& s : raw_labels) {
            auto [it, fresh] = id_of.emplace(s, static_cast<int>(ds.class_names.size()));
            if (fresh) ds.class_names.push_back(s);
            ds.labels.push_back(it->second);
        }
        ds.class_count = static_cast<int>(ds.class_names.size());
    }
    return ds;
}

DenseMatrix minmax_scale(const DenseMatrix& features) {
    if (features.rows() == 0) throw EmptyInput("minmax_scale: empty feature matrix");
    const std::size_t n = features.rows(), d = features.cols();
    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = features.row_ptr(i);
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], row[j]);
            hi[j] = std::max(hi[j], row[j]);
        }
    }
    DenseMatrix out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* src = features.row_ptr(i);
        double* dst = out.row_ptr(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double span = hi[j] - lo[j];
            dst[j] = span > 0.0 ? (src[j] - lo[j]) / span : 0.0;
        }
    }
    return out;
}

StratifiedSplit stratified_split(const Dataset& dataset, const SplitSpec& spec) {
    if (!dataset.has_labels()) throw ConfigError("stratified_split: dataset has no labels");
    if (!(spec.labeled_fraction > 0.0) || spec.labeled_fraction > 1.0)
        throw ConfigError("stratified_split: labeled_fraction must lie in (0, 1]");
    if (spec.per_class_min < 1) throw ConfigError("stratified_split: per_class_min must be >= 1");

    std::vector<std::vector<int>> by_class(static_cast<std::size_t>(dataset.class_count));
    for (std::size_t i = 0; i < dataset.labels.size(); ++i)
        by_class[static_cast<std::size_t>(dataset.labels[i])].push_back(static_cast<int>(i));

    Rng rng(spec.seed);
    std::vector<int> labeled_ids;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        std::vector<int>& ids = by_class[c];
        const std::size_t want = std::max<std::size_t>(
            static_cast<std::size_t>(spec.per_class_min),
            static_cast<std::size_t>(
                std::ceil(spec.labeled_fraction * static_cast<double>(ids.size()))));
        if (ids.size() < want)
            throw ClassTooSmall("stratified_split: class " + std::to_string(c) + " has " +
                                std::to_string(ids.size()) + " nodes, needs " +
                                std::to_string(want));
        rng.shuffle(ids);
        labeled_ids.insert(labeled_ids.end(), ids.begin(), ids.begin() + static_cast<long>(want));
    }
    std::sort(labeled_ids.begin(), labeled_ids.end());

    StratifiedSplit out;
    out.labeled.labeled_ids = labeled_ids;
    out.labeled.class_count = dataset.class_count;
    out.labeled.labels.reserve(labeled_ids.size());
    for (int id : labeled_ids)
        out.labeled.labels.push_back(dataset.labels[static_cast<std::size_t>(id)]);

    std::vector<char> is_labeled(dataset.labels.size(), 0);
    for (int id : labeled_ids) is_labeled[static_cast<std::size_t>(id)] = 1;
    for (std::size_t i = 0; i < dataset.labels.size(); ++i)
        if (!is_labeled[i]) out.unlabeled_ids.push_back(static_cast<int>(i));
    return out;
}

DenseMatrix add_gaussian_noise(const DenseMatrix& features, double sigma2, std::uint64_t seed) {
    if (!std::isfinite(sigma2) || sigma2 < 0.0)
        throw ConfigError("add_gaussian_noise: sigma2 must be >= 0");
    if (sigma2 == 0.0) return features;
    const double sigma = std::sqrt(sigma2);
    Rng rng(seed);
    DenseMatrix out = features;
    for (double& v : out.data()) v = std::clamp(v + sigma * rng.normal(), 0.0, 1.0);
    return out;
}

DenseMatrix add_salt_pepper(const DenseMatrix& features, double probability, std::uint64_t seed) {
    if (!std::isfinite(probability) || probability < 0.0 || probability > 1.0)
        throw ConfigError("add_salt_pepper: probability must lie in [0, 1]");
    if (probability == 0.0) return features;
    Rng rng(seed);
    DenseMatrix out = features;
    for (double& v : out.data())
        if (rng.uniform() < probability) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
    return out;
}

FileSplit load_split_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("load_split_file: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("load_split_file: " + std::string(e.what()));
    }
    auto read_ids = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_array())
            throw ParseError("load_split_file: missing integer array '" + std::string(key) + "'");
        std::vector<int> out;
        for (const auto& v : j[key]) {
            if (!v.is_number_integer())
                throw ParseError("load_split_file: non-integer id in '" + std::string(key) + "'");
            out.push_back(v.get<int>());
        }
        return out;
    };
    return FileSplit{read_ids("labeled"), read_ids("validation"), read_ids("test")};
}

}  // namespace flgc
