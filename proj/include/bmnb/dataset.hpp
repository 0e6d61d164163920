#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bmnb/errors.hpp"
#include "bmnb/matrix.hpp"

namespace bmnb {

constexpr int kPrivilegedCode = 0;
constexpr int kUnprivilegedCode = 1;

enum class ColumnKind { Numeric, Categorical };

/// Per-feature-column metadata. Categorical cells hold an index into
/// `categories` (interned at load time; the one-hot vocabulary is learned
/// later, from training rows only).
struct ColumnInfo {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<std::string> categories;
};

/// Declarative description of a delimited-text dataset: which column is the
/// target, which is the sensitive attribute, how their values are encoded.
struct DatasetSchema {
    std::string name;
    char delimiter = ',';
    std::string target_column;
    std::string positive_token;        // target value encoded as label 1
    std::string sensitive_column;
    std::string privileged_value;      // exactly one privileged code
    std::vector<std::string> unprivileged_values;
    std::vector<std::string> numeric_columns;
    std::vector<std::string> categorical_columns;
    std::vector<std::string> missing_markers = {"?"};
};

/// Labeled, group-annotated tabular data. Immutable after construction by
/// convention; all pipeline stages return fresh copies.
struct Dataset {
    Matrix features;                 // missing cells are NaN until imputed
    std::vector<int> labels;         // 0/1, 1 = positive class
    std::vector<int> groups;         // codes from group_names
    std::vector<ColumnInfo> columns; // size == features.cols
    std::map<int, std::string> group_names;
    std::string schema_name;

    std::size_t n_rows() const { return features.rows; }
    std::size_t n_features() const { return features.cols; }

    std::vector<std::string> feature_names() const {
        std::vector<std::string> out;
        out.reserve(columns.size());
        for (const auto& c : columns) out.push_back(c.name);
        return out;
    }

    Dataset subset(const std::vector<std::size_t>& rows) const {
        Dataset out;
        out.features = Matrix(rows.size(), features.cols);
        out.labels.reserve(rows.size());
        out.groups.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::copy_n(features.row(rows[i]).data(), features.cols,
                        out.features.row(i).data());
            out.labels.push_back(labels[rows[i]]);
            out.groups.push_back(groups[rows[i]]);
        }
        out.columns = columns;
        out.group_names = group_names;
        out.schema_name = schema_name;
        return out;
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delim)) out.push_back(trim(cell));
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (auto& tok : split_line(s, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

}  // namespace detail

/// Built-in schemas for the three benchmark datasets.
inline DatasetSchema builtin_schema(const std::string& name) {
    DatasetSchema s;
    s.name = name;
    if (name == "adult") {
        s.target_column = "income";
        s.positive_token = ">50K";
        s.sensitive_column = "sex";
        s.privileged_value = "Male";
        s.unprivileged_values = {"Female"};
        s.numeric_columns = {"age", "education_num", "hours_per_week", "capital_gain"};
        s.categorical_columns = {"workclass", "occupation"};
        s.missing_markers = {"?"};
    } else if (name == "compas") {
        s.target_column = "two_year_recid";
        s.positive_token = "1";
        s.sensitive_column = "race";
        s.privileged_value = "Caucasian";
        s.unprivileged_values = {"African-American"};
        s.numeric_columns = {"age", "priors_count", "juv_fel_count"};
        s.categorical_columns = {"c_charge_degree", "age_cat"};
        s.missing_markers = {"?"};
    } else if (name == "framingham") {
        s.target_column = "TenYearCHD";
        s.positive_token = "1";
        s.sensitive_column = "sex";
        s.privileged_value = "Male";
        s.unprivileged_values = {"Female"};
        s.numeric_columns = {"age", "cigsPerDay", "totChol", "sysBP",
                             "diaBP",  "BMI",        "glucose"};
        s.categorical_columns = {"education"};
        s.missing_markers = {"NA"};
    } else {
        throw ConfigError("unknown builtin schema: " + name);
    }
    return s;
}

/// Parses a schema override file (one `key = value` per line, `#` comments;
/// list values comma-separated). Documented in the README.
inline DatasetSchema parse_schema_file(std::istream& in) {
    DatasetSchema s;
    s.name = "custom";
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("schema file line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (key == "name") s.name = val;
        else if (key == "delimiter") s.delimiter = val.empty() ? ',' : val[0];
        else if (key == "target") s.target_column = val;
        else if (key == "positive") s.positive_token = val;
        else if (key == "sensitive") s.sensitive_column = val;
        else if (key == "privileged") s.privileged_value = val;
        else if (key == "unprivileged") s.unprivileged_values = detail::split_list(val);
        else if (key == "numeric") s.numeric_columns = detail::split_list(val);
        else if (key == "categorical") s.categorical_columns = detail::split_list(val);
        else if (key == "missing") s.missing_markers = detail::split_list(val);
        else throw ConfigError("schema file line " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
    }
    if (s.target_column.empty() || s.sensitive_column.empty())
        throw ConfigError("schema file must set 'target' and 'sensitive'");
    if (s.privileged_value.empty() || s.unprivileged_values.empty())
        throw ConfigError("schema file must declare privileged and unprivileged codes");
    return s;
}

/// Loads delimited text against a schema. Rows missing the target or the
/// sensitive value are dropped; missing feature cells become NaN for the
/// imputation stage.
inline Dataset load_dataset(std::istream& in, const DatasetSchema& schema) {
    std::string header_line;
    if (!std::getline(in, header_line))
        throw DataError("empty input: no header line");
    auto header = detail::split_line(header_line, schema.delimiter);

    std::unordered_map<std::string, std::size_t> col_index;
    for (std::size_t i = 0; i < header.size(); ++i) col_index[header[i]] = i;

    auto require = [&](const std::string& name) {
        auto it = col_index.find(name);
        if (it == col_index.end())
            throw DataError("schema column '" + name + "' not found in header");
        return it->second;
    };

    const std::size_t target_idx = require(schema.target_column);
    const std::size_t sensitive_idx = require(schema.sensitive_column);

    Dataset d;
    d.schema_name = schema.name;
    d.group_names[kPrivilegedCode] = schema.privileged_value;
    d.group_names[kUnprivilegedCode] =
        schema.unprivileged_values.size() == 1 ? schema.unprivileged_values[0]
                                               : "unprivileged";

    struct FeatCol {
        std::size_t src;
        ColumnInfo info;
        std::unordered_map<std::string, std::size_t> interned;
    };
    std::vector<FeatCol> feat_cols;
    for (const auto& n : schema.numeric_columns)
        feat_cols.push_back({require(n), {n, ColumnKind::Numeric, {}}, {}});
    for (const auto& n : schema.categorical_columns)
        feat_cols.push_back({require(n), {n, ColumnKind::Categorical, {}}, {}});
    if (feat_cols.empty()) throw DataError("schema declares no feature columns");

    auto is_missing = [&](const std::string& v) {
        if (v.empty()) return true;
        return std::find(schema.missing_markers.begin(), schema.missing_markers.end(),
                         v) != schema.missing_markers.end();
    };

    std::vector<double> flat;
    std::string line;
    std::size_t row_idx = 0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    while (std::getline(in, line)) {
        ++row_idx;
        if (detail::trim(line).empty()) continue;
        auto cells = detail::split_line(line, schema.delimiter);
        if (cells.size() != header.size())
            throw DataError("row " + std::to_string(row_idx) + ": expected " +
                            std::to_string(header.size()) + " columns, got " +
                            std::to_string(cells.size()));

        const std::string& tv = cells[target_idx];
        const std::string& sv = cells[sensitive_idx];
        if (is_missing(tv) || is_missing(sv)) continue;  // cleaning rule

        int group;
        if (sv == schema.privileged_value) {
            group = kPrivilegedCode;
        } else if (std::find(schema.unprivileged_values.begin(),
                             schema.unprivileged_values.end(),
                             sv) != schema.unprivileged_values.end()) {
            group = kUnprivilegedCode;
        } else {
            throw DataError("row " + std::to_string(row_idx) +
                            ": unknown sensitive value '" + sv + "'");
        }

        d.labels.push_back(tv == schema.positive_token ? 1 : 0);
        d.groups.push_back(group);
        for (auto& fc : feat_cols) {
            const std::string& v = cells[fc.src];
            if (is_missing(v)) {
                flat.push_back(nan);
            } else if (fc.info.kind == ColumnKind::Numeric) {
                try {
                    std::size_t pos = 0;
                    double x = std::stod(v, &pos);
                    if (pos != v.size()) throw std::invalid_argument(v);
                    flat.push_back(x);
                } catch (const std::exception&) {
                    throw DataError("row " + std::to_string(row_idx) + ", column '" +
                                    fc.info.name + "': not a number: '" + v + "'");
                }
            } else {
                auto [it, inserted] = fc.interned.try_emplace(v, fc.info.categories.size());
                if (inserted) fc.info.categories.push_back(v);
                flat.push_back(static_cast<double>(it->second));
            }
        }
    }

    d.features.rows = d.labels.size();
    d.features.cols = feat_cols.size();
    d.features.data = std::move(flat);
    for (auto& fc : feat_cols) d.columns.push_back(std::move(fc.info));
    if (d.n_rows() == 0) throw DataError("no usable rows after cleaning");
    return d;
}

inline Dataset load_dataset_file(const std::string& path, const DatasetSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path);
    return load_dataset(in, schema);
}

/// Joint (label, group) stratified split: each stratum is shuffled and cut so
/// its test share is within one row of test_fraction. Deterministic for a
/// fixed seed.
inline std::pair<Dataset, Dataset> stratified_split(const Dataset& d,
                                                    double test_fraction,
                                                    std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("test_fraction must be in (0,1)");

    std::map<std::pair<int, int>, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < d.n_rows(); ++i)
        strata[{d.labels[i], d.groups[i]}].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> train_rows, test_rows;
    for (auto& [key, rows] : strata) {
        if (rows.size() < 2)
            throw DataError("stratum (label=" + std::to_string(key.first) +
                            ", group=" + std::to_string(key.second) +
                            ") has only 1 row; cannot split");
        std::shuffle(rows.begin(), rows.end(), rng);
        auto n_test = static_cast<std::size_t>(
            std::llround(test_fraction * static_cast<double>(rows.size())));
        for (std::size_t i = 0; i < rows.size(); ++i)
            (i < n_test ? test_rows : train_rows).push_back(rows[i]);
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return {d.subset(train_rows), d.subset(test_rows)};
}

/// Stratified k-fold assignment over joint (label, group) strata. Returns a
/// fold index in [0, folds) per row.
inline std::vector<int> stratified_folds(const Dataset& d, int folds,
                                         std::uint64_t seed) {
    if (folds < 2) throw ConfigError("folds must be >= 2");
    std::map<std::pair<int, int>, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < d.n_rows(); ++i)
        strata[{d.labels[i], d.groups[i]}].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<int> fold_of(d.n_rows(), 0);
    for (auto& [key, rows] : strata) {
        if (rows.size() < static_cast<std::size_t>(folds))
            throw DataError("stratum (label=" + std::to_string(key.first) +
                            ", group=" + std::to_string(key.second) +
                            ") has fewer rows than folds");
        std::shuffle(rows.begin(), rows.end(), rng);
        for (std::size_t i = 0; i < rows.size(); ++i)
            fold_of[rows[i]] = static_cast<int>(i % folds);
    }
    return fold_of;
}

}  // namespace bmnb
