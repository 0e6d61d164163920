#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bmnb/dataset.hpp"
#include "bmnb/errors.hpp"

namespace bmnb {

struct ResampleParams {
    int k_smote = 5;
    int k_enn = 3;
    std::uint64_t seed = 0;
};

struct PreprocessConfig {
    double scale_lo = 0.0;
    double scale_hi = 1.0;
    std::optional<ResampleParams> resample;  // SMOTEENN when set
};

/// Fitted preprocessing statistics. Learned from training rows only;
/// applying the plan never re-fits.
struct PreprocessPlan {
    struct NumericStats {
        double min = 0.0;
        double max = 0.0;
        double median = 0.0;
        bool degenerate = false;  // constant column: maps to scale midpoint
    };
    struct CategoricalStats {
        std::vector<std::string> vocabulary;  // sorted category names
        std::string mode;                     // imputation value
    };
    struct ColumnRule {
        std::string name;
        ColumnKind kind = ColumnKind::Numeric;
        NumericStats num;
        CategoricalStats cat;
    };

    double scale_lo = 0.0;
    double scale_hi = 1.0;
    std::vector<ColumnRule> columns;
};

/// Learns per-column min/max/median (numeric) or vocabulary/mode
/// (categorical) from the training set.
inline PreprocessPlan fit_plan(const Dataset& train, const PreprocessConfig& cfg = {}) {
    if (train.n_rows() == 0) throw DataError("fit_plan: empty training set");
    if (!(cfg.scale_lo < cfg.scale_hi))
        throw ConfigError("fit_plan: scale range must satisfy lo < hi");

    PreprocessPlan plan;
    plan.scale_lo = cfg.scale_lo;
    plan.scale_hi = cfg.scale_hi;

    for (std::size_t c = 0; c < train.n_features(); ++c) {
        const ColumnInfo& col = train.columns[c];
        PreprocessPlan::ColumnRule rule;
        rule.name = col.name;
        rule.kind = col.kind;

        if (col.kind == ColumnKind::Numeric) {
            std::vector<double> vals;
            vals.reserve(train.n_rows());
            for (std::size_t r = 0; r < train.n_rows(); ++r) {
                double v = train.features(r, c);
                if (!std::isnan(v)) vals.push_back(v);
            }
            if (vals.empty())
                throw DataError("fit_plan: column '" + col.name +
                                "' has no observed values");
            auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
            rule.num.min = *mn;
            rule.num.max = *mx;
            rule.num.degenerate = (*mn == *mx);
            std::sort(vals.begin(), vals.end());
            std::size_t n = vals.size();
            rule.num.median = (n % 2 == 1) ? vals[n / 2]
                                           : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
        } else {
            std::map<std::string, std::size_t> counts;
            for (std::size_t r = 0; r < train.n_rows(); ++r) {
                double v = train.features(r, c);
                if (std::isnan(v)) continue;
                counts[col.categories[static_cast<std::size_t>(v)]]++;
            }
            if (counts.empty())
                throw DataError("fit_plan: column '" + col.name +
                                "' has no observed values");
            std::size_t best = 0;
            for (const auto& [cat, n] : counts) {
                rule.cat.vocabulary.push_back(cat);
                if (n > best) {
                    best = n;
                    rule.cat.mode = cat;
                }
            }
        }
        plan.columns.push_back(std::move(rule));
    }
    return plan;
}

/// Applies a fitted plan: impute, min-max scale (no clipping; test values may
/// leave [lo,hi]), expand categoricals to one-hot (unseen category → all
/// zeros). Output features are fully numeric.
inline Dataset apply_plan(const PreprocessPlan& plan, const Dataset& d) {
    if (plan.columns.size() != d.n_features()) {
        throw DataError("apply_plan: plan has " + std::to_string(plan.columns.size()) +
                        " columns, dataset has " + std::to_string(d.n_features()));
    }
    for (std::size_t c = 0; c < plan.columns.size(); ++c) {
        if (plan.columns[c].name != d.columns[c].name ||
            plan.columns[c].kind != d.columns[c].kind)
            throw DataError("apply_plan: column mismatch at position " +
                            std::to_string(c) + ": plan '" + plan.columns[c].name +
                            "' vs dataset '" + d.columns[c].name + "'");
    }

    std::vector<ColumnInfo> out_cols;
    std::vector<std::size_t> offset(plan.columns.size());
    for (std::size_t c = 0; c < plan.columns.size(); ++c) {
        offset[c] = out_cols.size();
        const auto& rule = plan.columns[c];
        if (rule.kind == ColumnKind::Numeric) {
            out_cols.push_back({rule.name, ColumnKind::Numeric, {}});
        } else {
            for (const auto& cat : rule.cat.vocabulary)
                out_cols.push_back({rule.name + "=" + cat, ColumnKind::Numeric, {}});
        }
    }

    Dataset out;
    out.features = Matrix(d.n_rows(), out_cols.size());
    out.labels = d.labels;
    out.groups = d.groups;
    out.columns = std::move(out_cols);
    out.group_names = d.group_names;
    out.schema_name = d.schema_name;

    const double lo = plan.scale_lo, hi = plan.scale_hi;
    const double mid = 0.5 * (lo + hi);
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        for (std::size_t c = 0; c < plan.columns.size(); ++c) {
            const auto& rule = plan.columns[c];
            double v = d.features(r, c);
            if (rule.kind == ColumnKind::Numeric) {
                if (std::isnan(v)) v = rule.num.median;
                double scaled = rule.num.degenerate
                                    ? mid
                                    : lo + (v - rule.num.min) /
                                               (rule.num.max - rule.num.min) * (hi - lo);
                out.features(r, offset[c]) = scaled;
            } else {
                std::string cat = std::isnan(v)
                                      ? rule.cat.mode
                                      : d.columns[c].categories[static_cast<std::size_t>(v)];
                auto it = std::lower_bound(rule.cat.vocabulary.begin(),
                                           rule.cat.vocabulary.end(), cat);
                if (it != rule.cat.vocabulary.end() && *it == cat) {
                    std::size_t k = static_cast<std::size_t>(
                        it - rule.cat.vocabulary.begin());
                    out.features(r, offset[c] + k) = 1.0;
                }
                // unseen category: row stays all-zeros across this block
            }
        }
    }
    return out;
}

namespace detail {

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

/// Indices of the k nearest rows to `query` among `candidates` (excluding
/// `self`), distance ties broken by smaller index.
inline std::vector<std::size_t> k_nearest(const Matrix& m,
                                          std::span<const double> query,
                                          const std::vector<std::size_t>& candidates,
                                          std::size_t self, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> best;  // kept sorted, size <= k
    best.reserve(k + 1);
    for (std::size_t idx : candidates) {
        if (idx == self) continue;
        double dd = sq_dist(query, m.row(idx));
        if (best.size() == k && dd >= best.back().first) continue;
        auto pos = std::lower_bound(best.begin(), best.end(),
                                    std::make_pair(dd, idx));
        best.insert(pos, {dd, idx});
        if (best.size() > k) best.pop_back();
    }
    std::vector<std::size_t> out;
    out.reserve(best.size());
    for (const auto& [dd, idx] : best) out.push_back(idx);
    return out;
}

}  // namespace detail

/// SMOTE to exact class balance, then ENN cleaning. Synthetic rows lie on the
/// segment between a minority row and one of its k_smote same-class nearest
/// neighbors and inherit the seed row's group. ENN drops rows whose label
/// loses the majority vote of their k_enn nearest neighbors (ties keep).
inline Dataset smote_enn(const Dataset& train, int k_smote, int k_enn,
                         std::uint64_t seed) {
    if (k_smote < 1 || k_enn < 1) throw ConfigError("smote_enn: k parameters must be >= 1");
    for (const auto& col : train.columns)
        if (col.kind != ColumnKind::Numeric)
            throw PipelineError("smote_enn requires fully numeric features (run after apply_plan)");
    for (double v : train.features.data)
        if (!std::isfinite(v)) throw PipelineError("smote_enn: non-finite feature value");

    std::vector<std::size_t> class_rows[2];
    for (std::size_t i = 0; i < train.n_rows(); ++i)
        class_rows[train.labels[i]].push_back(i);

    int minority = class_rows[0].size() <= class_rows[1].size() ? 0 : 1;
    const auto& min_rows = class_rows[minority];
    std::size_t deficit = class_rows[1 - minority].size() - min_rows.size();

    Matrix feats = train.features;
    std::vector<int> labels = train.labels;
    std::vector<int> groups = train.groups;

    if (deficit > 0) {
        if (min_rows.size() < 2)
            throw DataError("smote_enn: minority class has fewer than 2 rows");
        if (static_cast<std::size_t>(k_smote) + 1 > min_rows.size())
            throw DataError("smote_enn: k_smote exceeds available same-class neighbors");

        // k nearest same-class neighbors per minority row
        std::vector<std::vector<std::size_t>> nbrs(min_rows.size());
        for (std::size_t i = 0; i < min_rows.size(); ++i)
            nbrs[i] = detail::k_nearest(train.features, train.features.row(min_rows[i]),
                                        min_rows, min_rows[i],
                                        static_cast<std::size_t>(k_smote));

        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::size_t cols = feats.cols;
        feats.data.reserve((train.n_rows() + deficit) * cols);
        for (std::size_t s = 0; s < deficit; ++s) {
            std::size_t si = s % min_rows.size();  // round-robin over seed rows
            std::size_t seed_row = min_rows[si];
            std::size_t nbr = nbrs[si][static_cast<std::size_t>(
                rng() % nbrs[si].size())];
            double gap = unit(rng);
            for (std::size_t c = 0; c < cols; ++c) {
                double a = train.features(seed_row, c);
                double b = train.features(nbr, c);
                feats.data.push_back(a + gap * (b - a));
            }
            ++feats.rows;
            labels.push_back(minority);
            groups.push_back(train.groups[seed_row]);
        }
    }

    // ENN pass over originals + synthetics
    std::vector<std::size_t> all(feats.rows);
    std::iota(all.begin(), all.end(), 0);
    if (static_cast<std::size_t>(k_enn) + 1 > feats.rows)
        throw DataError("smote_enn: k_enn exceeds available neighbors");

    std::vector<std::size_t> keep;
    keep.reserve(feats.rows);
    for (std::size_t i = 0; i < feats.rows; ++i) {
        auto nn = detail::k_nearest(feats, feats.row(i), all, i,
                                    static_cast<std::size_t>(k_enn));
        int votes1 = 0;
        for (std::size_t j : nn) votes1 += labels[j];
        int votes0 = static_cast<int>(nn.size()) - votes1;
        int majority = votes1 > votes0 ? 1 : (votes0 > votes1 ? 0 : labels[i]);
        if (majority == labels[i]) keep.push_back(i);
    }

    Dataset out;
    out.features = Matrix(keep.size(), feats.cols);
    out.labels.reserve(keep.size());
    out.groups.reserve(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        std::copy_n(feats.row(keep[i]).data(), feats.cols, out.features.row(i).data());
        out.labels.push_back(labels[keep[i]]);
        out.groups.push_back(groups[keep[i]]);
    }
    out.columns = train.columns;
    out.group_names = train.group_names;
    out.schema_name = train.schema_name;
    if (out.n_rows() == 0) throw PipelineError("smote_enn: ENN removed every row");
    return out;
}

}  // namespace bmnb
