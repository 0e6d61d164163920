#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include <json.hpp>

#include "bmnb/dataset.hpp"
#include "bmnb/errors.hpp"
#include "bmnb/gaussian_nb.hpp"

namespace bmnb {

/// Global Gaussian NB plus one model per sensitive group, blended with a
/// convex coefficient alpha. Groups whose model failed the per-class support
/// check resolve to the global model.
struct BlendedModel {
    GaussianNBModel global_model;
    std::map<int, GaussianNBModel> group_models;
    std::optional<double> alpha;    // unset until chosen
    std::size_t min_support = 30;   // per-class row floor for group models
    std::set<int> eligible_groups;

    bool is_eligible(int group) const { return eligible_groups.count(group) > 0; }
};

/// Trains the global model on all rows and one model per group on that
/// group's rows. A group missing a class, or with fewer than min_support rows
/// in either class, is demoted to global fallback.
inline BlendedModel train_blended(const Dataset& train, double epsilon,
                                  std::size_t min_support,
                                  std::optional<std::vector<double>> priors = {},
                                  bool per_group_empirical_priors = false) {
    if (train.n_rows() == 0) throw DataError("train_blended: empty training set");

    BlendedModel m;
    m.min_support = min_support;
    m.global_model = train_gnb(train.features, train.labels, epsilon, priors);

    // fixed priors: group models reuse the global model's priors unless the
    // caller opts into per-fit empirical priors
    std::optional<std::vector<double>> shared_priors;
    if (!per_group_empirical_priors)
        shared_priors = priors ? *priors : m.global_model.priors;

    std::map<int, std::vector<std::size_t>> by_group;
    for (std::size_t i = 0; i < train.n_rows(); ++i)
        by_group[train.groups[i]].push_back(i);

    for (const auto& [g, rows] : by_group) {
        std::size_t n_pos = 0;
        for (std::size_t r : rows) n_pos += static_cast<std::size_t>(train.labels[r]);
        std::size_t n_neg = rows.size() - n_pos;
        if (n_pos < min_support || n_neg < min_support) continue;  // fallback

        Matrix Xg(rows.size(), train.features.cols);
        std::vector<int> yg;
        yg.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::copy_n(train.features.row(rows[i]).data(), train.features.cols,
                        Xg.row(i).data());
            yg.push_back(train.labels[rows[i]]);
        }
        try {
            m.group_models[g] = train_gnb(Xg, yg, epsilon, shared_priors);
            m.eligible_groups.insert(g);
        } catch (const std::exception&) {
            // group fit failed: demoted to fallback, not fatal
        }
    }
    return m;
}

/// alpha * P_group + (1 - alpha) * P_global. Total over all group codes:
/// ineligible or unseen groups resolve to the global model.
inline std::vector<double> blend_proba(const BlendedModel& m,
                                       std::span<const double> x, int group) {
    if (!m.alpha) throw PipelineError("blend_proba: alpha not set");
    double a = *m.alpha;
    if (a < 0.0 || a > 1.0) throw ConfigError("blend_proba: alpha outside [0,1]");

    std::vector<double> p_global = predict_proba(m.global_model, x);
    if (a == 0.0) return p_global;

    std::vector<double> p_group;
    auto it = m.group_models.find(group);
    if (m.is_eligible(group) && it != m.group_models.end())
        p_group = predict_proba(it->second, x);
    else
        p_group = p_global;
    if (a == 1.0) return p_group;

    std::vector<double> out(p_global.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = a * p_group[k] + (1.0 - a) * p_global[k];
    return out;
}

/// Positive-class probability under the blend.
inline double blend_positive_proba(const BlendedModel& m, std::span<const double> x,
                                   int group) {
    auto p = blend_proba(m, x, group);
    const auto& classes = m.global_model.classes;
    for (std::size_t k = 0; k < classes.size(); ++k)
        if (classes[k] == 1) return p[k];
    return 0.0;
}

inline nlohmann::json to_json(const BlendedModel& m) {
    nlohmann::json groups = nlohmann::json::object();
    for (const auto& [g, gm] : m.group_models)
        groups[std::to_string(g)] = to_json(gm);
    nlohmann::json j{{"format", "bmnb.blended.v1"},
                     {"global", to_json(m.global_model)},
                     {"groups", groups},
                     {"min_support", m.min_support},
                     {"eligible_groups", std::vector<int>(m.eligible_groups.begin(),
                                                          m.eligible_groups.end())}};
    if (m.alpha) j["alpha"] = *m.alpha;
    return j;
}

inline BlendedModel blended_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "bmnb.blended.v1")
        throw DataError("blended_from_json: unsupported format tag");
    BlendedModel m;
    m.global_model = gnb_from_json(j.at("global"));
    for (const auto& [key, val] : j.at("groups").items())
        m.group_models[std::stoi(key)] = gnb_from_json(val);
    m.min_support = j.at("min_support").get<std::size_t>();
    for (int g : j.at("eligible_groups").get<std::vector<int>>())
        m.eligible_groups.insert(g);
    if (j.contains("alpha")) m.alpha = j.at("alpha").get<double>();
    return m;
}

}  // namespace bmnb
