#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmnb/errors.hpp"

namespace bmnb {

enum class ThresholdMode { DemographicParity, EqualOpportunity, Fixed };

inline std::string to_string(ThresholdMode m) {
    switch (m) {
        case ThresholdMode::DemographicParity: return "dp";
        case ThresholdMode::EqualOpportunity: return "eo";
        case ThresholdMode::Fixed: return "fixed";
    }
    return "?";
}

/// Group-specific decision thresholds. The decision rule is strictly
/// score > tau_g; midpoint thresholds make this match the target count
/// exactly when calibration scores are distinct.
struct ThresholdPolicy {
    std::map<int, double> thresholds;
    double default_threshold = 0.5;  // unmapped groups
    double target_rate = 0.0;
    ThresholdMode mode = ThresholdMode::Fixed;
};

inline ThresholdPolicy fixed_policy(double tau) {
    ThresholdPolicy p;
    p.default_threshold = tau;
    p.target_rate = 0.0;
    p.mode = ThresholdMode::Fixed;
    return p;
}

/// Fraction of rows with score >= tau.
inline double overall_positive_rate(const std::vector<double>& scores, double tau) {
    if (scores.empty()) throw DataError("overall_positive_rate: no scores");
    std::size_t n = 0;
    for (double s : scores) {
        if (s < 0.0 || s > 1.0)
            throw DataError("overall_positive_rate: score outside [0,1]");
        if (s >= tau) ++n;
    }
    return static_cast<double>(n) / static_cast<double>(scores.size());
}

namespace detail {

/// Quantile threshold over a group's scores: with scores sorted descending
/// and k = round(rate * n), tau is the midpoint of s_k and s_{k+1} so that
/// exactly k distinct scores exceed it. k = 0 maps to tau = 1, k = n to 0.
inline double quantile_threshold(std::vector<double> scores, double rate) {
    std::sort(scores.begin(), scores.end(), std::greater<>());
    auto n = scores.size();
    auto k = static_cast<std::size_t>(
        std::llround(rate * static_cast<double>(n)));
    if (k == 0) return 1.0;
    if (k >= n) return 0.0;
    return 0.5 * (scores[k - 1] + scores[k]);
}

}  // namespace detail

/// Demographic-parity calibration: per group, pick the score quantile that
/// makes the group's positive rate match target_rate on the calibration set.
inline ThresholdPolicy calibrate_thresholds(const std::vector<double>& scores,
                                            const std::vector<int>& groups,
                                            double target_rate) {
    if (scores.size() != groups.size())
        throw DataError("calibrate_thresholds: scores/groups length mismatch");
    if (scores.empty()) throw DataError("calibrate_thresholds: empty calibration set");
    if (target_rate < 0.0 || target_rate > 1.0)
        throw ConfigError("calibrate_thresholds: target_rate outside [0,1]");
    for (double s : scores)
        if (!(s >= 0.0 && s <= 1.0))
            throw DataError("calibrate_thresholds: score outside [0,1]");

    std::map<int, std::vector<double>> by_group;
    for (std::size_t i = 0; i < scores.size(); ++i)
        by_group[groups[i]].push_back(scores[i]);

    ThresholdPolicy p;
    p.mode = ThresholdMode::DemographicParity;
    p.target_rate = target_rate;
    for (auto& [g, gs] : by_group)
        p.thresholds[g] = detail::quantile_threshold(std::move(gs), target_rate);
    return p;
}

/// Equal-opportunity calibration: quantile over each group's positive-labeled
/// scores at the target TPR. Groups without positive-labeled rows are left
/// unmapped (default threshold applies).
inline ThresholdPolicy calibrate_thresholds_eo(const std::vector<double>& scores,
                                               const std::vector<int>& groups,
                                               const std::vector<int>& labels,
                                               double target_tpr) {
    if (scores.size() != groups.size() || scores.size() != labels.size())
        throw DataError("calibrate_thresholds_eo: input length mismatch");
    if (target_tpr < 0.0 || target_tpr > 1.0)
        throw ConfigError("calibrate_thresholds_eo: target rate outside [0,1]");

    std::map<int, std::vector<double>> pos_by_group;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (labels[i] == 1) pos_by_group[groups[i]].push_back(scores[i]);

    ThresholdPolicy p;
    p.mode = ThresholdMode::EqualOpportunity;
    p.target_rate = target_tpr;
    for (auto& [g, gs] : pos_by_group)
        p.thresholds[g] = detail::quantile_threshold(std::move(gs), target_tpr);
    return p;
}

/// Final labels: 1 iff score > tau of the row's group (default threshold for
/// unmapped groups).
inline std::vector<int> apply_policy(const ThresholdPolicy& p,
                                     const std::vector<double>& scores,
                                     const std::vector<int>& groups) {
    if (scores.size() != groups.size())
        throw DataError("apply_policy: scores/groups length mismatch");
    std::vector<int> labels(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        auto it = p.thresholds.find(groups[i]);
        double tau = it != p.thresholds.end() ? it->second : p.default_threshold;
        labels[i] = scores[i] > tau ? 1 : 0;
    }
    return labels;
}

inline nlohmann::json to_json(const ThresholdPolicy& p) {
    nlohmann::json taus = nlohmann::json::object();
    for (const auto& [g, t] : p.thresholds) taus[std::to_string(g)] = t;
    return {{"format", "bmnb.policy.v1"},
            {"mode", to_string(p.mode)},
            {"target_rate", p.target_rate},
            {"default_threshold", p.default_threshold},
            {"thresholds", taus}};
}

}  // namespace bmnb
