#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmnb/errors.hpp"

namespace bmnb {

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    std::size_t actual_pos() const { return tp + fn; }
    std::size_t actual_neg() const { return fp + tn; }
    std::size_t predicted_pos() const { return tp + fp; }
};

inline Confusion confusion(const std::vector<int>& y_true,
                           const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw DataError("confusion: length mismatch");
    Confusion c;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if ((y_true[i] | y_pred[i]) & ~1)
            throw DataError("confusion: labels must be 0/1");
        if (y_true[i] == 1)
            y_pred[i] == 1 ? ++c.tp : ++c.fn;
        else
            y_pred[i] == 1 ? ++c.fp : ++c.tn;
    }
    return c;
}

/// Per-group selection rate / TPR / FPR. Degenerate denominators give
/// nullopt, never a silent zero.
struct GroupStats {
    std::size_t support = 0;
    std::size_t actual_positives = 0;
    std::size_t actual_negatives = 0;
    double selection_rate = 0.0;            // P(pred=1 | group)
    std::optional<double> tpr;
    std::optional<double> fpr;
};

struct GroupRates {
    std::map<int, GroupStats> per_group;
    int privileged_code = 0;
    int unprivileged_code = 1;

    const GroupStats& privileged() const { return per_group.at(privileged_code); }
    const GroupStats& unprivileged() const { return per_group.at(unprivileged_code); }
};

inline GroupRates group_rates(const std::vector<int>& y_true,
                              const std::vector<int>& y_pred,
                              const std::vector<int>& groups,
                              int privileged_code, int unprivileged_code) {
    if (y_true.size() != y_pred.size() || y_true.size() != groups.size())
        throw DataError("group_rates: length mismatch");

    std::map<int, Confusion> by_group;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        Confusion& c = by_group[groups[i]];
        if (y_true[i] == 1)
            y_pred[i] == 1 ? ++c.tp : ++c.fn;
        else
            y_pred[i] == 1 ? ++c.fp : ++c.tn;
    }
    if (!by_group.count(privileged_code) || !by_group.count(unprivileged_code))
        throw DataError("group_rates: privileged or unprivileged group has no rows");

    GroupRates r;
    r.privileged_code = privileged_code;
    r.unprivileged_code = unprivileged_code;
    for (const auto& [g, c] : by_group) {
        GroupStats s;
        s.support = c.total();
        s.actual_positives = c.actual_pos();
        s.actual_negatives = c.actual_neg();
        s.selection_rate =
            static_cast<double>(c.predicted_pos()) / static_cast<double>(c.total());
        if (c.actual_pos() > 0)
            s.tpr = static_cast<double>(c.tp) / static_cast<double>(c.actual_pos());
        if (c.actual_neg() > 0)
            s.fpr = static_cast<double>(c.fp) / static_cast<double>(c.actual_neg());
        r.per_group[g] = s;
    }
    return r;
}

/// DI = unprivileged selection rate / privileged selection rate; undefined
/// when the privileged rate is 0.
inline std::optional<double> disparate_impact(const GroupRates& r) {
    double priv = r.privileged().selection_rate;
    if (priv == 0.0) return std::nullopt;
    return r.unprivileged().selection_rate / priv;
}

/// SPD = unprivileged selection rate - privileged selection rate.
inline double statistical_parity_difference(const GroupRates& r) {
    return r.unprivileged().selection_rate - r.privileged().selection_rate;
}

/// EOD = TPR_unprivileged - TPR_privileged.
inline std::optional<double> equal_opportunity_difference(const GroupRates& r) {
    if (!r.unprivileged().tpr || !r.privileged().tpr) return std::nullopt;
    return *r.unprivileged().tpr - *r.privileged().tpr;
}

/// EMOD = FPR_unprivileged - FPR_privileged.
inline std::optional<double> equal_misopportunity_difference(const GroupRates& r) {
    if (!r.unprivileged().fpr || !r.privileged().fpr) return std::nullopt;
    return *r.unprivileged().fpr - *r.privileged().fpr;
}

enum class BiasAggregation { MeanAbs, Rms };

/// Bias Index: aggregate deviation of {SPD, DI, EOD, EMOD} from their ideal
/// values {0, 1, 0, 0}. Mean absolute deviation by default; RMS available.
inline std::optional<double> bias_index(std::optional<double> spd,
                                        std::optional<double> di,
                                        std::optional<double> eod,
                                        std::optional<double> emod,
                                        BiasAggregation agg = BiasAggregation::MeanAbs) {
    if (!spd || !di || !eod || !emod) return std::nullopt;
    double devs[4] = {*spd - 0.0, *di - 1.0, *eod - 0.0, *emod - 0.0};
    if (agg == BiasAggregation::MeanAbs) {
        double s = 0.0;
        for (double d : devs) s += std::fabs(d);
        return s / 4.0;
    }
    double s = 0.0;
    for (double d : devs) s += d * d;
    return std::sqrt(s / 4.0);
}

inline std::optional<double> fairness_score(std::optional<double> bi) {
    if (!bi) return std::nullopt;
    if (*bi < 0.0) throw DataError("fairness_score: bias index must be >= 0");
    return 1.0 - *bi;
}

struct ClassReport {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::size_t support = 0;
};

struct ClassificationReport {
    ClassReport per_class[2];  // indexed by class label
    double accuracy = 0.0;
    std::optional<double> macro_precision, macro_recall, macro_f1;
};

inline ClassificationReport classification_report(const std::vector<int>& y_true,
                                                  const std::vector<int>& y_pred) {
    Confusion c = confusion(y_true, y_pred);
    ClassificationReport rep;

    auto fill = [](ClassReport& r, std::size_t tp, std::size_t fp, std::size_t fn,
                   std::size_t support) {
        r.support = support;
        if (tp + fp > 0)
            r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        if (tp + fn > 0)
            r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        if (r.precision && r.recall && (*r.precision + *r.recall) > 0)
            r.f1 = 2.0 * *r.precision * *r.recall / (*r.precision + *r.recall);
    };
    // class 1 as positive, then class 0 with roles flipped
    fill(rep.per_class[1], c.tp, c.fp, c.fn, c.actual_pos());
    fill(rep.per_class[0], c.tn, c.fn, c.fp, c.actual_neg());
    rep.accuracy = c.total() == 0
                       ? 0.0
                       : static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());

    auto avg = [](std::optional<double> a, std::optional<double> b)
        -> std::optional<double> {
        if (!a || !b) return std::nullopt;
        return 0.5 * (*a + *b);
    };
    rep.macro_precision = avg(rep.per_class[0].precision, rep.per_class[1].precision);
    rep.macro_recall = avg(rep.per_class[0].recall, rep.per_class[1].recall);
    rep.macro_f1 = avg(rep.per_class[0].f1, rep.per_class[1].f1);
    return rep;
}

/// Everything the harness reports for one evaluated model.
struct FairnessReport {
    ClassificationReport classification;
    double spd = 0.0;
    std::optional<double> di, eod, emod, bi, fs;
    GroupRates rates;
};

inline FairnessReport evaluate_fairness(const std::vector<int>& y_true,
                                        const std::vector<int>& y_pred,
                                        const std::vector<int>& groups,
                                        int privileged_code, int unprivileged_code,
                                        BiasAggregation agg = BiasAggregation::MeanAbs) {
    FairnessReport rep;
    rep.classification = classification_report(y_true, y_pred);
    rep.rates = group_rates(y_true, y_pred, groups, privileged_code, unprivileged_code);
    rep.spd = statistical_parity_difference(rep.rates);
    rep.di = disparate_impact(rep.rates);
    rep.eod = equal_opportunity_difference(rep.rates);
    rep.emod = equal_misopportunity_difference(rep.rates);
    rep.bi = bias_index(rep.spd, rep.di, rep.eod, rep.emod, agg);
    rep.fs = fairness_score(rep.bi);
    return rep;
}

namespace detail {

inline nlohmann::json opt_json(std::optional<double> v) {
    if (!v) return nullptr;
    return *v;
}

}  // namespace detail

inline nlohmann::json to_json(const FairnessReport& r) {
    nlohmann::json groups = nlohmann::json::object();
    for (const auto& [g, s] : r.rates.per_group) {
        groups[std::to_string(g)] = {{"support", s.support},
                                     {"selection_rate", s.selection_rate},
                                     {"tpr", detail::opt_json(s.tpr)},
                                     {"fpr", detail::opt_json(s.fpr)}};
    }
    nlohmann::json per_class = nlohmann::json::object();
    for (int c : {0, 1}) {
        const auto& pc = r.classification.per_class[c];
        per_class[std::to_string(c)] = {{"precision", detail::opt_json(pc.precision)},
                                        {"recall", detail::opt_json(pc.recall)},
                                        {"f1", detail::opt_json(pc.f1)},
                                        {"support", pc.support}};
    }
    return {{"accuracy", r.classification.accuracy},
            {"per_class", per_class},
            {"spd", r.spd},
            {"di", detail::opt_json(r.di)},
            {"eod", detail::opt_json(r.eod)},
            {"emod", detail::opt_json(r.emod)},
            {"bi", detail::opt_json(r.bi)},
            {"fs", detail::opt_json(r.fs)},
            {"group_rates", groups},
            {"privileged_code", r.rates.privileged_code},
            {"unprivileged_code", r.rates.unprivileged_code}};
}

}  // namespace bmnb
