#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bmnb/blended.hpp"
#include "bmnb/dataset.hpp"
#include "bmnb/errors.hpp"
#include "bmnb/metrics.hpp"
#include "bmnb/preprocess.hpp"
#include "bmnb/threshold.hpp"

namespace bmnb {

enum class CalibrationSplit { Train, Eval };

/// Everything needed to turn a raw training split into decisions: scaling,
/// model shape, blending, and thresholding choices.
struct PipelineOptions {
    PreprocessConfig preprocess;
    double epsilon = 1e-9;
    std::size_t min_support = 30;
    bool empirical_group_priors = false;  // default: reuse global priors

    bool thresholding = true;  // false: fixed tau applies
    ThresholdMode threshold_mode = ThresholdMode::DemographicParity;
    double fixed_tau = 0.5;
    CalibrationSplit calibration_split = CalibrationSplit::Train;
    std::optional<double> target_rate;  // default: model's own rate at tau 0.5
};

/// A trained pipeline: fitted preprocessing plan, blended model, and (when
/// calibrated on the training split) the threshold policy.
struct FittedPipeline {
    PreprocessPlan plan;
    BlendedModel model;
    ThresholdPolicy policy;
    PipelineOptions options;
};

namespace detail {

/// Positive-class probabilities under the resolved group model and the
/// global model, so scores for every alpha are cheap convex blends.
struct ScorePair {
    double group_pos;
    double global_pos;

    double blend(double alpha) const {
        return alpha * group_pos + (1.0 - alpha) * global_pos;
    }
};

inline std::vector<ScorePair> score_pairs(const BlendedModel& m, const Dataset& d) {
    std::vector<ScorePair> out;
    out.reserve(d.n_rows());
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        double pg = positive_proba(m.global_model, d.features.row(i));
        double pgr = pg;
        auto it = m.group_models.find(d.groups[i]);
        if (m.is_eligible(d.groups[i]) && it != m.group_models.end())
            pgr = positive_proba(it->second, d.features.row(i));
        out.push_back({pgr, pg});
    }
    return out;
}

inline std::vector<double> blend_all(const std::vector<ScorePair>& pairs, double alpha) {
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(p.blend(alpha));
    return out;
}

inline ThresholdPolicy calibrate(const PipelineOptions& opts,
                                 const std::vector<double>& scores,
                                 const std::vector<int>& groups,
                                 const std::vector<int>& labels) {
    if (!opts.thresholding || opts.threshold_mode == ThresholdMode::Fixed)
        return fixed_policy(opts.fixed_tau);

    if (opts.threshold_mode == ThresholdMode::DemographicParity) {
        double target = opts.target_rate ? *opts.target_rate
                                         : overall_positive_rate(scores, 0.5);
        return calibrate_thresholds(scores, groups, target);
    }

    // equal opportunity: target TPR = overall TPR of the uncalibrated rule
    double target_tpr;
    if (opts.target_rate) {
        target_tpr = *opts.target_rate;
    } else {
        std::size_t pos = 0, hit = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (labels[i] != 1) continue;
            ++pos;
            if (scores[i] >= 0.5) ++hit;
        }
        if (pos == 0)
            throw PipelineError("EO calibration: no positive-labeled calibration rows");
        target_tpr = static_cast<double>(hit) / static_cast<double>(pos);
    }
    return calibrate_thresholds_eo(scores, groups, labels, target_tpr);
}

}  // namespace detail

/// Fits the full pipeline on a raw training split: fit + apply preprocessing,
/// optional SMOTEENN (training rows only), blended model training, and
/// threshold calibration on the (unresampled) training rows.
inline FittedPipeline fit_pipeline(const Dataset& train, double alpha,
                                   const PipelineOptions& opts) {
    FittedPipeline fp;
    fp.options = opts;
    fp.plan = fit_plan(train, opts.preprocess);
    Dataset prepped = apply_plan(fp.plan, train);

    Dataset fit_data = prepped;
    if (opts.preprocess.resample) {
        const auto& r = *opts.preprocess.resample;
        fit_data = smote_enn(prepped, r.k_smote, r.k_enn, r.seed);
    }

    fp.model = train_blended(fit_data, opts.epsilon, opts.min_support, {},
                             opts.empirical_group_priors);
    fp.model.alpha = alpha;

    if (opts.calibration_split == CalibrationSplit::Train) {
        auto pairs = detail::score_pairs(fp.model, prepped);
        auto scores = detail::blend_all(pairs, alpha);
        fp.policy = detail::calibrate(opts, scores, prepped.groups, prepped.labels);
    } else {
        fp.policy = fixed_policy(opts.fixed_tau);  // replaced at predict time
    }
    return fp;
}

/// Positive-class scores of the fitted pipeline on raw rows.
inline std::vector<double> pipeline_scores(const FittedPipeline& fp, const Dataset& d) {
    Dataset prepped = apply_plan(fp.plan, d);
    auto pairs = detail::score_pairs(fp.model, prepped);
    return detail::blend_all(pairs, *fp.model.alpha);
}

/// Final labels on raw rows. With eval-side calibration the policy is
/// re-derived from this dataset's own scores.
inline std::vector<int> pipeline_predict(const FittedPipeline& fp, const Dataset& d,
                                         ThresholdPolicy* used_policy = nullptr) {
    auto scores = pipeline_scores(fp, d);
    ThresholdPolicy policy = fp.policy;
    if (fp.options.calibration_split == CalibrationSplit::Eval &&
        fp.options.thresholding && fp.options.threshold_mode != ThresholdMode::Fixed)
        policy = detail::calibrate(fp.options, scores, d.groups, d.labels);
    if (used_policy) *used_policy = policy;
    return apply_policy(policy, scores, d.groups);
}

/// Cross-validated alpha selection: J = lambda * accuracy + (1 - lambda) *
/// fairness score, averaged over stratified folds; ties break to smaller alpha.
struct AlphaSelection {
    struct Row {
        double alpha;
        double cv_accuracy;
        double cv_fairness;
        double objective;
    };
    std::vector<double> grid;
    double lambda = 0.5;
    int folds = 5;
    std::vector<Row> per_alpha_scores;
    double chosen_alpha = 0.0;
};

inline AlphaSelection select_alpha(const Dataset& train, std::vector<double> grid,
                                   double lambda, int folds, std::uint64_t seed,
                                   const PipelineOptions& opts) {
    if (grid.empty()) throw ConfigError("select_alpha: empty alpha grid");
    if (lambda < 0.0 || lambda > 1.0)
        throw ConfigError("select_alpha: lambda outside [0,1]");
    for (double a : grid)
        if (a < 0.0 || a > 1.0) throw ConfigError("select_alpha: alpha outside [0,1]");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto fold_of = stratified_folds(train, folds, seed);

    std::vector<double> sum_acc(grid.size(), 0.0), sum_fair(grid.size(), 0.0);
    for (int f = 0; f < folds; ++f) {
        std::vector<std::size_t> tr_rows, te_rows;
        for (std::size_t i = 0; i < train.n_rows(); ++i)
            (fold_of[i] == f ? te_rows : tr_rows).push_back(i);
        Dataset fold_train = train.subset(tr_rows);
        Dataset fold_test = train.subset(te_rows);

        PipelineOptions fold_opts = opts;
        if (fold_opts.preprocess.resample)
            fold_opts.preprocess.resample->seed =
                opts.preprocess.resample->seed + static_cast<std::uint64_t>(f) + 1;

        // train once per fold; alpha only affects the blend of cached scores
        FittedPipeline fp = fit_pipeline(fold_train, 0.0, fold_opts);
        Dataset prepped_train = apply_plan(fp.plan, fold_train);
        Dataset prepped_test = apply_plan(fp.plan, fold_test);
        auto calib_pairs = detail::score_pairs(fp.model, prepped_train);
        auto test_pairs = detail::score_pairs(fp.model, prepped_test);

        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            auto calib_scores = detail::blend_all(calib_pairs, grid[gi]);
            auto test_scores = detail::blend_all(test_pairs, grid[gi]);
            ThresholdPolicy policy =
                fold_opts.calibration_split == CalibrationSplit::Eval &&
                        fold_opts.thresholding &&
                        fold_opts.threshold_mode != ThresholdMode::Fixed
                    ? detail::calibrate(fold_opts, test_scores, fold_test.groups,
                                        fold_test.labels)
                    : detail::calibrate(fold_opts, calib_scores, fold_train.groups,
                                        fold_train.labels);
            auto preds = apply_policy(policy, test_scores, fold_test.groups);

            FairnessReport rep =
                evaluate_fairness(fold_test.labels, preds, fold_test.groups,
                                  kPrivilegedCode, kUnprivilegedCode);
            sum_acc[gi] += rep.classification.accuracy;
            sum_fair[gi] += rep.fs.value_or(0.0);
        }
    }

    AlphaSelection sel;
    sel.grid = grid;
    sel.lambda = lambda;
    sel.folds = folds;
    double best = -1.0;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        double acc = sum_acc[gi] / folds;
        double fair = sum_fair[gi] / folds;
        double j = lambda * acc + (1.0 - lambda) * fair;
        sel.per_alpha_scores.push_back({grid[gi], acc, fair, j});
        if (j > best) {  // strict: ties keep the smaller alpha
            best = j;
            sel.chosen_alpha = grid[gi];
        }
    }
    return sel;
}

}  // namespace bmnb
