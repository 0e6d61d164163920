#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmnb/dataset.hpp"
#include "bmnb/errors.hpp"
#include "bmnb/metrics.hpp"
#include "bmnb/pipeline.hpp"

namespace bmnb {

enum class Variant { Baseline, BlendedOnly, ThresholdOnly, FullBmnb };

inline std::string to_string(Variant v) {
    switch (v) {
        case Variant::Baseline: return "baseline";
        case Variant::BlendedOnly: return "blended_only";
        case Variant::ThresholdOnly: return "threshold_only";
        case Variant::FullBmnb: return "full_bmnb";
    }
    return "?";
}

inline Variant variant_from_string(const std::string& s) {
    if (s == "baseline") return Variant::Baseline;
    if (s == "blended_only") return Variant::BlendedOnly;
    if (s == "threshold_only") return Variant::ThresholdOnly;
    if (s == "full_bmnb") return Variant::FullBmnb;
    throw ConfigError("unknown variant: " + s);
}

/// One experiment run, fully determined by its fields plus the seed. A dataset
/// name alone is a valid config; everything else has defaults.
struct ExperimentConfig {
    std::string schema = "adult";       // builtin name, or "custom" with schema_file
    std::string schema_file;
    std::string data_path;

    double test_fraction = 0.2;
    std::uint64_t seed = 42;

    double scale_lo = 0.0;
    double scale_hi = 1.0;
    bool resample = true;
    int k_smote = 5;
    int k_enn = 3;

    double epsilon = 1e-9;
    std::size_t min_support = 30;
    bool empirical_group_priors = false;

    std::optional<double> alpha;  // fixed alpha; unset -> CV selection
    std::vector<double> alpha_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    double lambda = 0.5;
    int folds = 5;

    ThresholdMode threshold_mode = ThresholdMode::DemographicParity;
    double fixed_tau = 0.5;
    CalibrationSplit calibration_split = CalibrationSplit::Train;
    std::optional<double> target_rate;

    Variant variant = Variant::FullBmnb;
    BiasAggregation bi_agg = BiasAggregation::MeanAbs;

    std::string out_dir = "reports";
    bool write_json = true;
    bool write_text = true;

    DatasetSchema resolve_schema() const {
        if (!schema_file.empty()) {
            std::ifstream in(schema_file);
            if (!in) throw ConfigError("cannot open schema file: " + schema_file);
            return parse_schema_file(in);
        }
        return builtin_schema(schema);
    }

    /// Pipeline options for one ablation variant.
    PipelineOptions options_for(Variant v) const {
        PipelineOptions o;
        o.preprocess.scale_lo = scale_lo;
        o.preprocess.scale_hi = scale_hi;
        if (resample) o.preprocess.resample = ResampleParams{k_smote, k_enn, seed};
        o.epsilon = epsilon;
        o.min_support = min_support;
        o.empirical_group_priors = empirical_group_priors;
        o.fixed_tau = fixed_tau;
        o.calibration_split = calibration_split;
        o.target_rate = target_rate;
        if (v == Variant::Baseline || v == Variant::BlendedOnly) {
            o.thresholding = false;
            o.threshold_mode = ThresholdMode::Fixed;
        } else {
            o.thresholding = threshold_mode != ThresholdMode::Fixed;
            o.threshold_mode = threshold_mode;
        }
        return o;
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"schema", schema},
                         {"schema_file", schema_file},
                         {"data_path", data_path},
                         {"test_fraction", test_fraction},
                         {"seed", seed},
                         {"scale_lo", scale_lo},
                         {"scale_hi", scale_hi},
                         {"resample", resample},
                         {"k_smote", k_smote},
                         {"k_enn", k_enn},
                         {"epsilon", epsilon},
                         {"min_support", min_support},
                         {"empirical_group_priors", empirical_group_priors},
                         {"alpha_grid", alpha_grid},
                         {"lambda", lambda},
                         {"folds", folds},
                         {"threshold_mode", bmnb::to_string(threshold_mode)},
                         {"fixed_tau", fixed_tau},
                         {"calibration_split",
                          calibration_split == CalibrationSplit::Train ? "train" : "eval"},
                         {"variant", bmnb::to_string(variant)},
                         {"bi_aggregation",
                          bi_agg == BiasAggregation::MeanAbs ? "mean_abs" : "rms"}};
        j["alpha"] = alpha ? nlohmann::json(*alpha) : nlohmann::json(nullptr);
        j["target_rate"] = target_rate ? nlohmann::json(*target_rate) : nlohmann::json(nullptr);
        return j;
    }
};

namespace detail {

inline std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("bad alpha grid entry: '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty alpha grid");
    return out;
}

inline bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigError("expected boolean, got '" + v + "'");
}

}  // namespace detail

/// Applies one `key = value` setting. Shared by the config-file reader and
/// the CLI flag layer.
inline void apply_config_setting(ExperimentConfig& cfg, const std::string& key,
                                 const std::string& value) {
    try {
        if (key == "schema") cfg.schema = value;
        else if (key == "schema_file") cfg.schema_file = value;
        else if (key == "data") cfg.data_path = value;
        else if (key == "test_fraction") cfg.test_fraction = std::stod(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "scale_lo") cfg.scale_lo = std::stod(value);
        else if (key == "scale_hi") cfg.scale_hi = std::stod(value);
        else if (key == "resample") cfg.resample = detail::parse_bool(value);
        else if (key == "k_smote") cfg.k_smote = std::stoi(value);
        else if (key == "k_enn") cfg.k_enn = std::stoi(value);
        else if (key == "epsilon") cfg.epsilon = std::stod(value);
        else if (key == "min_support") cfg.min_support = std::stoull(value);
        else if (key == "priors") cfg.empirical_group_priors = (value == "empirical");
        else if (key == "alpha") cfg.alpha = std::stod(value);
        else if (key == "alpha_grid") cfg.alpha_grid = detail::parse_grid(value);
        else if (key == "lambda") cfg.lambda = std::stod(value);
        else if (key == "folds") cfg.folds = std::stoi(value);
        else if (key == "threshold_mode") {
            if (value == "dp") cfg.threshold_mode = ThresholdMode::DemographicParity;
            else if (value == "eo") cfg.threshold_mode = ThresholdMode::EqualOpportunity;
            else if (value == "fixed") cfg.threshold_mode = ThresholdMode::Fixed;
            else throw ConfigError("threshold_mode must be dp, eo or fixed");
        } else if (key == "fixed_tau") cfg.fixed_tau = std::stod(value);
        else if (key == "calibration_split") {
            if (value == "train") cfg.calibration_split = CalibrationSplit::Train;
            else if (value == "eval") cfg.calibration_split = CalibrationSplit::Eval;
            else throw ConfigError("calibration_split must be train or eval");
        } else if (key == "target_rate") cfg.target_rate = std::stod(value);
        else if (key == "variant") cfg.variant = variant_from_string(value);
        else if (key == "bi_aggregation") {
            if (value == "mean_abs") cfg.bi_agg = BiasAggregation::MeanAbs;
            else if (value == "rms") cfg.bi_agg = BiasAggregation::Rms;
            else throw ConfigError("bi_aggregation must be mean_abs or rms");
        } else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "write_json") cfg.write_json = detail::parse_bool(value);
        else if (key == "write_text") cfg.write_text = detail::parse_bool(value);
        else throw ConfigError("unknown config key: '" + key + "'");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("bad value for config key '" + key + "': '" + value + "'");
    }
}

/// Reads a `key = value` config file (# comments). Flags given on the CLI
/// override file settings.
inline void load_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
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
            throw ConfigError("config file line " + std::to_string(lineno) +
                              ": expected key = value");
        apply_config_setting(cfg, detail::trim(line.substr(0, eq)),
                             detail::trim(line.substr(eq + 1)));
    }
}

struct RunResult {
    nlohmann::json config_snapshot;
    std::string variant;
    std::optional<double> chosen_alpha;
    std::optional<AlphaSelection> selection;
    ThresholdPolicy policy;
    FairnessReport report;
    std::uint64_t test_partition_hash = 0;
    double duration_seconds = 0.0;  // console diagnostics only, never in files
};

namespace detail {

/// FNV-1a over the test split's contents; used to verify that ablation
/// variants share one partition.
inline std::uint64_t partition_hash(const Dataset& d) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    for (double v : d.features.data) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        mix(bits);
    }
    for (int v : d.labels) mix(static_cast<std::uint64_t>(v));
    for (int v : d.groups) mix(static_cast<std::uint64_t>(v));
    return h;
}

}  // namespace detail

/// Runs one variant on a fixed train/test partition.
inline RunResult run_on_partition(const ExperimentConfig& cfg, Variant variant,
                                  const Dataset& train, const Dataset& test) {
    auto t0 = std::chrono::steady_clock::now();
    PipelineOptions opts = cfg.options_for(variant);

    double alpha = 0.0;
    RunResult res;
    if (variant == Variant::BlendedOnly || variant == Variant::FullBmnb) {
        if (cfg.alpha) {
            alpha = *cfg.alpha;
        } else {
            res.selection =
                select_alpha(train, cfg.alpha_grid, cfg.lambda, cfg.folds, cfg.seed, opts);
            alpha = res.selection->chosen_alpha;
        }
        res.chosen_alpha = alpha;
    }

    FittedPipeline fp = fit_pipeline(train, alpha, opts);
    auto preds = pipeline_predict(fp, test, &res.policy);

    res.config_snapshot = cfg.to_json();
    res.config_snapshot["variant"] = to_string(variant);
    res.variant = to_string(variant);
    res.report = evaluate_fairness(test.labels, preds, test.groups, kPrivilegedCode,
                                   kUnprivilegedCode, cfg.bi_agg);
    res.test_partition_hash = detail::partition_hash(test);
    res.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

inline std::pair<Dataset, Dataset> load_and_split(const ExperimentConfig& cfg) {
    Dataset d = load_dataset_file(cfg.data_path, cfg.resolve_schema());
    return stratified_split(d, cfg.test_fraction, cfg.seed);
}

inline RunResult run_experiment(const ExperimentConfig& cfg) {
    auto [train, test] = load_and_split(cfg);
    return run_on_partition(cfg, cfg.variant, train, test);
}

struct SweepRow {
    double alpha;
    double accuracy;
    std::optional<double> fairness_score;
    std::optional<double> bias_index;
};

/// One evaluation per alpha over a shared partition, shared preprocessing and
/// shared trained models; only the blend and the thresholds move.
inline std::vector<SweepRow> alpha_sweep(const ExperimentConfig& cfg,
                                         const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("alpha_sweep: empty grid");
    if (cfg.variant != Variant::BlendedOnly && cfg.variant != Variant::FullBmnb)
        throw ConfigError("alpha_sweep: variant must be blended_only or full_bmnb");
    auto [train, test] = load_and_split(cfg);

    PipelineOptions opts = cfg.options_for(cfg.variant);
    FittedPipeline fp = fit_pipeline(train, 0.0, opts);
    Dataset prepped_train = apply_plan(fp.plan, train);
    Dataset prepped_test = apply_plan(fp.plan, test);
    auto calib_pairs = detail::score_pairs(fp.model, prepped_train);
    auto test_pairs = detail::score_pairs(fp.model, prepped_test);

    std::vector<SweepRow> rows;
    for (double a : grid) {
        auto calib_scores = detail::blend_all(calib_pairs, a);
        auto test_scores = detail::blend_all(test_pairs, a);
        ThresholdPolicy policy =
            opts.calibration_split == CalibrationSplit::Eval && opts.thresholding &&
                    opts.threshold_mode != ThresholdMode::Fixed
                ? detail::calibrate(opts, test_scores, test.groups, test.labels)
                : detail::calibrate(opts, calib_scores, train.groups, train.labels);
        auto preds = apply_policy(policy, test_scores, test.groups);
        FairnessReport rep = evaluate_fairness(test.labels, preds, test.groups,
                                               kPrivilegedCode, kUnprivilegedCode,
                                               cfg.bi_agg);
        rows.push_back({a, rep.classification.accuracy, rep.fs, rep.bi});
    }
    return rows;
}

/// Runs blended_only, threshold_only and full_bmnb on one shared partition.
inline std::vector<RunResult> ablation(const ExperimentConfig& cfg) {
    auto [train, test] = load_and_split(cfg);
    std::vector<RunResult> out;
    for (Variant v : {Variant::BlendedOnly, Variant::ThresholdOnly, Variant::FullBmnb})
        out.push_back(run_on_partition(cfg, v, train, test));
    return out;
}

struct TradeoffRow {
    double alpha;
    double product;  // fairness score * accuracy
};

struct TradeoffSummary {
    std::vector<TradeoffRow> rows;
    double mean = 0.0;
    double spread = 0.0;  // max - min
};

/// The F*A product per sweep point, reported as a diagnostic. No constancy is
/// asserted; the spread is what it is.
inline TradeoffSummary tradeoff_constant(const std::vector<SweepRow>& sweep) {
    if (sweep.empty()) throw ConfigError("tradeoff_constant: empty sweep");
    TradeoffSummary s;
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        double p = sweep[i].fairness_score.value_or(0.0) * sweep[i].accuracy;
        s.rows.push_back({sweep[i].alpha, p});
        s.mean += p;
        lo = i == 0 ? p : std::min(lo, p);
        hi = i == 0 ? p : std::max(hi, p);
    }
    s.mean /= static_cast<double>(s.rows.size());
    s.spread = hi - lo;
    return s;
}

// ---------------------------------------------------------------------------
// report emission

namespace detail {

inline std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

inline std::string fmt_opt(std::optional<double> v, int prec = 4) {
    return v ? fmt(*v, prec) : std::string("undef");
}

/// Aligned plain-text table.
inline std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (width.size() <= c) width.resize(c + 1, 0);
            width[c] = std::max(width[c], r[c].size());
        }
    std::ostringstream out;
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            out << r[c];
            if (c + 1 < r.size())
                out << std::string(width[c] - r[c].size() + 2, ' ');
        }
        out << '\n';
    }
    return out.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PipelineError("cannot write report file: " + path.string());
    out << content;
}

inline std::string report_header(const nlohmann::json& config) {
    std::ostringstream out;
    out << "# bmnb report\n";
    out << "# seed = " << config.at("seed").get<std::uint64_t>() << "\n";
    out << "# schema = " << config.at("schema").get<std::string>() << "\n";
    out << "# variant = " << config.value("variant", std::string("-")) << "\n";
    return out.str();
}

inline std::vector<std::string> metric_row_names() {
    return {"Accuracy", "Precision", "Recall", "F1", "EOD", "EMOD", "SPD", "DI", "BI", "FS"};
}

inline std::vector<std::string> metric_column(const FairnessReport& r) {
    const auto& pos = r.classification.per_class[1];
    return {fmt(r.classification.accuracy), fmt_opt(pos.precision), fmt_opt(pos.recall),
            fmt_opt(pos.f1),                fmt_opt(r.eod),         fmt_opt(r.emod),
            fmt(r.spd),                     fmt_opt(r.di),          fmt_opt(r.bi),
            fmt_opt(r.fs)};
}

}  // namespace detail

inline nlohmann::json run_result_json(const RunResult& r) {
    nlohmann::json j{{"config", r.config_snapshot},
                     {"variant", r.variant},
                     {"metrics", to_json(r.report)},
                     {"policy", to_json(r.policy)},
                     {"test_partition_hash", r.test_partition_hash}};
    j["chosen_alpha"] =
        r.chosen_alpha ? nlohmann::json(*r.chosen_alpha) : nlohmann::json(nullptr);
    if (r.selection) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : r.selection->per_alpha_scores)
            rows.push_back({{"alpha", row.alpha},
                            {"cv_accuracy", row.cv_accuracy},
                            {"cv_fairness", row.cv_fairness},
                            {"objective", row.objective}});
        j["alpha_selection"] = {{"lambda", r.selection->lambda},
                                {"folds", r.selection->folds},
                                {"chosen_alpha", r.selection->chosen_alpha},
                                {"scores", rows}};
    }
    return j;
}

inline std::string run_result_text(const RunResult& r) {
    std::ostringstream out;
    out << detail::report_header(r.config_snapshot);
    if (r.chosen_alpha) out << "# alpha = " << detail::fmt(*r.chosen_alpha, 2) << "\n";
    out << "\n";
    std::vector<std::vector<std::string>> rows{{"Metric", r.variant}};
    auto names = detail::metric_row_names();
    auto col = detail::metric_column(r.report);
    for (std::size_t i = 0; i < names.size(); ++i) rows.push_back({names[i], col[i]});
    out << detail::render_table(rows);
    out << "\nPer-group rates:\n";
    std::vector<std::vector<std::string>> grows{
        {"group", "support", "selection_rate", "TPR", "FPR"}};
    for (const auto& [g, s] : r.report.rates.per_group)
        grows.push_back({std::to_string(g), std::to_string(s.support),
                         detail::fmt(s.selection_rate), detail::fmt_opt(s.tpr),
                         detail::fmt_opt(s.fpr)});
    out << detail::render_table(grows);
    return out.str();
}

inline void write_run_report(const ExperimentConfig& cfg, const RunResult& r,
                             const std::string& stem) {
    std::filesystem::create_directories(cfg.out_dir);
    std::filesystem::path dir(cfg.out_dir);
    if (cfg.write_json)
        detail::write_file(dir / (stem + ".json"), run_result_json(r).dump(2) + "\n");
    if (cfg.write_text)
        detail::write_file(dir / (stem + ".txt"), run_result_text(r));
}

/// Transcribed comparison constants from the external fairness-certification
/// framework; fixtures, never recomputed.
struct ExternalFixture {
    std::string name = "fairness_certification_ref";
    double spd = -0.1945;
    double di = 0.3598;
    double eod = 0.1257;
    double emod = 0.0958;
    double bi = 0.2641;
    double fs = 0.7360;
};

inline std::string compare_report_text(const std::vector<RunResult>& results,
                                       bool include_fixture) {
    if (results.empty()) throw ConfigError("compare_report: no results");
    std::ostringstream out;
    out << detail::report_header(results.front().config_snapshot);
    out << "\n";
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{"Metric"};
    for (const auto& r : results) head.push_back(r.variant);
    ExternalFixture fix;
    if (include_fixture) head.push_back(fix.name);
    rows.push_back(head);

    auto names = detail::metric_row_names();
    std::vector<std::vector<std::string>> cols;
    for (const auto& r : results) cols.push_back(detail::metric_column(r.report));
    std::map<std::string, double> fixture_vals{{"SPD", fix.spd}, {"DI", fix.di},
                                               {"EOD", fix.eod}, {"EMOD", fix.emod},
                                               {"BI", fix.bi},   {"FS", fix.fs}};
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::vector<std::string> row{names[i]};
        for (const auto& c : cols) row.push_back(c[i]);
        if (include_fixture) {
            auto it = fixture_vals.find(names[i]);
            row.push_back(it != fixture_vals.end() ? detail::fmt(it->second) : "-");
        }
        rows.push_back(row);
    }
    out << detail::render_table(rows);
    return out.str();
}

inline nlohmann::json compare_report_json(const std::vector<RunResult>& results,
                                          bool include_fixture) {
    nlohmann::json j;
    j["columns"] = nlohmann::json::array();
    for (const auto& r : results) j["columns"].push_back(run_result_json(r));
    if (include_fixture) {
        ExternalFixture fix;
        j["external_fixture"] = {{"name", fix.name}, {"spd", fix.spd}, {"di", fix.di},
                                 {"eod", fix.eod},   {"emod", fix.emod},
                                 {"bi", fix.bi},     {"fs", fix.fs},
                                 {"transcribed", true}};
    }
    return j;
}

inline std::string sweep_text(const ExperimentConfig& cfg,
                              const std::vector<SweepRow>& rows,
                              const TradeoffSummary& tradeoff) {
    std::ostringstream out;
    auto j = cfg.to_json();
    out << detail::report_header(j);
    out << "\n";
    std::vector<std::vector<std::string>> table{{"alpha", "accuracy", "FS", "BI", "FxA"}};
    for (std::size_t i = 0; i < rows.size(); ++i)
        table.push_back({detail::fmt(rows[i].alpha, 2), detail::fmt(rows[i].accuracy),
                         detail::fmt_opt(rows[i].fairness_score),
                         detail::fmt_opt(rows[i].bias_index),
                         detail::fmt(tradeoff.rows[i].product)});
    out << detail::render_table(table);
    out << "\ntradeoff product: mean = " << detail::fmt(tradeoff.mean)
        << ", spread = " << detail::fmt(tradeoff.spread) << "\n";
    return out.str();
}

/// Tab-separated plot data: alpha, accuracy, fairness score.
inline std::string sweep_tsv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "alpha\taccuracy\tfairness_score\n";
    for (const auto& r : rows)
        out << detail::fmt(r.alpha, 2) << '\t' << detail::fmt(r.accuracy, 6) << '\t'
            << detail::fmt_opt(r.fairness_score, 6) << '\n';
    return out.str();
}

inline std::string ablation_text(const std::vector<RunResult>& results) {
    std::ostringstream out;
    out << detail::report_header(results.front().config_snapshot);
    out << "\n";
    std::vector<std::vector<std::string>> rows{
        {"Method", "Accuracy", "EOD", "EMOD", "SPD", "DI", "BI", "FS"}};
    for (const auto& r : results) {
        const auto& rep = r.report;
        rows.push_back({r.variant, detail::fmt(rep.classification.accuracy),
                        detail::fmt_opt(rep.eod), detail::fmt_opt(rep.emod),
                        detail::fmt(rep.spd), detail::fmt_opt(rep.di),
                        detail::fmt_opt(rep.bi), detail::fmt_opt(rep.fs)});
    }
    out << detail::render_table(rows);
    return out.str();
}

inline nlohmann::json ablation_json(const std::vector<RunResult>& results) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : results) j.push_back(run_result_json(r));
    return j;
}

}  // namespace bmnb
