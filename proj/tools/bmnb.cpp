// Command-line front end: run / sweep / ablate / compare / select-alpha.
// Exit codes: 0 success, 1 config error, 2 data error, 3 pipeline error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bmnb/bmnb.hpp"

namespace {

struct CliState {
    bmnb::ExperimentConfig cfg;
    std::string config_file;
    std::string grid_str;
    std::string threshold_mode;
    std::string calibration_split;
    std::string priors;
    std::string bi_agg;
    double alpha = -1.0;        // sentinel: unset
    double target_rate = -1.0;  // sentinel: unset
};

void add_common_options(CLI::App* cmd, CliState& st) {
    cmd->add_option("--config", st.config_file, "key = value config file");
    cmd->add_option("--data", st.cfg.data_path, "dataset file path");
    cmd->add_option("--schema", st.cfg.schema, "builtin schema: adult|compas|framingham");
    cmd->add_option("--schema-file", st.cfg.schema_file, "custom schema file");
    cmd->add_option("--test-fraction", st.cfg.test_fraction, "test split fraction");
    cmd->add_option("--seed", st.cfg.seed, "run seed (default 42)");
    cmd->add_option("--scale-lo", st.cfg.scale_lo, "scaling range low");
    cmd->add_option("--scale-hi", st.cfg.scale_hi, "scaling range high");
    cmd->add_flag("--resample,!--no-resample", st.cfg.resample, "SMOTEENN on training data");
    cmd->add_option("--k-smote", st.cfg.k_smote, "SMOTE neighbor count");
    cmd->add_option("--k-enn", st.cfg.k_enn, "ENN neighbor count");
    cmd->add_option("--epsilon", st.cfg.epsilon, "variance smoothing");
    cmd->add_option("--min-support", st.cfg.min_support, "per-class group model floor");
    cmd->add_option("--priors", st.priors, "fixed|empirical group priors");
    cmd->add_option("--alpha", st.alpha, "fixed blending coefficient");
    cmd->add_option("--grid", st.grid_str, "alpha grid, comma separated");
    cmd->add_option("--lambda", st.cfg.lambda, "accuracy weight in J");
    cmd->add_option("--folds", st.cfg.folds, "CV folds for alpha selection");
    cmd->add_option("--threshold-mode", st.threshold_mode, "dp|eo|fixed");
    cmd->add_option("--fixed-tau", st.cfg.fixed_tau, "threshold for fixed mode");
    cmd->add_option("--calibration-split", st.calibration_split, "train|eval");
    cmd->add_option("--target-rate", st.target_rate, "calibration target rate");
    cmd->add_option("--bi-agg", st.bi_agg, "mean_abs|rms bias index aggregation");
    cmd->add_option("--out", st.cfg.out_dir, "report directory");
}

// file config first, then CLI flags on top
void finalize(CLI::App* cmd, CliState& st) {
    bmnb::ExperimentConfig base;
    if (!st.config_file.empty()) bmnb::load_config_file(base, st.config_file);

    auto keep = [&](const std::string& flag) { return cmd->count(flag) > 0; };
    bmnb::ExperimentConfig& c = st.cfg;
    if (!keep("--data") && !base.data_path.empty()) c.data_path = base.data_path;
    if (!keep("--schema")) c.schema = base.schema;
    if (!keep("--schema-file")) c.schema_file = base.schema_file;
    if (!keep("--test-fraction")) c.test_fraction = base.test_fraction;
    if (!keep("--seed")) c.seed = base.seed;
    if (!keep("--scale-lo")) c.scale_lo = base.scale_lo;
    if (!keep("--scale-hi")) c.scale_hi = base.scale_hi;
    if (!keep("--resample") && !keep("--no-resample")) c.resample = base.resample;
    if (!keep("--k-smote")) c.k_smote = base.k_smote;
    if (!keep("--k-enn")) c.k_enn = base.k_enn;
    if (!keep("--epsilon")) c.epsilon = base.epsilon;
    if (!keep("--min-support")) c.min_support = base.min_support;
    if (!keep("--priors")) c.empirical_group_priors = base.empirical_group_priors;
    if (!keep("--alpha")) c.alpha = base.alpha;
    if (!keep("--grid")) c.alpha_grid = base.alpha_grid;
    if (!keep("--lambda")) c.lambda = base.lambda;
    if (!keep("--folds")) c.folds = base.folds;
    if (!keep("--threshold-mode")) c.threshold_mode = base.threshold_mode;
    if (!keep("--fixed-tau")) c.fixed_tau = base.fixed_tau;
    if (!keep("--calibration-split")) c.calibration_split = base.calibration_split;
    if (!keep("--target-rate")) c.target_rate = base.target_rate;
    if (!keep("--bi-agg")) c.bi_agg = base.bi_agg;
    if (!keep("--out")) c.out_dir = base.out_dir;

    if (keep("--priors")) bmnb::apply_config_setting(c, "priors", st.priors);
    if (keep("--alpha")) c.alpha = st.alpha;
    if (keep("--grid")) c.alpha_grid = bmnb::detail::parse_grid(st.grid_str);
    if (keep("--threshold-mode"))
        bmnb::apply_config_setting(c, "threshold_mode", st.threshold_mode);
    if (keep("--calibration-split"))
        bmnb::apply_config_setting(c, "calibration_split", st.calibration_split);
    if (keep("--target-rate")) c.target_rate = st.target_rate;
    if (keep("--bi-agg")) bmnb::apply_config_setting(c, "bi_aggregation", st.bi_agg);

    if (c.data_path.empty())
        throw bmnb::ConfigError("no dataset file given (--data or config file)");
}

void print_summary(const bmnb::RunResult& r) {
    std::cout << "variant " << r.variant;
    if (r.chosen_alpha) std::cout << "  alpha " << *r.chosen_alpha;
    const auto& rep = r.report;
    std::cout << "  acc " << bmnb::detail::fmt(rep.classification.accuracy)
              << "  SPD " << bmnb::detail::fmt(rep.spd) << "  DI "
              << bmnb::detail::fmt_opt(rep.di) << "  BI " << bmnb::detail::fmt_opt(rep.bi)
              << "  FS " << bmnb::detail::fmt_opt(rep.fs) << "  ("
              << bmnb::detail::fmt(r.duration_seconds, 2) << " s)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bmnb: fairness-aware blended Naive Bayes experiments"};
    app.require_subcommand(1);

    CliState st;
    auto* run = app.add_subcommand("run", "single-variant experiment");
    std::string variant_str = "full_bmnb";
    run->add_option("--variant", variant_str,
                    "baseline|blended_only|threshold_only|full_bmnb");
    add_common_options(run, st);

    auto* sweep = app.add_subcommand("sweep", "alpha sweep with trade-off diagnostic");
    add_common_options(sweep, st);

    auto* ablate = app.add_subcommand("ablate", "blended/threshold/full ablation");
    add_common_options(ablate, st);

    auto* compare = app.add_subcommand("compare", "baseline vs full BMNB comparison");
    bool no_fixture = false;
    compare->add_flag("--no-fixture", no_fixture,
                      "omit the transcribed external comparison column");
    add_common_options(compare, st);

    auto* select = app.add_subcommand("select-alpha", "cross-validated alpha selection");
    add_common_options(select, st);

    CLI11_PARSE(app, argc, argv);
    CLI::App* active = app.get_subcommands().front();

    try {
        finalize(active, st);
        bmnb::ExperimentConfig& cfg = st.cfg;
        std::cout << "# seed = " << cfg.seed << "\n";
        namespace fs = std::filesystem;

        if (active == run) {
            cfg.variant = bmnb::variant_from_string(variant_str);
            auto res = bmnb::run_experiment(cfg);
            bmnb::write_run_report(cfg, res, "run_" + res.variant);
            print_summary(res);
        } else if (active == sweep) {
            if (cfg.variant == bmnb::Variant::Baseline ||
                cfg.variant == bmnb::Variant::ThresholdOnly)
                cfg.variant = bmnb::Variant::FullBmnb;
            auto rows = bmnb::alpha_sweep(cfg, cfg.alpha_grid);
            auto tradeoff = bmnb::tradeoff_constant(rows);
            fs::create_directories(cfg.out_dir);
            std::string text = bmnb::sweep_text(cfg, rows, tradeoff);
            if (cfg.write_text)
                bmnb::detail::write_file(fs::path(cfg.out_dir) / "alpha_sweep.txt", text);
            bmnb::detail::write_file(fs::path(cfg.out_dir) / "alpha_sweep.tsv",
                                     bmnb::sweep_tsv(rows));
            std::cout << text;
        } else if (active == ablate) {
            auto results = bmnb::ablation(cfg);
            fs::create_directories(cfg.out_dir);
            if (cfg.write_json)
                bmnb::detail::write_file(fs::path(cfg.out_dir) / "ablation.json",
                                         bmnb::ablation_json(results).dump(2) + "\n");
            std::string text = bmnb::ablation_text(results);
            if (cfg.write_text)
                bmnb::detail::write_file(fs::path(cfg.out_dir) / "ablation.txt", text);
            std::cout << text;
        } else if (active == compare) {
            auto [train, test] = bmnb::load_and_split(cfg);
            std::vector<bmnb::RunResult> results{
                bmnb::run_on_partition(cfg, bmnb::Variant::Baseline, train, test),
                bmnb::run_on_partition(cfg, bmnb::Variant::FullBmnb, train, test)};
            fs::create_directories(cfg.out_dir);
            if (cfg.write_json)
                bmnb::detail::write_file(
                    fs::path(cfg.out_dir) / "compare.json",
                    bmnb::compare_report_json(results, !no_fixture).dump(2) + "\n");
            std::string text = bmnb::compare_report_text(results, !no_fixture);
            if (cfg.write_text)
                bmnb::detail::write_file(fs::path(cfg.out_dir) / "compare.txt", text);
            std::cout << text;
        } else if (active == select) {
            auto [train, test] = bmnb::load_and_split(cfg);
            auto opts = cfg.options_for(bmnb::Variant::FullBmnb);
            auto sel = bmnb::select_alpha(train, cfg.alpha_grid, cfg.lambda, cfg.folds,
                                          cfg.seed, opts);
            std::vector<std::vector<std::string>> rows{
                {"alpha", "cv_accuracy", "cv_fairness", "J"}};
            for (const auto& r : sel.per_alpha_scores)
                rows.push_back({bmnb::detail::fmt(r.alpha, 2),
                                bmnb::detail::fmt(r.cv_accuracy),
                                bmnb::detail::fmt(r.cv_fairness),
                                bmnb::detail::fmt(r.objective)});
            std::cout << bmnb::detail::render_table(rows);
            std::cout << "chosen alpha = " << bmnb::detail::fmt(sel.chosen_alpha, 2)
                      << "\n";
        }
        return 0;
    } catch (const bmnb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const bmnb::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return 3;
    }
}
