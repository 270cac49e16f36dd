#include "sfr/cli.hpp"

#include "sfr/annealing.hpp"
#include "sfr/data_io.hpp"
#include "sfr/error.hpp"
#include "sfr/fitting.hpp"
#include "sfr/scoring.hpp"
#include "sfr/simulation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <variant>

namespace sfr {
namespace {

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, long long, std::string>;

enum class Format { Csv, Table, Json };

/// Column-oriented result used for the JSON rendering (and the generic
/// aligned table).
struct Tabular {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct DataOptions {
    std::string path;
    std::string outcome;
    std::vector<std::string> features;
    bool intercept = true;
    std::string na_policy = "reject";
    char delimiter = ',';
};

struct CommonOptions {
    std::uint64_t seed = 42;
    std::string output;
    Format format = Format::Csv;
    std::size_t threads = 0;
};

Json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? Json(*d) : Json(nullptr);
    if (const auto* i = std::get_if<long long>(&c)) return Json(*i);
    return Json(std::get<std::string>(c));
}

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", *d);
        return buf;
    }
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

void write_json(std::ostream& out, const Tabular& t, const Json& meta) {
    Json data = Json::array();
    for (const auto& row : t.rows) {
        Json obj = Json::object();
        for (std::size_t j = 0; j < t.columns.size(); ++j) obj[t.columns[j]] = cell_json(row[j]);
        data.push_back(std::move(obj));
    }
    Json doc = Json::object();
    doc["meta"] = meta;
    doc["data"] = std::move(data);
    out << doc.dump(2) << '\n';
}

void write_aligned(std::ostream& out, const Tabular& t) {
    std::vector<std::size_t> width(t.columns.size());
    std::vector<std::vector<std::string>> text;
    for (std::size_t j = 0; j < t.columns.size(); ++j) width[j] = t.columns[j].size();
    for (const auto& row : t.rows) {
        auto& line = text.emplace_back();
        for (std::size_t j = 0; j < row.size(); ++j) {
            line.push_back(cell_text(row[j]));
            width[j] = std::max(width[j], line.back().size());
        }
    }
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j == 0) {
                out << cells[j] << std::string(width[j] - cells[j].size(), ' ');
            } else {
                out << "  " << std::string(width[j] - cells[j].size(), ' ') << cells[j];
            }
        }
        out << '\n';
    };
    emit(t.columns);
    for (const auto& line : text) emit(line);
}

LoadedDataset load(const DataOptions& opts) {
    CsvSchema schema;
    schema.outcome_column = opts.outcome;
    schema.feature_columns = opts.features;
    schema.delimiter = opts.delimiter;
    schema.na_policy = opts.na_policy == "drop" ? NaPolicy::DropRows : NaPolicy::Reject;
    return load_csv(opts.path, schema, opts.intercept);
}

void report_load(std::ostream& err, const LoadedDataset& loaded) {
    err << "read " << loaded.rows_read << " rows";
    if (!loaded.dropped_lines.empty()) err << ", dropped " << loaded.dropped_lines.size() << " with missing values";
    err << '\n';
}

void add_data_options(CLI::App* app, DataOptions& opts) {
    app->add_option("--data", opts.path, "Input CSV file")->required()->check(CLI::ExistingFile);
    app->add_option("--outcome", opts.outcome, "Outcome column")->required();
    app->add_option("--features", opts.features, "Feature columns (comma separated)")->required()->delimiter(',');
    app->add_flag("--intercept,!--no-intercept", opts.intercept, "Include an intercept (default on)");
    app->add_option("--na-policy", opts.na_policy, "Missing-value policy")
        ->check(CLI::IsMember({"reject", "drop"}));
    app->add_option("--delimiter", opts.delimiter, "Field delimiter");
}

void add_common_options(CLI::App* app, CommonOptions& opts) {
    app->add_option("--seed", opts.seed, "Random seed (default 42)");
    app->add_option("--output", opts.output, "Write data here instead of standard output");
    const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"table", Format::Table}, {"json", Format::Json}};
    app->add_option("--format", opts.format, "Output format: csv, table or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description("{csv,table,json}"));
    app->add_option("--threads", opts.threads, "Worker threads (0 = all cores)");
}

struct Emitter {
    const CommonOptions& common;
    std::ostream& fallback;
    Json meta;

    template <typename CsvFn, typename TextFn>
    void emit(const Tabular& table, CsvFn&& csv, TextFn&& text) const {
        std::ofstream file;
        std::ostream* out = &fallback;
        if (!common.output.empty()) {
            file.open(common.output, std::ios::binary);
            if (!file) throw Error(ErrorCode::IoError, "cannot write '" + common.output + "'");
            out = &file;
        }
        switch (common.format) {
            case Format::Csv: csv(*out); break;
            case Format::Table: text(*out); break;
            case Format::Json: write_json(*out, table, meta); break;
        }
    }
};

ScoringConfig scoring_config(std::size_t iterations, std::uint64_t seed, std::size_t threads) {
    ScoringConfig cfg;
    cfg.iterations = iterations;
    cfg.seed = seed;
    cfg.threads = threads;
    return cfg;
}

std::vector<EstimatorKind> parse_estimators(const std::vector<std::string>& names) {
    std::vector<EstimatorKind> kinds;
    for (const auto& n : names) kinds.push_back(parse_estimator(n));
    if (kinds.empty()) throw Error(ErrorCode::InvalidArgument, "no estimators requested");
    return kinds;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sample fit reliability: scoring, annealing and reliability-weighted fitting"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    DataOptions data;
    CommonOptions common;

    // score
    auto* score = app.add_subcommand("score", "Per-observation reliability scores");
    std::size_t iterations = 1000;
    std::size_t subsample = 0;
    bool exhaustive = false;
    std::string loss = "absolute";
    std::string averaging = "observation";
    add_data_options(score, data);
    add_common_options(score, common);
    score->add_option("--iterations", iterations, "Sub-sampling iterations S");
    score->add_option("--subsample-size", subsample, "Rows per sub-sample (default k + 1)");
    score->add_option("--loss", loss, "Out-of-bag loss")->check(CLI::IsMember({"absolute", "squared"}));
    score->add_option("--averaging", averaging, "Divide losses by each row's out-of-bag count or by S")
        ->check(CLI::IsMember({"observation", "iterations"}));
    score->add_flag("--exhaustive", exhaustive, "Enumerate every sub-sample instead of sampling");

    // anneal
    auto* anneal_cmd = app.add_subcommand("anneal", "Coefficient path while removing unreliable rows");
    double share = 0.10;
    std::size_t steps = 0;
    std::size_t bootstrap = 1000;
    std::size_t bootstrap_iterations = 0;
    std::optional<std::size_t> target;
    bool balance = false;
    add_data_options(anneal_cmd, data);
    add_common_options(anneal_cmd, common);
    anneal_cmd->add_option("--iterations", iterations, "Sub-sampling iterations S");
    anneal_cmd->add_option("--share", share, "Share of the sample to anneal")->check(CLI::Range(0.0, 1.0));
    anneal_cmd->add_option("--steps", steps, "Evaluation points (0 = every drop count, up to 201)");
    anneal_cmd->add_option("--bootstrap", bootstrap, "Bootstrap replications B (0 = no bands)");
    anneal_cmd->add_option("--bootstrap-iterations", bootstrap_iterations,
                           "Scoring iterations inside replicates (0 = same as --iterations)");
    anneal_cmd->add_option("--target", target, "Tracked coefficient index (default: first feature)");
    anneal_cmd->add_flag("--balance", balance, "Print a covariate balance table to the error stream");

    // fit
    auto* fit = app.add_subcommand("fit", "Reliability-weighted fit with bootstrap inference");
    std::vector<std::string> estimators{"ols", "sfr"};
    std::string weights = "squared";
    std::string ci = "normal";
    double huber_c = 1.345;
    std::size_t ransac_trials = 100;
    std::optional<double> ransac_threshold;
    add_data_options(fit, data);
    add_common_options(fit, common);
    fit->add_option("--iterations", iterations, "Sub-sampling iterations S");
    fit->add_option("--bootstrap", bootstrap, "Bootstrap replications B");
    fit->add_option("--estimators", estimators, "Any of ols, huber, ransac, sfr")->delimiter(',');
    fit->add_option("--weights", weights, "Score transform")->check(CLI::IsMember({"squared", "identity"}));
    fit->add_option("--ci", ci, "Interval type")->check(CLI::IsMember({"normal", "percentile"}));
    fit->add_option("--huber-c", huber_c, "Huber tuning constant");
    fit->add_option("--ransac-trials", ransac_trials, "RANSAC trials");
    fit->add_option("--ransac-threshold", ransac_threshold, "RANSAC inlier threshold (default: MAD of OLS residuals)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison of estimators");
    ScenarioConfig scenario;
    std::vector<std::string> sim_estimators{"ols", "huber", "ransac", "sfr"};
    std::string convention = "variance";
    std::string dump;
    bool sim_intercept = false;
    add_common_options(simulate, common);
    simulate->add_option("--scenario", scenario.scenario, "Scenario 1-4")->required()->check(CLI::Range(1, 4));
    simulate->add_option("--n", scenario.n, "Sample size");
    simulate->add_option("--alpha", scenario.outlier_share, "Outlier share");
    simulate->add_option("--reps", scenario.replications, "Replications R");
    simulate->add_option("--estimators", sim_estimators, "Any of ols, huber, ransac, sfr")->delimiter(',');
    simulate->add_option("--iterations", iterations, "Sub-sampling iterations S for SFR");
    simulate->add_option("--variance-convention", convention, "Read N(m, v) as variance or sd")
        ->check(CLI::IsMember({"variance", "sd"}));
    simulate->add_flag("--intercept", sim_intercept, "Fit an intercept (default off)");
    simulate->add_option("--dump-draws", dump, "Write every slope estimate to this CSV file");

    // describe
    auto* describe_cmd = app.add_subcommand("describe", "Descriptive statistics of the selected columns");
    add_data_options(describe_cmd, data);
    add_common_options(describe_cmd, common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    Json meta = Json::object();
    meta["args"] = args;
    meta["seed"] = common.seed;
    meta["version"] = kVersion;

    try {
        if (score->parsed()) {
            meta["command"] = "score";
            const auto loaded = load(data);
            report_load(err, loaded);
            auto cfg = scoring_config(iterations, common.seed, common.threads);
            cfg.subsample_size = subsample;
            cfg.loss = loss == "squared" ? Loss::Squared : Loss::Absolute;
            cfg.averaging = averaging == "iterations" ? OobAveraging::Iterations : OobAveraging::PerObservation;
            const auto result =
                exhaustive ? score_sample_exhaustive(loaded.dataset, cfg) : score_sample(loaded.dataset, cfg);
            Tabular t{{"row_index", "expected_loss", "score", "oob_count"}, {}};
            for (Eigen::Index i = 0; i < result.scores.size(); ++i) {
                t.rows.push_back({static_cast<long long>(i), result.expected_losses(i), result.scores(i),
                                  static_cast<long long>(result.oob_counts[static_cast<std::size_t>(i)])});
            }
            Emitter{common, out, meta}.emit(
                t, [&](std::ostream& o) { write_scores_csv(o, result); },
                [&](std::ostream& o) { write_aligned(o, t); });
        } else if (anneal_cmd->parsed()) {
            meta["command"] = "anneal";
            const auto loaded = load(data);
            report_load(err, loaded);
            const auto cfg = scoring_config(iterations, common.seed, common.threads);
            AnnealingConfig acfg;
            acfg.share = share;
            acfg.n_steps = steps;
            acfg.bootstrap_b = bootstrap;
            acfg.bootstrap_scoring_iterations = bootstrap_iterations;
            acfg.seed = common.seed;
            acfg.target_coefficient = target;
            acfg.threads = common.threads;
            const auto path = bootstrap == 0 ? anneal(loaded.dataset, score_sample(loaded.dataset, cfg).scores, acfg)
                                             : anneal_with_bootstrap(loaded.dataset, cfg, acfg);
            if (balance) {
                err << "covariate balance (dropped vs kept):\n";
                for (const auto& b : covariate_balance(loaded.dataset, path)) {
                    err << "  " << b.feature << ": dropped mean " << b.mean_dropped << ", kept mean " << b.mean_kept
                        << ", standardized difference " << b.standardized_difference << '\n';
                }
            }
            Tabular t{{"n_dropped", "share", "estimate", "ci_lower", "ci_upper", "std_error"}, {}};
            for (const auto& s : path.steps) {
                t.rows.push_back({static_cast<long long>(s.n_dropped), s.share_dropped, s.estimate, s.ci_lower,
                                  s.ci_upper, s.std_error});
            }
            Emitter{common, out, meta}.emit(
                t, [&](std::ostream& o) { write_path_csv(o, path); },
                [&](std::ostream& o) { write_aligned(o, t); });
        } else if (fit->parsed()) {
            meta["command"] = "fit";
            const auto loaded = load(data);
            report_load(err, loaded);
            FitConfig cfg;
            cfg.scoring = scoring_config(iterations, common.seed, 1);
            cfg.scheme = weights == "identity" ? WeightScheme::Identity : WeightScheme::Squared;
            cfg.huber.tuning_constant = huber_c;
            cfg.ransac.max_trials = ransac_trials;
            cfg.ransac.residual_threshold = ransac_threshold;
            cfg.bootstrap_b = bootstrap;
            cfg.seed = common.seed;
            cfg.threads = common.threads;
            cfg.ci = ci == "percentile" ? CiMethod::Percentile : CiMethod::Normal;
            const auto table = fit_table_compare(loaded.dataset, parse_estimators(estimators), cfg);
            Tabular t{{"estimator", "coefficient", "coef", "std_err", "t", "p_value", "ci_lower", "ci_upper",
                       "b_effective", "note"},
                      {}};
            for (const auto& r : table.rows) {
                t.rows.push_back({r.estimator, r.coefficient, r.coef, r.std_err, r.t, r.p, r.ci_lower, r.ci_upper,
                                  static_cast<long long>(r.b_effective), r.note});
            }
            Emitter{common, out, meta}.emit(
                t, [&](std::ostream& o) { write_fit_csv(o, table); },
                [&](std::ostream& o) { write_fit_text(o, table); });
        } else if (simulate->parsed()) {
            meta["command"] = "simulate";
            scenario.seed = common.seed;
            scenario.threads = common.threads;
            scenario.add_intercept = sim_intercept;
            scenario.variance_convention =
                convention == "sd" ? VarianceConvention::StdDev : VarianceConvention::Variance;
            FitConfig cfg;
            cfg.scoring = scoring_config(iterations, common.seed, 1);
            std::vector<NamedEstimator> named;
            for (const auto kind : parse_estimators(sim_estimators)) named.push_back(standard_estimator(kind, cfg));
            const auto table = run_benchmark(scenario, named);
            for (const auto& m : table.rows) {
                if (m.failures > 0) err << m.name << ": " << m.failures << " failed replications\n";
            }
            if (!dump.empty()) {
                std::ofstream draws(dump, std::ios::binary);
                if (!draws) throw Error(ErrorCode::IoError, "cannot write '" + dump + "'");
                write_draws_csv(draws, table);
            }
            const double share_out = scenario.scenario == 1 ? 0.0 : scenario.outlier_share;
            Tabular t{{"scenario", "n", "outlier_share", "estimator", "replications_ok", "failures", "mse",
                       "mean_abs_bias", "std_dev", "jarque_bera_stat", "jarque_bera_p"},
                      {}};
            for (const auto& m : table.rows) {
                t.rows.push_back({static_cast<long long>(scenario.scenario), static_cast<long long>(scenario.n),
                                  share_out, m.name, static_cast<long long>(m.estimates.size()),
                                  static_cast<long long>(m.failures), m.mse, m.mean_abs_bias, m.std_dev,
                                  m.jarque_bera_statistic, m.jarque_bera_p});
            }
            Emitter{common, out, meta}.emit(
                t, [&](std::ostream& o) { write_metrics_csv(o, table); },
                [&](std::ostream& o) { write_metrics_text(o, table); });
        } else if (describe_cmd->parsed()) {
            meta["command"] = "describe";
            const auto loaded = load(data);
            report_load(err, loaded);
            Tabular t{{"column", "count", "mean", "std", "min", "25%", "50%", "75%", "max"}, {}};
            for (const auto& s : describe(loaded.dataset)) {
                t.rows.push_back({s.name, static_cast<long long>(s.count), s.mean, s.std, s.min, s.q25, s.q50,
                                  s.q75, s.max});
            }
            Emitter{common, out, meta}.emit(
                t,
                [&](std::ostream& o) {
                    o << "column,count,mean,std,min,25%,50%,75%,max\n";
                    for (const auto& row : t.rows) {
                        o << std::get<std::string>(row[0]) << ',' << std::get<long long>(row[1]);
                        for (std::size_t j = 2; j < row.size(); ++j) {
                            o << ',' << format_number(std::get<double>(row[j]));
                        }
                        o << '\n';
                    }
                },
                [&](std::ostream& o) { write_aligned(o, t); });
        }
    } catch (const Error& e) {
        err << "error [" << error_code_name(e.code()) << "]: " << e.what() << '\n';
        return is_validation_error(e.code()) ? kExitValidation : kExitComputation;
    } catch (const std::exception& e) {
        err << "error [internal]: " << e.what() << '\n';
        return kExitComputation;
    }
    return kExitOk;
}

}  // namespace sfr
