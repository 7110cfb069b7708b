// mdfs command line tool: run the selection pipeline, list interesting
// tuples, run the Welch t-test reference filter, render result plots.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mdfs/dataset.hpp"
#include "mdfs/pipeline.hpp"
#include "mdfs/result_io.hpp"
#include "mdfs/stats.hpp"
#include "svg_plot.hpp"

namespace {

using namespace mdfs;

constexpr int kExitOk = 0;
constexpr int kExitBadFlags = 2;
constexpr int kExitDataError = 3;
constexpr int kExitInternal = 4;

struct InputFlags {
    std::string data_csv;
    std::string decision_column = "decision";
    std::string madelon_data;
    std::string madelon_labels;

    void attach(CLI::App* cmd) {
        auto* csv = cmd->add_option("--data", data_csv, "CSV input (header row required)");
        cmd->add_option("--decision-column", decision_column,
                        "decision column name, or 0-based index when numeric");
        auto* mdata = cmd->add_option("--madelon-data", madelon_data,
                                      "whitespace-separated numeric matrix file");
        auto* mlabels = cmd->add_option("--madelon-labels", madelon_labels,
                                        "label file with one value in {-1,1} per row");
        csv->excludes(mdata);
        mdata->needs(mlabels);
        mlabels->needs(mdata);
    }

    Dataset load() const {
        if (!data_csv.empty()) return load_matrix_csv(data_csv, decision_column);
        if (!madelon_data.empty()) return load_madelon(madelon_data, madelon_labels);
        throw CLI::ValidationError("input", "either --data or --madelon-data is required");
    }
};

struct ParamFlags {
    MdfsParams params;
    double range = -1.0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string adjust = "holm";

    void attach(CLI::App* cmd) {
        cmd->add_option("--dimensions", params.dimensions, "tuple dimensionality k")
            ->check(CLI::Range(1, 5).description("dimensions must be 1..5"));
        cmd->add_option("--divisions", params.divisions, "cuts per variable (levels - 1)")
            ->check(CLI::Range(1, 15));
        cmd->add_option("--discretizations", params.discretizations,
                        "number of random discretizations");
        cmd->add_option("--range", range,
                        "discretization randomness in [0,1]; default 0 for one "
                        "discretization, 0.2 otherwise")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--pseudocount", params.pseudocount_xi, "pseudocount parameter xi")
            ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0));
        cmd->add_option("--contrast", params.n_contrast, "number of contrast variables");
        cmd->add_option("--seed", seed, "PRNG seed (default: drawn from the OS)")
            ->each([this](const std::string&) { seed_given = true; });
        cmd->add_option("--adjust", adjust, "p-value adjustment: holm, BH or BY")
            ->check(CLI::IsMember({"holm", "BH", "BY"}));
        cmd->add_option("--level", params.level, "significance level")
            ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
        cmd->add_flag("--track-tuples", params.track_tuples,
                      "record the argmax tuple per variable");
        cmd->add_option("--workers", params.workers, "worker thread count (default: all cores)")
            ->check(CLI::PositiveNumber);
    }

    MdfsParams resolve() {
        if (range >= 0.0) params.range = range;
        if (seed_given) params.seed = seed;
        params.adjust_method = stats::adjust_method_from_string(adjust);
        return params;
    }
};

unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

void print_run_summary(const MdfsResult& result) {
    const auto ordered = relevant_variables_ordered(result, result.params.level);
    std::printf("relevant variables (%zu of %zu), ordered by p-value:\n", ordered.size(),
                result.statistic.size());
    for (auto v : ordered) {
        std::printf("  %-12s statistic %10.4f  p %.6g  adjusted %.6g\n",
                    result.variable_names[v].c_str(), result.statistic[v], result.p_value[v],
                    result.adjusted_p_value[v]);
    }
    std::printf("fit: mode=%s df=%g m_hat=%.6g n_fit=%zu\n",
                result.fit.mode == stats::FitMode::raw ? "raw" : "exp", result.fit.df,
                result.fit.m_hat, result.fit.n_fit);
    std::printf("statistic threshold at level %g: %.6g\n", result.params.level,
                stats::ig_limit(result.fit, result.params.level));
    std::printf("seed: %llu\n", static_cast<unsigned long long>(result.seed_used));
    std::printf("wall time: %.3f s\n", result.wall_time_seconds);
}

int cmd_run(InputFlags& input, ParamFlags& flags, const std::string& output,
            const std::string& format) {
    const Dataset ds = input.load();
    for (auto v : ds.constant_columns()) {
        std::fprintf(stderr, "warning: variable %s is constant\n",
                     ds.variable_names[v].c_str());
    }
    const MdfsParams params = flags.resolve();
    const MdfsResult result = run_mdfs(ds, params);
    if (!output.empty()) {
        write_file_atomic(output, format == "csv" ? result_to_csv(result)
                                                  : result_to_json(result));
    }
    print_run_summary(result);
    if (!output.empty()) std::printf("result written to %s\n", output.c_str());
    return kExitOk;
}

int cmd_tuples(InputFlags& input, ParamFlags& flags, const std::string& output,
               std::optional<double> ig_threshold, std::optional<double> alpha) {
    MdfsParams params = flags.resolve();
    if (params.dimensions < 2) {
        throw CLI::ValidationError("--dimensions", "tuples require dimensions >= 2");
    }
    if (!ig_threshold && !alpha) {
        throw CLI::ValidationError("--ig-threshold", "give --ig-threshold or --alpha");
    }
    const Dataset ds = input.load();

    double threshold;
    if (ig_threshold) {
        threshold = *ig_threshold;
        if (!params.seed) params.seed = 0;
    } else {
        // fit the null through the full pipeline, then convert alpha
        const MdfsResult fit_run = run_mdfs(ds, params);
        params.seed = fit_run.seed_used;
        threshold = stats::ig_limit(fit_run.fit, *alpha);
        std::printf("statistic threshold at alpha %g: %.6g\n", *alpha, threshold);
    }

    DiscretizationParams disc;
    disc.divisions = params.divisions;
    disc.discretizations = params.discretizations;
    disc.range = params.range;
    disc.seed = params.seed.value_or(0);

    EngineParams engine;
    engine.dimensions = params.dimensions;
    engine.pseudocount_xi = params.pseudocount_xi;
    engine.workers = params.workers;

    const DiscretizedView view = discretize_all(ds, disc, params.workers);
    engine.disc = view.params;
    const auto records = compute_interesting_tuples(view, ds.decision, engine, threshold);

    std::string csv = "variable,name";
    for (std::uint32_t j = 0; j < params.dimensions; ++j) {
        csv += ",member_" + std::to_string(j + 1);
    }
    csv += ",ig\n";
    char buf[64];
    for (const auto& rec : records) {
        csv += std::to_string(rec.variable) + "," + ds.variable_names[rec.variable];
        for (auto member : rec.tuple) csv += "," + std::to_string(member);
        std::snprintf(buf, sizeof buf, ",%.17g\n", rec.ig);
        csv += buf;
    }
    if (!output.empty()) {
        write_file_atomic(output, csv);
        std::printf("%zu tuple records written to %s\n", records.size(), output.c_str());
    } else {
        std::fputs(csv.c_str(), stdout);
    }
    return kExitOk;
}

int cmd_ttest(InputFlags& input, ParamFlags& flags, const std::string& output) {
    const MdfsParams params = flags.resolve();
    const Dataset ds = input.load();

    std::vector<double> group0, group1;
    std::vector<double> p(ds.n_variables, 1.0);
    std::vector<double> t_stat(ds.n_variables, 0.0);
    std::vector<bool> failed(ds.n_variables, false);
    for (std::size_t v = 0; v < ds.n_variables; ++v) {
        group0.clear();
        group1.clear();
        const auto col = ds.column(v);
        for (std::size_t o = 0; o < ds.n_objects; ++o) {
            (ds.decision[o] ? group1 : group0).push_back(col[o]);
        }
        try {
            const auto r = stats::welch_t_test(group0, group1);
            t_stat[v] = r.t;
            p[v] = r.p_value;
        } catch (const std::invalid_argument&) {
            failed[v] = true;  // degenerate groups; reported with an error flag
        }
    }

    // adjust over the variables that produced a p-value
    std::vector<double> valid_p;
    for (std::size_t v = 0; v < ds.n_variables; ++v) {
        if (!failed[v]) valid_p.push_back(p[v]);
    }
    const auto adjusted_valid = stats::adjust_p_values(valid_p, params.adjust_method);
    std::vector<double> adjusted(ds.n_variables, 1.0);
    for (std::size_t v = 0, i = 0; v < ds.n_variables; ++v) {
        if (!failed[v]) adjusted[v] = adjusted_valid[i++];
    }

    std::string csv = "index,name,t,p_value,adjusted_p_value,error\n";
    char buf[128];
    for (std::size_t v = 0; v < ds.n_variables; ++v) {
        if (failed[v]) {
            std::snprintf(buf, sizeof buf, "%zu,%s,,,,degenerate\n", v,
                          ds.variable_names[v].c_str());
        } else {
            std::snprintf(buf, sizeof buf, "%zu,%s,%.17g,%.17g,%.17g,\n", v,
                          ds.variable_names[v].c_str(), t_stat[v], p[v], adjusted[v]);
        }
        csv += buf;
    }
    if (!output.empty()) write_file_atomic(output, csv);

    std::vector<std::uint32_t> significant;
    for (std::size_t v = 0; v < ds.n_variables; ++v) {
        if (!failed[v] && adjusted[v] < params.level) {
            significant.push_back(static_cast<std::uint32_t>(v));
        }
    }
    std::stable_sort(significant.begin(), significant.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return p[a] < p[b]; });
    std::printf("significant variables (%zu of %zu) at level %g, ordered by p-value:\n",
                significant.size(), ds.n_variables, params.level);
    for (auto v : significant) {
        std::printf("  %-12s t %9.4f  p %.6g  adjusted %.6g\n", ds.variable_names[v].c_str(),
                    t_stat[v], p[v], adjusted[v]);
    }
    if (!output.empty()) std::printf("t-test table written to %s\n", output.c_str());
    return kExitOk;
}

int cmd_plot(const std::string& input_path, const std::string& output_path) {
    std::ifstream in(input_path, std::ios::binary);
    if (!in) throw DataError("cannot open result file: " + input_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const MdfsResult result = result_from_json(text);
    write_file_atomic(output_path, mdfs::tools::render_result_svg(result));
    std::printf("plot written to %s\n", output_path.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mdfs - multidimensional feature selection by conditional "
                 "information gain"};
    app.require_subcommand(1);

    InputFlags run_input, tuples_input, ttest_input;
    ParamFlags run_params, tuples_params, ttest_params;
    run_params.params.workers = default_workers();
    tuples_params.params.workers = default_workers();
    std::string run_output, tuples_output, ttest_output;
    std::string run_format = "json";
    std::optional<double> ig_threshold, alpha;
    std::string plot_input, plot_output;

    auto* run = app.add_subcommand("run", "run the end-to-end selection pipeline");
    run_input.attach(run);
    run_params.attach(run);
    run->add_option("-o,--output", run_output, "result file path");
    run->add_option("--format", run_format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* tuples = app.add_subcommand("tuples", "list tuples reaching an IG threshold");
    tuples_input.attach(tuples);
    tuples_params.attach(tuples);
    tuples->add_option("-o,--output", tuples_output, "CSV output path");
    auto* thr_opt = tuples->add_option_function<double>(
        "--ig-threshold", [&](double v) { ig_threshold = v; }, "explicit IG threshold");
    auto* alpha_opt = tuples->add_option_function<double>(
        "--alpha", [&](double v) { alpha = v; },
        "significance level converted to an IG threshold via the fitted null");
    thr_opt->excludes(alpha_opt);

    auto* ttest = app.add_subcommand("ttest", "per-variable Welch t-test reference filter");
    ttest_input.attach(ttest);
    ttest->add_option("--adjust", ttest_params.adjust, "p-value adjustment: holm, BH or BY")
        ->check(CLI::IsMember({"holm", "BH", "BY"}));
    ttest->add_option("--level", ttest_params.params.level, "significance level");
    ttest->add_option("-o,--output", ttest_output, "CSV output path");

    auto* plot = app.add_subcommand("plot", "render a result file as an SVG ranking plot");
    plot->add_option("-i,--input", plot_input, "result JSON path")->required();
    plot->add_option("-o,--output", plot_output, "SVG output path")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_input, run_params, run_output, run_format);
        if (tuples->parsed()) {
            return cmd_tuples(tuples_input, tuples_params, tuples_output, ig_threshold, alpha);
        }
        if (ttest->parsed()) return cmd_ttest(ttest_input, ttest_params, ttest_output);
        if (plot->parsed()) return cmd_plot(plot_input, plot_output);
        return kExitBadFlags;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitBadFlags;
    } catch (const DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDataError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadFlags;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
}
