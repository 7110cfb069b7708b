#include "mdfs/result_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mdfs {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

json params_to_json(const MdfsParams& p) {
    json j;
    j["dimensions"] = p.dimensions;
    j["divisions"] = p.divisions;
    j["discretizations"] = p.discretizations;
    j["range"] = p.range.value_or(-1.0);
    j["pseudocount_xi"] = p.pseudocount_xi;
    j["n_contrast"] = p.n_contrast;
    j["seed"] = p.seed.value_or(0);
    j["adjust_method"] = stats::to_string(p.adjust_method);
    j["level"] = p.level;
    j["track_tuples"] = p.track_tuples;
    // the worker count shapes execution, not the result; identical runs must
    // serialize identically for any worker count
    return j;
}

MdfsParams params_from_json(const json& j) {
    MdfsParams p;
    p.dimensions = j.at("dimensions").get<std::uint32_t>();
    p.divisions = j.at("divisions").get<std::uint32_t>();
    p.discretizations = j.at("discretizations").get<std::uint32_t>();
    const double range = j.at("range").get<double>();
    if (range >= 0.0) p.range = range;
    p.pseudocount_xi = j.at("pseudocount_xi").get<double>();
    p.n_contrast = j.at("n_contrast").get<std::uint32_t>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.adjust_method = stats::adjust_method_from_string(j.at("adjust_method").get<std::string>());
    p.level = j.at("level").get<double>();
    p.track_tuples = j.at("track_tuples").get<bool>();
    return p;
}

std::string mode_to_string(stats::FitMode m) {
    return m == stats::FitMode::raw ? "raw" : "exp";
}

stats::FitMode mode_from_string(const std::string& s) {
    if (s == "raw") return stats::FitMode::raw;
    if (s == "exp") return stats::FitMode::exp_family;
    throw std::invalid_argument("unknown fit mode: " + s);
}

}  // namespace

std::string result_to_json(const MdfsResult& result) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["params"] = params_to_json(result.params);
    j["seed_used"] = result.seed_used;
    j["fit"] = {{"df", result.fit.df},
                {"m_hat", result.fit.m_hat},
                {"mode", mode_to_string(result.fit.mode)},
                {"n_fit", result.fit.n_fit}};
    j["adjust_method"] = stats::to_string(result.adjust_method);
    j["variable_names"] = result.variable_names;
    j["statistic"] = result.statistic;
    j["p_value"] = result.p_value;
    j["adjusted_p_value"] = result.adjusted_p_value;
    j["relevant_variables"] = result.relevant_variables;
    j["contrast_sources"] = result.contrast_sources;
    j["tuples_tracked"] = result.tuples_tracked;
    if (result.tuples_tracked) {
        j["best_tuple"] = result.best_tuple;
        j["best_discretization"] = result.best_discretization;
    }
    // wall time is run diagnostics, not part of the canonical encoding:
    // identical runs must serialize to identical bytes
    return j.dump(2) + "\n";
}

MdfsResult result_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("malformed result JSON: ") + e.what());
    }
    try {
        if (j.at("schema_version").get<int>() != kSchemaVersion) {
            throw DataError("unsupported result schema version");
        }
        MdfsResult r;
        r.params = params_from_json(j.at("params"));
        r.seed_used = j.at("seed_used").get<std::uint64_t>();
        const json& fit = j.at("fit");
        r.fit.df = fit.at("df").get<double>();
        r.fit.m_hat = fit.at("m_hat").get<double>();
        r.fit.mode = mode_from_string(fit.at("mode").get<std::string>());
        r.fit.n_fit = fit.at("n_fit").get<std::size_t>();
        r.adjust_method = stats::adjust_method_from_string(j.at("adjust_method").get<std::string>());
        r.variable_names = j.at("variable_names").get<std::vector<std::string>>();
        r.statistic = j.at("statistic").get<std::vector<double>>();
        r.p_value = j.at("p_value").get<std::vector<double>>();
        r.adjusted_p_value = j.at("adjusted_p_value").get<std::vector<double>>();
        r.relevant_variables = j.at("relevant_variables").get<std::vector<std::uint32_t>>();
        r.contrast_sources = j.at("contrast_sources").get<std::vector<std::uint32_t>>();
        r.tuples_tracked = j.at("tuples_tracked").get<bool>();
        if (r.tuples_tracked) {
            r.best_tuple = j.at("best_tuple").get<std::vector<std::vector<std::uint32_t>>>();
            r.best_discretization = j.at("best_discretization").get<std::vector<std::uint32_t>>();
        }
        return r;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed result JSON: ") + e.what());
    }
}

std::string result_to_csv(const MdfsResult& result) {
    std::string out = "index,name,statistic,p_value,adjusted_p_value,relevant\n";
    char buf[96];
    for (std::size_t v = 0; v < result.statistic.size(); ++v) {
        const bool relevant = std::find(result.relevant_variables.begin(),
                                        result.relevant_variables.end(),
                                        v) != result.relevant_variables.end();
        std::snprintf(buf, sizeof buf, "%zu,%s,%.17g,%.17g,%.17g,%d\n", v,
                      result.variable_names[v].c_str(), result.statistic[v],
                      result.p_value[v], result.adjusted_p_value[v], relevant ? 1 : 0);
        out += buf;
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw DataError("write failed: " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

}  // namespace mdfs
