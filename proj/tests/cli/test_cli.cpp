// Contract tests for the mdfs command line tool: exit codes, output files,
// determinism across worker counts. Spawns the real binary.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mdfs/dataset.hpp"
#include "mdfs/result_io.hpp"
#include "mdfs/rng.hpp"

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
    if (ok) {
        std::printf("[ok] %s\n", what.c_str());
    } else {
        std::printf("[FAIL] %s\n", what.c_str());
        ++g_failures;
    }
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MDFS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path make_planted_csv(const fs::path& dir) {
    // 80 objects, 6 variables; V1 separates the classes
    mdfs::CounterRng rng(2718);
    const std::size_t n = 80, m = 6;
    std::vector<double> features(n * m);
    for (double& x : features) x = rng.uniform(-1.0, 1.0);
    std::vector<std::uint8_t> decision(n);
    for (std::size_t o = 0; o < n; ++o) decision[o] = static_cast<std::uint8_t>(o % 2);
    for (std::size_t o = 0; o < n; ++o) features[o] += decision[o] ? 2.0 : -2.0;
    const auto ds = mdfs::make_dataset(std::move(features), std::move(decision), n, m);
    const auto path = dir / "planted.csv";
    mdfs::save_matrix_csv(ds, path);
    return path;
}

}  // namespace

int main() {
    const fs::path dir = fs::temp_directory_path() / "mdfs_cli_contract";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto csv = make_planted_csv(dir);
    const std::string base = "run --data " + csv.string() +
                             " --dimensions 2 --discretizations 2 --contrast 8 --seed 5";

    // flag errors exit 2
    check(run_cli("run --data " + csv.string() + " --dimensions 6") == 2,
          "dimensions out of range exits 2");
    check(run_cli("run") == 2, "missing input exits 2");
    check(run_cli("frobnicate") == 2, "unknown subcommand exits 2");
    check(run_cli("tuples --data " + csv.string() + " --dimensions 2") == 2,
          "tuples without threshold exits 2");
    check(run_cli("tuples --data " + csv.string() +
                  " --dimensions 1 --ig-threshold 1") == 2,
          "tuples with dimensions 1 exits 2");

    // data errors exit 3
    check(run_cli("run --data " + (dir / "nope.csv").string()) == 3,
          "missing input file exits 3");
    check(run_cli("plot -i " + (dir / "nope.json").string() + " -o " +
                  (dir / "x.svg").string()) == 3,
          "plot with missing result exits 3");

    // a successful run writes the result file and exits 0
    const auto out1 = dir / "r1.json";
    check(run_cli(base + " --workers 1 -o " + out1.string()) == 0, "run exits 0");
    check(fs::exists(out1), "result file exists");
    check(!fs::exists(out1.string() + ".tmp"), "no temp file left behind");

    // deterministic across worker counts and reruns
    const auto out2 = dir / "r2.json";
    const auto out3 = dir / "r3.json";
    run_cli(base + " --workers 4 -o " + out2.string());
    run_cli(base + " --workers 4 -o " + out3.string());
    check(slurp(out1) == slurp(out2), "workers 1 vs 4 produce identical bytes");
    check(slurp(out2) == slurp(out3), "reruns with one seed produce identical bytes");

    // JSON round-trips through the library and reproduces the relevant cut
    const auto result = mdfs::result_from_json(slurp(out1));
    check(result.relevant_variables == mdfs::relevant_variables(result, result.params.level),
          "stored relevant set equals recut at the stored level");
    check(!result.relevant_variables.empty() && result.relevant_variables[0] == 0,
          "planted variable V1 is found relevant");

    // csv format export
    const auto out_csv = dir / "r.csv";
    check(run_cli(base + " --format csv -o " + out_csv.string()) == 0, "csv run exits 0");
    check(slurp(out_csv).rfind("index,name,", 0) == 0, "csv export has the header row");

    // tuples: huge threshold gives a header-only file, tiny threshold all rows
    const auto tup = dir / "t.csv";
    check(run_cli("tuples --data " + csv.string() +
                  " --dimensions 2 --seed 5 --ig-threshold 1e300 -o " + tup.string()) == 0,
          "tuples with huge threshold exits 0");
    check(slurp(tup) == "variable,name,member_1,member_2,ig\n", "header-only tuple CSV");
    check(run_cli("tuples --data " + csv.string() +
                  " --dimensions 2 --seed 5 --ig-threshold -1e300 -o " + tup.string()) == 0,
          "tuples with tiny threshold exits 0");
    const std::string tup_text = slurp(tup);
    check(std::count(tup_text.begin(), tup_text.end(), '\n') == 1 + 6 * 5,
          "exhaustive tuple CSV has one row per membership");

    // ttest on a file with a constant column: flagged, others computed
    {
        mdfs::CounterRng rng(11);
        const std::size_t n = 40;
        std::vector<double> features(n * 3);
        for (std::size_t o = 0; o < n; ++o) {
            features[0 * n + o] = 7.0;  // constant
            features[1 * n + o] = rng.uniform(0, 1) + (o % 2 ? 1.5 : 0.0);
            features[2 * n + o] = rng.uniform(0, 1);
        }
        std::vector<std::uint8_t> decision(n);
        for (std::size_t o = 0; o < n; ++o) decision[o] = static_cast<std::uint8_t>(o % 2);
        const auto tds = mdfs::make_dataset(std::move(features), std::move(decision), n, 3);
        mdfs::save_matrix_csv(tds, dir / "ttest.csv");
    }
    const auto tt = dir / "tt.csv";
    check(run_cli("ttest --data " + (dir / "ttest.csv").string() + " -o " + tt.string()) == 0,
          "ttest exits 0");
    const auto tt_text = slurp(tt);
    check(tt_text.find("V1,,,,degenerate") != std::string::npos,
          "constant variable flagged as degenerate");
    check(tt_text.find("degenerate\n1,V2") == std::string::npos ||
              tt_text.find(",V2,") != std::string::npos,
          "other variables still computed");

    // plot: SVG with filled markers, deterministic bytes
    const auto svg1 = dir / "p1.svg";
    const auto svg2 = dir / "p2.svg";
    check(run_cli("plot -i " + out1.string() + " -o " + svg1.string()) == 0, "plot exits 0");
    check(run_cli("plot -i " + out1.string() + " -o " + svg2.string()) == 0, "plot rerun");
    const auto svg_text = slurp(svg1);
    check(svg_text.rfind("<?xml", 0) == 0 && svg_text.find("</svg>") != std::string::npos,
          "plot emits svg");
    check(svg_text.find("fill=\"black\"") != std::string::npos,
          "relevant variables are filled markers");
    check(svg_text == slurp(svg2), "plot bytes are deterministic");

    // tuples via --alpha on the bundled Madelon set: records must cover every
    // variable the run itself calls relevant
    const fs::path mdata = fs::path(MDFS_DATA_DIR) / "madelon_train.data";
    const fs::path mlabels = fs::path(MDFS_DATA_DIR) / "madelon_train.labels";
    if (fs::exists(mdata) && fs::exists(mlabels)) {
        const std::string madelon_flags = " --madelon-data " + mdata.string() +
                                          " --madelon-labels " + mlabels.string() +
                                          " --dimensions 2 --divisions 1 --discretizations 1"
                                          " --range 0 --seed 0 --workers 2";
        const auto mrun = dir / "m2.json";
        check(run_cli("run" + madelon_flags + " --contrast 0 -o " + mrun.string()) == 0,
              "madelon 2D run exits 0");
        const auto mres = mdfs::result_from_json(slurp(mrun));

        const auto mtup = dir / "m2_tuples.csv";
        check(run_cli("tuples" + madelon_flags + " --alpha 0.05 -o " + mtup.string()) == 0,
              "madelon tuples via --alpha exits 0");
        std::set<unsigned> tuple_vars;
        std::istringstream lines(slurp(mtup));
        std::string line;
        std::getline(lines, line);  // header
        while (std::getline(lines, line)) {
            tuple_vars.insert(static_cast<unsigned>(std::stoul(line.substr(0, line.find(',')))));
        }
        bool covered = true;
        for (auto v : mres.relevant_variables) covered = covered && tuple_vars.count(v) > 0;
        check(covered, "tuple records cover every relevant variable of the run");

        // the known 2D relevant set of this fixture, as 0-based indices
        const std::vector<std::uint32_t> expected2d{28,  48,  64,  105, 128, 153, 241,
                                                    281, 318, 336, 338, 378, 433, 442,
                                                    451, 453, 472, 475, 493};
        check(mres.relevant_variables == expected2d, "madelon 2D relevant set is exact");

        const auto msvg = dir / "m2.svg";
        check(run_cli("plot -i " + mrun.string() + " -o " + msvg.string()) == 0,
              "madelon plot exits 0");
        const std::string svg = slurp(msvg);
        std::size_t filled = 0;
        for (std::size_t pos = svg.find("fill=\"black\""); pos != std::string::npos;
             pos = svg.find("fill=\"black\"", pos + 1)) {
            ++filled;
        }
        check(filled == expected2d.size(), "one filled marker per relevant variable");
    }

    fs::remove_all(dir);
    if (g_failures) {
        std::printf("%d CLI contract checks failed\n", g_failures);
        return 1;
    }
    std::printf("all CLI contract checks passed\n");
    return 0;
}
