#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>

#include "mdfs/dataset.hpp"
#include "mdfs/rng.hpp"
#include "reference/oracles.hpp"

using namespace mdfs;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static std::atomic<int> counter{0};
        path = fs::temp_directory_path() /
               ("mdfs_dataset_test_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

}  // namespace

TEST_CASE("csv loader parses a small file") {
    TempDir dir;
    const auto file = dir.path / "small.csv";
    write_text(file, "a,b,y\n1.5,2,0\n-0.25,4,1\n3,6,1\n0,8,0\n");

    const auto ds = load_matrix_csv(file, "y");
    CHECK(ds.n_objects == 4);
    CHECK(ds.n_variables == 2);
    CHECK(ds.variable_names == std::vector<std::string>{"a", "b"});
    CHECK(ds.decision == std::vector<std::uint8_t>{0, 1, 1, 0});
    CHECK(ds.column(0)[1] == -0.25);
    CHECK(ds.column(1)[3] == 8.0);
}

TEST_CASE("csv loader accepts -1/1 decisions and positional column") {
    TempDir dir;
    const auto file = dir.path / "pm.csv";
    write_text(file, "x,lab\n1,-1\n2,1\n3,1\n4,-1\n");
    const auto ds = load_matrix_csv(file, "1");
    CHECK(ds.decision == std::vector<std::uint8_t>{0, 1, 1, 0});
}

TEST_CASE("csv loader error paths") {
    TempDir dir;
    CHECK_THROWS_AS((void)load_matrix_csv(dir.path / "missing.csv"), DataError);

    const auto bad_cell = dir.path / "bad.csv";
    write_text(bad_cell, "a,decision\n1,0\nfoo,1\n2,1\n3,0\n");
    CHECK_THROWS_AS((void)load_matrix_csv(bad_cell), DataError);

    const auto constant = dir.path / "constant.csv";
    write_text(constant, "a,decision\n1,1\n2,1\n3,1\n4,1\n");
    CHECK_THROWS_WITH_AS((void)load_matrix_csv(constant),
                         "constant decision: both classes must be present", DataError);

    const auto nonbinary = dir.path / "nb.csv";
    write_text(nonbinary, "a,decision\n1,0\n2,2\n3,1\n4,0\n");
    CHECK_THROWS_AS((void)load_matrix_csv(nonbinary), DataError);

    const auto ragged = dir.path / "ragged.csv";
    write_text(ragged, "a,b,decision\n1,2,0\n1,1\n2,2,1\n3,3,0\n");
    CHECK_THROWS_AS((void)load_matrix_csv(ragged), DataError);
}

TEST_CASE("csv round-trip is bit exact") {
    CounterRng rng(404);
    auto features = oracle::random_values(rng, 40 * 6, -1e6, 1e6);
    features[3] = 1.0 / 3.0;
    features[17] = 6.02214076e23;
    features[23] = -0.0;
    const auto decision = oracle::random_decision(rng, 40);
    const auto ds = make_dataset(features, decision, 40, 6);

    TempDir dir;
    const auto file = dir.path / "roundtrip.csv";
    save_matrix_csv(ds, file);
    const auto back = load_matrix_csv(file);
    CHECK(back.n_objects == ds.n_objects);
    CHECK(back.n_variables == ds.n_variables);
    CHECK(back.features == ds.features);
    CHECK(back.decision == ds.decision);
    CHECK(back.variable_names == ds.variable_names);
}

TEST_CASE("madelon loader format errors") {
    TempDir dir;
    const auto data = dir.path / "d.data";
    const auto labels = dir.path / "d.labels";

    write_text(data, "1 2 3\n4 5 6\n7 8 9\n1 3 5\n");
    write_text(labels, "-1\n1\n1\n");
    CHECK_THROWS_WITH_AS((void)load_madelon(data, labels),
                         "label count mismatch: 3 labels for 4 rows", DataError);

    write_text(labels, "-1\n1\n1\n-1\n");
    const auto ds = load_madelon(data, labels);
    CHECK(ds.n_objects == 4);
    CHECK(ds.n_variables == 3);
    CHECK(ds.decision == std::vector<std::uint8_t>{0, 1, 1, 0});

    write_text(data, "1 2 3\n4 5\n7 8 9\n1 3 5\n");
    CHECK_THROWS_AS((void)load_madelon(data, labels), DataError);
}

TEST_CASE("dataset invariants") {
    CHECK_THROWS_AS((void)make_dataset({1, 2, 3}, {0, 1, 1}, 3, 1), DataError);  // N < 4
    CHECK_THROWS_AS((void)make_dataset({1, 2, 3, 4}, {1, 1, 1, 1}, 4, 1), DataError);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((void)make_dataset({1, 2, nan, 4}, {0, 1, 1, 0}, 4, 1), DataError);

    const auto ds = make_dataset({5, 5, 5, 5, 1, 2, 3, 4}, {0, 1, 1, 0}, 4, 2);
    CHECK(ds.constant_columns() == std::vector<std::size_t>{0});
}

#ifdef MDFS_DATA_DIR
TEST_CASE("madelon fixture loads, round-trips as CSV, and augments") {
    const auto ds = load_madelon(std::string(MDFS_DATA_DIR) + "/madelon_train.data",
                                 std::string(MDFS_DATA_DIR) + "/madelon_train.labels");
    CHECK(ds.n_objects == 2000);
    CHECK(ds.n_variables == 500);
    CHECK(ds.class_count(0) == 1000);
    CHECK(ds.class_count(1) == 1000);

    TempDir dir;
    const auto csv = dir.path / "madelon.csv";
    save_matrix_csv(ds, csv);
    const auto back = load_matrix_csv(csv);
    CHECK(back.n_objects == 2000);
    CHECK(back.n_variables == 500);
    CHECK(back.features == ds.features);
    CHECK(back.decision == ds.decision);

    const auto aug = add_contrast_variables(ds, 30, 118912);
    CHECK(aug.data.n_variables == 530);
    for (std::size_t j = 0; j < 30; ++j) {
        auto src = std::vector<double>(ds.column(aug.contrast_source[j]).begin(),
                                       ds.column(aug.contrast_source[j]).end());
        auto got = std::vector<double>(aug.data.column(500 + j).begin(),
                                       aug.data.column(500 + j).end());
        std::sort(src.begin(), src.end());
        std::sort(got.begin(), got.end());
        CHECK(src == got);
    }
}
#endif

TEST_CASE("contrast variables are exact permutations") {
    CounterRng rng(2024);
    const auto features = oracle::random_values(rng, 50 * 4, 0.0, 10.0);
    const auto decision = oracle::random_decision(rng, 50);
    const auto ds = make_dataset(features, decision, 50, 4);

    const auto aug = add_contrast_variables(ds, 7, 31337);
    CHECK(aug.n_original == 4);
    CHECK(aug.data.n_variables == 11);
    CHECK(aug.contrast_source.size() == 7);
    for (std::size_t j = 0; j < 4; ++j) CHECK(aug.contrast_mask[j] == 0);
    for (std::size_t j = 4; j < 11; ++j) CHECK(aug.contrast_mask[j] == 1);

    for (std::size_t j = 0; j < 7; ++j) {
        const auto src = aug.contrast_source[j];
        REQUIRE(src < 4);
        auto original = std::vector<double>(ds.column(src).begin(), ds.column(src).end());
        auto contrast = std::vector<double>(aug.data.column(4 + j).begin(),
                                            aug.data.column(4 + j).end());
        std::sort(original.begin(), original.end());
        std::sort(contrast.begin(), contrast.end());
        CHECK(original == contrast);  // same multiset
    }

    // identical inputs give bit-identical output; n_contrast = 0 is identity
    const auto again = add_contrast_variables(ds, 7, 31337);
    CHECK(again.data.features == aug.data.features);
    CHECK(again.contrast_source == aug.contrast_source);

    const auto none = add_contrast_variables(ds, 0, 1);
    CHECK(none.data.features == ds.features);
    CHECK(none.contrast_mask == std::vector<std::uint8_t>(4, 0));

    // single column: appended column is a permutation of it
    const auto one = make_dataset({1, 2, 3, 4}, {0, 1, 0, 1}, 4, 1);
    const auto aug1 = add_contrast_variables(one, 1, 9);
    auto col = std::vector<double>(aug1.data.column(1).begin(), aug1.data.column(1).end());
    std::sort(col.begin(), col.end());
    CHECK(col == std::vector<double>{1, 2, 3, 4});
}
