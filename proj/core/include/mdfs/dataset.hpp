#ifndef MDFS_DATASET_HPP
#define MDFS_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdfs {

// Raised for malformed or inconsistent input data (as opposed to bad
// parameters, which raise std::invalid_argument).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An information system: N objects described by M real variables plus a
// binary decision. Features are stored column-major so per-variable scans
// are contiguous. Immutable after construction.
struct Dataset {
    std::size_t n_objects = 0;                // N
    std::size_t n_variables = 0;              // M
    std::vector<double> features;             // [v * N + o]
    std::vector<std::uint8_t> decision;       // values 0/1, length N
    std::vector<std::string> variable_names;  // defaults V1..VM

    std::span<const double> column(std::size_t v) const {
        return {features.data() + v * n_objects, n_objects};
    }

    std::size_t class_count(int d) const;

    // Columns whose values are all equal. They carry no information
    // (a single discretization level) and are reported by loaders as
    // warnings, never as errors.
    std::vector<std::size_t> constant_columns() const;

    // Enforces N >= 4, M >= 1, both decision classes present, all values
    // finite. Throws DataError.
    void validate() const;
};

Dataset make_dataset(std::vector<double> features, std::vector<std::uint8_t> decision,
                     std::size_t n_objects, std::size_t n_variables,
                     std::vector<std::string> names = {});

// The original dataset with appended contrast columns, each an independent
// random permutation of a (randomly chosen, with replacement) source column.
struct AugmentedDataset {
    Dataset data;                                // M + n_contrast columns
    std::vector<std::uint8_t> contrast_mask;     // true on contrast columns
    std::vector<std::size_t> contrast_source;    // size n_contrast
    std::size_t n_original = 0;
};

// RFC-4180-style CSV with a mandatory header row and "." decimals.
// `decision_column` selects the decision by header name, or by 0-based
// position when it parses as a nonnegative integer. Decision values must be
// {0,1} or {-1,1}; -1 maps to 0.
Dataset load_matrix_csv(const std::filesystem::path& path,
                        const std::string& decision_column = "decision",
                        char delimiter = ',');

// Writes a dataset back out in the load_matrix_csv format with
// round-trippable number formatting (%.17g).
void save_matrix_csv(const Dataset& ds, const std::filesystem::path& path,
                     char delimiter = ',');

// UCI-style pair of files: whitespace-separated numeric rows, one object per
// line, plus a labels file with one value in {-1,1} (or {0,1}) per line.
Dataset load_madelon(const std::filesystem::path& data_path,
                     const std::filesystem::path& labels_path);

// Appends n_contrast permuted copies. The j-th contrast column depends only
// on (seed, j): source index drawn uniformly with replacement from the M
// originals, values shuffled by Fisher-Yates on an independent substream.
AugmentedDataset add_contrast_variables(const Dataset& ds, std::size_t n_contrast,
                                        std::uint64_t seed);

}  // namespace mdfs

#endif
