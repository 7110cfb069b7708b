#include "mdfs/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mdfs/rng.hpp"

namespace mdfs {

namespace {

constexpr std::uint64_t kTagContrastSource = 0x636f6e74726173ULL;   // stream domain tags
constexpr std::uint64_t kTagContrastShuffle = 0x7368756666ULL;

double parse_number(const std::string& cell, const char* where) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(begin, &end);
    while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (end == begin || (end && *end != '\0')) {
        throw DataError(std::string("non-numeric cell '") + cell + "' in " + where);
    }
    return value;
}

std::uint8_t parse_decision_value(double v, const char* where) {
    if (v == 0.0 || v == 1.0) return static_cast<std::uint8_t>(v);
    if (v == -1.0) return 0;  // {-1,1} labels normalize to {0,1}
    throw DataError(std::string("non-binary decision value in ") + where);
}

std::vector<std::string> split_csv_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == delimiter) {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::vector<std::string> default_names(std::size_t m) {
    std::vector<std::string> names(m);
    for (std::size_t v = 0; v < m; ++v) names[v] = "V" + std::to_string(v + 1);
    return names;
}

}  // namespace

std::size_t Dataset::class_count(int d) const {
    return static_cast<std::size_t>(
        std::count(decision.begin(), decision.end(), static_cast<std::uint8_t>(d)));
}

std::vector<std::size_t> Dataset::constant_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < n_variables; ++v) {
        const auto col = column(v);
        if (std::all_of(col.begin(), col.end(), [&](double x) { return x == col[0]; })) {
            out.push_back(v);
        }
    }
    return out;
}

void Dataset::validate() const {
    if (n_objects < 4) throw DataError("dataset must have at least 4 objects");
    if (n_variables < 1) throw DataError("dataset must have at least 1 variable");
    if (features.size() != n_objects * n_variables) throw DataError("feature matrix size mismatch");
    if (decision.size() != n_objects) throw DataError("decision length mismatch");
    if (variable_names.size() != n_variables) throw DataError("variable name count mismatch");
    for (double x : features) {
        if (!std::isfinite(x)) throw DataError("non-finite feature value");
    }
    bool has0 = false, has1 = false;
    for (std::uint8_t d : decision) {
        if (d > 1) throw DataError("decision values must be 0 or 1");
        (d ? has1 : has0) = true;
    }
    if (!has0 || !has1) throw DataError("constant decision: both classes must be present");
}

Dataset make_dataset(std::vector<double> features, std::vector<std::uint8_t> decision,
                     std::size_t n_objects, std::size_t n_variables,
                     std::vector<std::string> names) {
    Dataset ds;
    ds.n_objects = n_objects;
    ds.n_variables = n_variables;
    ds.features = std::move(features);
    ds.decision = std::move(decision);
    ds.variable_names = names.empty() ? default_names(n_variables) : std::move(names);
    ds.validate();
    return ds;
}

Dataset load_matrix_csv(const std::filesystem::path& path, const std::string& decision_column,
                        char delimiter) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());
    const std::string where = path.string();

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + where);
    const auto header = split_csv_line(line, delimiter);
    const std::size_t n_columns = header.size();
    if (n_columns < 2) throw DataError("need at least one feature and a decision column in " + where);

    // Named column wins; a nonnegative integer selects by 0-based position.
    std::size_t decision_index = n_columns;
    for (std::size_t c = 0; c < n_columns; ++c) {
        if (header[c] == decision_column) {
            decision_index = c;
            break;
        }
    }
    if (decision_index == n_columns &&
        !decision_column.empty() &&
        std::all_of(decision_column.begin(), decision_column.end(),
                    [](unsigned char ch) { return std::isdigit(ch); })) {
        const std::size_t idx = std::stoul(decision_column);
        if (idx < n_columns) decision_index = idx;
    }
    if (decision_index == n_columns) {
        throw DataError("decision column '" + decision_column + "' not found in " + where);
    }

    std::vector<std::string> names;
    names.reserve(n_columns - 1);
    for (std::size_t c = 0; c < n_columns; ++c) {
        if (c != decision_index) names.push_back(header[c]);
    }

    std::vector<std::vector<double>> columns(n_columns - 1);
    std::vector<std::uint8_t> decision;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const auto fields = split_csv_line(line, delimiter);
        if (fields.size() != n_columns) {
            throw DataError("row " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(n_columns) + " in " + where);
        }
        std::size_t out_col = 0;
        for (std::size_t c = 0; c < n_columns; ++c) {
            const double value = parse_number(fields[c], where.c_str());
            if (c == decision_index) {
                decision.push_back(parse_decision_value(value, where.c_str()));
            } else {
                columns[out_col++].push_back(value);
            }
        }
    }

    const std::size_t n = decision.size();
    const std::size_t m = n_columns - 1;
    std::vector<double> features(n * m);
    for (std::size_t v = 0; v < m; ++v) {
        std::copy(columns[v].begin(), columns[v].end(), features.begin() + v * n);
    }
    return make_dataset(std::move(features), std::move(decision), n, m, std::move(names));
}

void save_matrix_csv(const Dataset& ds, const std::filesystem::path& path, char delimiter) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    for (std::size_t v = 0; v < ds.n_variables; ++v) {
        out << ds.variable_names[v] << delimiter;
    }
    out << "decision\n";
    char buf[32];
    for (std::size_t o = 0; o < ds.n_objects; ++o) {
        for (std::size_t v = 0; v < ds.n_variables; ++v) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.features[v * ds.n_objects + o]);
            out << buf << delimiter;
        }
        out << (ds.decision[o] ? '1' : '0') << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

Dataset load_madelon(const std::filesystem::path& data_path,
                     const std::filesystem::path& labels_path) {
    std::ifstream in(data_path);
    if (!in) throw DataError("cannot open file: " + data_path.string());

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t n_variables = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        std::vector<double> row;
        double x;
        while (ss >> x) row.push_back(x);
        if (!ss.eof()) throw DataError("non-numeric cell in " + data_path.string());
        if (n_variables == 0) {
            n_variables = row.size();
        } else if (row.size() != n_variables) {
            throw DataError("row length mismatch in " + data_path.string() + ": row " +
                            std::to_string(rows.size() + 1) + " has " +
                            std::to_string(row.size()) + " fields, expected " +
                            std::to_string(n_variables));
        }
        rows.push_back(std::move(row));
    }

    std::ifstream labels(labels_path);
    if (!labels) throw DataError("cannot open file: " + labels_path.string());
    std::vector<std::uint8_t> decision;
    while (std::getline(labels, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        decision.push_back(parse_decision_value(parse_number(line, labels_path.string().c_str()),
                                                labels_path.string().c_str()));
    }
    if (decision.size() != rows.size()) {
        throw DataError("label count mismatch: " + std::to_string(decision.size()) +
                        " labels for " + std::to_string(rows.size()) + " rows");
    }

    const std::size_t n = rows.size();
    std::vector<double> features(n * n_variables);
    for (std::size_t o = 0; o < n; ++o) {
        for (std::size_t v = 0; v < n_variables; ++v) {
            features[v * n + o] = rows[o][v];
        }
    }
    return make_dataset(std::move(features), std::move(decision), n, n_variables);
}

AugmentedDataset add_contrast_variables(const Dataset& ds, std::size_t n_contrast,
                                        std::uint64_t seed) {
    ds.validate();
    const std::size_t n = ds.n_objects;
    const std::size_t m = ds.n_variables;

    AugmentedDataset out;
    out.n_original = m;
    out.contrast_mask.assign(m + n_contrast, 0);
    out.contrast_source.resize(n_contrast);

    std::vector<double> features(ds.features);
    features.resize(n * (m + n_contrast));
    std::vector<std::string> names(ds.variable_names);
    names.reserve(m + n_contrast);

    for (std::size_t j = 0; j < n_contrast; ++j) {
        CounterRng source_rng(derive_key(derive_key(seed, kTagContrastSource), j));
        const std::size_t src = static_cast<std::size_t>(source_rng.uniform_int(m));
        out.contrast_source[j] = src;
        out.contrast_mask[m + j] = 1;

        double* col = features.data() + (m + j) * n;
        std::copy_n(ds.features.data() + src * n, n, col);
        CounterRng shuffle_rng(derive_key(derive_key(seed, kTagContrastShuffle), j));
        for (std::size_t i = n - 1; i > 0; --i) {
            const std::size_t pick = static_cast<std::size_t>(shuffle_rng.uniform_int(i + 1));
            std::swap(col[i], col[pick]);
        }
        names.push_back("contrast_" + std::to_string(j + 1));
    }

    out.data = make_dataset(std::move(features), ds.decision, n, m + n_contrast,
                            std::move(names));
    return out;
}

}  // namespace mdfs
