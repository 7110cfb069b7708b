#ifndef MDFS_RESULT_IO_HPP
#define MDFS_RESULT_IO_HPP

#include <filesystem>
#include <string>

#include "mdfs/pipeline.hpp"

namespace mdfs {

// Versioned JSON encoding of a full run result (schema_version 1). The
// encoding is canonical: identical results serialize to identical bytes.
std::string result_to_json(const MdfsResult& result);
MdfsResult result_from_json(const std::string& json_text);

// Flat per-variable CSV export: index, name, statistic, p_value,
// adjusted_p_value, relevant.
std::string result_to_csv(const MdfsResult& result);

// Writes content to a temporary file in the target directory and renames it
// into place, so failures never leave partial output.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace mdfs

#endif
