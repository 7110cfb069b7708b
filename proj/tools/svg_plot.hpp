#ifndef MDFS_TOOLS_SVG_PLOT_HPP
#define MDFS_TOOLS_SVG_PLOT_HPP

#include <string>

#include "mdfs/pipeline.hpp"

namespace mdfs::tools {

// Scatter of all variables sorted by descending statistic, filled markers for
// relevant variables, hollow for the rest, horizontal line at the statistic
// threshold for the run's significance level. Byte-deterministic for a given
// result.
std::string render_result_svg(const MdfsResult& result);

}  // namespace mdfs::tools

#endif
