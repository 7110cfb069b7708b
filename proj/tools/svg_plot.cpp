#include "svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <vector>

#include "mdfs/stats.hpp"

namespace mdfs::tools {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_result_svg(const MdfsResult& result) {
    constexpr double width = 900.0, height = 540.0;
    constexpr double left = 70.0, right = 20.0, top = 20.0, bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    const std::size_t m = result.statistic.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return result.statistic[a] > result.statistic[b];
    });

    double y_max = 1.0;
    for (double s : result.statistic) y_max = std::max(y_max, s);
    const double limit = stats::ig_limit(result.fit, result.params.level);
    y_max = std::max(y_max, limit) * 1.05;

    const auto x_of = [&](std::size_t rank) {
        return left + (m > 1 ? plot_w * static_cast<double>(rank) / (m - 1) : plot_w / 2);
    };
    const auto y_of = [&](double stat) {
        return top + plot_h * (1.0 - std::max(stat, 0.0) / y_max);
    };

    std::vector<bool> relevant(m, false);
    for (auto v : result.relevant_variables) relevant[v] = true;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
           "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " +
           num(height) + "\">\n";
    svg += "<rect width=\"" + num(width) + "\" height=\"" + num(height) +
           "\" fill=\"white\"/>\n";

    // axes
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" +
           num(left + plot_w) + "\" y2=\"" + num(top + plot_h) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) +
           "\" y2=\"" + num(top + plot_h) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double frac = tick / 4.0;
        const double y = top + plot_h * (1.0 - frac);
        svg += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left) +
               "\" y2=\"" + num(y) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + num(left - 10) + "\" y=\"" + num(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
               num(frac * y_max) + "</text>\n";
    }
    svg += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" + num(height - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
           "variables sorted by statistic</text>\n";
    svg += "<text transform=\"rotate(-90 18 " + num(top + plot_h / 2) + ")\" x=\"18\" y=\"" +
           num(top + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
           "max information gain</text>\n";

    // threshold line
    const double ly = y_of(limit);
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(left + plot_w) +
           "\" y2=\"" + num(ly) +
           "\" stroke=\"crimson\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
    svg += "<text x=\"" + num(left + plot_w) + "\" y=\"" + num(ly - 6) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
           "fill=\"crimson\">threshold " + num(limit) + "</text>\n";

    // points: full circles for relevant variables, hollow otherwise
    for (std::size_t rank = 0; rank < m; ++rank) {
        const std::size_t v = order[rank];
        const std::string cx = num(x_of(rank));
        const std::string cy = num(y_of(result.statistic[v]));
        if (relevant[v]) {
            svg += "<circle cx=\"" + cx + "\" cy=\"" + cy +
                   "\" r=\"3\" fill=\"black\"/>\n";
        } else {
            svg += "<circle cx=\"" + cx + "\" cy=\"" + cy +
                   "\" r=\"3\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace mdfs::tools
