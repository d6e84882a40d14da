#include "molcoh/scan_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "molcoh/textio.hpp"

namespace molcoh {

std::string scan_to_csv(const DensityScan& scan) {
    std::string out = "theta_deg,rho_offdiag,rho_diag,ratio\n";
    const std::string diag = format_double(scan.diag, 12);
    for (std::size_t i = 0; i < scan.theta_deg.size(); ++i) {
        out += format_double(scan.theta_deg[i], 12);
        out += ',';
        out += format_double(scan.offdiag[i], 12);
        out += ',';
        out += diag;
        out += ',';
        out += format_double(scan.ratio[i], 12, /*fixed=*/true);
        out += '\n';
    }
    return out;
}

namespace {

std::string fmt(double v) { return format_double(v, 6); }

}  // namespace

std::string scan_to_svg(const DensityScan& scan, const std::string& title) {
    if (scan.ratio.empty()) throw std::invalid_argument("empty scan");
    const double width = 800.0, height = 500.0;
    const double left = 70.0, right = 20.0, top = 40.0, bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    const double y_min_data = *std::min_element(scan.ratio.begin(), scan.ratio.end());
    const double pad = std::max(0.005, 0.15 * (1.0 - y_min_data));
    const double y_lo = y_min_data - pad;
    const double y_hi = 1.0 + pad;

    auto x_at = [&](double theta) { return left + plot_w * theta / 360.0; };
    auto y_at = [&](double ratio) { return top + plot_h * (y_hi - ratio) / (y_hi - y_lo); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt(width) + " " +
           fmt(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        svg += "<text x=\"" + fmt(width / 2) +
               "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
               title + "</text>\n";

    // Axes.
    svg += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(plot_w) +
           "\" height=\"" + fmt(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int theta = 0; theta <= 360; theta += 45) {
        const double x = x_at(theta);
        svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(top + plot_h) + "\" x2=\"" + fmt(x) +
               "\" y2=\"" + fmt(top + plot_h + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(top + plot_h + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               std::to_string(theta) + "</text>\n";
    }
    const int y_ticks = 5;
    for (int i = 0; i <= y_ticks; ++i) {
        const double ratio = y_lo + (y_hi - y_lo) * i / y_ticks;
        const double y = y_at(ratio);
        svg += "<line x1=\"" + fmt(left - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(left) +
               "\" y2=\"" + fmt(y) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(left - 9) + "\" y=\"" + fmt(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
               format_double(ratio, 4, true) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(left + plot_w / 2) + "\" y=\"" + fmt(height - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">rotation "
           "angle (deg)</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt(top + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " +
           fmt(top + plot_h / 2) + ")\">off-diagonal / diagonal</text>\n";

    // Diagonal reference.
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(y_at(1.0)) + "\" x2=\"" +
           fmt(left + plot_w) + "\" y2=\"" + fmt(y_at(1.0)) +
           "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";

    svg += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < scan.theta_deg.size(); ++i) {
        if (i) svg += ' ';
        svg += fmt(x_at(scan.theta_deg[i])) + ',' + fmt(y_at(scan.ratio[i]));
    }
    // Close the periodic curve at 360 degrees.
    svg += ' ' + fmt(x_at(360.0)) + ',' + fmt(y_at(scan.ratio[0]));
    svg += "\"/>\n</svg>\n";
    return svg;
}

ScanPaths emit_scan(const DensityScan& scan, const std::string& base_path,
                    const std::string& title) {
    if (scan.theta_deg.empty()) throw std::invalid_argument("empty scan");
    ScanPaths paths{base_path + ".csv", base_path + ".svg"};
    for (const auto& [path, text] :
         {std::pair{paths.csv, scan_to_csv(scan)}, std::pair{paths.svg, scan_to_svg(scan, title)}}) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        out << text;
        if (!out) throw std::runtime_error("write failed for '" + path + "'");
    }
    return paths;
}

}  // namespace molcoh
