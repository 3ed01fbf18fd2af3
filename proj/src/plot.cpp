#include "chunknet/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace chunknet {

namespace {

constexpr double kWidth = 880, kHeight = 560;
constexpr double kLeft = 64, kRight = 20, kTop = 28, kBottom = 48;

const char* kPalette[] = {"#1b6ca8", "#d1495b", "#2e933c", "#8c4f9f", "#e08a00",
                          "#00798c", "#a23b72", "#5c7457", "#9a4c36", "#444444"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

double nice_step(double span, double target_ticks) {
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

} // namespace

std::string render_sweep_svg(std::span<const SweepTable> tables,
                             std::span<const BoundMark> marks) {
    double x_lo = 0, x_hi = 0;
    bool any = false;
    for (const SweepTable& t : tables)
        for (const PointEstimate& p : t.points) {
            if (!any) {
                x_lo = x_hi = p.n;
                any = true;
            }
            x_lo = std::min(x_lo, static_cast<double>(p.n));
            x_hi = std::max(x_hi, static_cast<double>(p.n));
        }
    if (!any) throw std::invalid_argument("render_sweep_svg: empty table");
    for (const BoundMark& m : marks) {
        x_lo = std::min(x_lo, m.n);
        x_hi = std::max(x_hi, m.n);
    }
    if (x_hi <= x_lo) x_hi = x_lo + 1;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto X = [&](double n) { return kLeft + (n - x_lo) / (x_hi - x_lo) * plot_w; };
    const auto Y = [&](double p) { return kTop + (1.0 - p) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
           "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
           fmt(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    // y grid and labels at 0, 0.1, ..., 1
    for (int i = 0; i <= 10; ++i) {
        const double p = i / 10.0;
        svg += "<line x1=\"" + fmt(X(x_lo)) + "\" y1=\"" + fmt(Y(p)) + "\" x2=\"" +
               fmt(X(x_hi)) + "\" y2=\"" + fmt(Y(p)) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(Y(p) + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" +
               fmt(p) + "</text>\n";
    }
    // x ticks
    const double step = nice_step(x_hi - x_lo, 8.0);
    for (double n = std::ceil(x_lo / step) * step; n <= x_hi + 1e-9; n += step) {
        svg += "<line x1=\"" + fmt(X(n)) + "\" y1=\"" + fmt(Y(0)) + "\" x2=\"" + fmt(X(n)) +
               "\" y2=\"" + fmt(Y(0) + 5) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        char label[32];
        std::snprintf(label, sizeof label, "%.0f", n);
        svg += "<text x=\"" + fmt(X(n)) + "\" y=\"" + fmt(Y(0) + 20) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
               label + "</text>\n";
    }
    svg += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 10) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
           "capacity n</text>\n";
    svg += "<text x=\"14\" y=\"" + fmt(kTop + plot_h / 2) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 14 " +
           fmt(kTop + plot_h / 2) + ")\">success rate</text>\n";

    // bound markers
    for (const BoundMark& m : marks) {
        svg += "<line x1=\"" + fmt(X(m.n)) + "\" y1=\"" + fmt(Y(1)) + "\" x2=\"" +
               fmt(X(m.n)) + "\" y2=\"" + fmt(Y(0)) +
               "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";
        svg += "<text x=\"" + fmt(X(m.n) + 4) + "\" y=\"" + fmt(Y(1) + 12) +
               "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#666666\">" +
               m.label + "</text>\n";
    }

    // curves, whiskers, legend
    std::size_t curve = 0;
    double legend_y = kTop + 10;
    const bool tag_l = tables.size() > 1;
    for (const SweepTable& t : tables) {
        for (const CodeSpec& spec : t.config.codes) {
            const char* color = kPalette[curve % kPaletteSize];
            std::string path;
            for (const PointEstimate& p : t.points) {
                if (!(p.spec == spec)) continue;
                const std::string x = fmt(X(p.n));
                svg += "<line x1=\"" + x + "\" y1=\"" + fmt(Y(p.ci_low)) + "\" x2=\"" + x +
                       "\" y2=\"" + fmt(Y(p.ci_high)) + "\" stroke=\"" + color +
                       "\" stroke-width=\"1\" opacity=\"0.6\"/>\n";
                svg += "<circle cx=\"" + x + "\" cy=\"" + fmt(Y(p.p_hat)) +
                       "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
                path += (path.empty() ? "M" : " L") + x + " " + fmt(Y(p.p_hat));
            }
            if (path.empty()) {
                ++curve;
                continue;
            }
            svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"1.5\"/>\n";
            std::string name = spec.id();
            if (tag_l) name += " l=" + std::to_string(t.config.l);
            svg += "<line x1=\"" + fmt(kLeft + 10) + "\" y1=\"" + fmt(legend_y) + "\" x2=\"" +
                   fmt(kLeft + 34) + "\" y2=\"" + fmt(legend_y) + "\" stroke=\"" + color +
                   "\" stroke-width=\"2\"/>\n";
            svg += "<text x=\"" + fmt(kLeft + 40) + "\" y=\"" + fmt(legend_y + 4) +
                   "\" font-family=\"sans-serif\" font-size=\"12\">" + name + "</text>\n";
            legend_y += 16;
            ++curve;
        }
    }

    svg += "</svg>\n";
    return svg;
}

std::string render_sweep_svg(const SweepTable& table) {
    return render_sweep_svg(std::span<const SweepTable>(&table, 1), {});
}

} // namespace chunknet
