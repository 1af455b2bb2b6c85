#include "fadecode/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fadecode {

namespace {

const char* kPalette[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<BlerCurve>& curves) {
    const double width = 760, height = 540;
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = 1e300, xmax = -1e300, ymin = 1.0, ymax = 0.0;
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            xmin = std::min(xmin, p.snr_db);
            xmax = std::max(xmax, p.snr_db);
            if (p.bler > 0.0) {
                ymin = std::min(ymin, p.bler);
                ymax = std::max(ymax, p.bler);
            }
        }
    }
    if (xmin > xmax) throw std::invalid_argument("write_svg_plot: no points");
    if (ymax <= 0.0) {
        ymin = 1e-6;
        ymax = 1.0;
    }
    const double ylo = std::floor(std::log10(ymin));
    const double yhi = std::ceil(std::log10(std::min(1.0, ymax * 1.2)));

    auto xpix = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto ypix = [&](double bler) {
        const double ly = std::log10(bler);
        return mt + (yhi - ly) / (yhi - ylo) * ph;
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
           "font-family=\"sans-serif\">" << title << "</text>\n";

    // grid and ticks
    for (int d = int(ylo); d <= int(yhi); ++d) {
        const double y = ypix(std::pow(10.0, d));
        out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">1e" << d
            << "</text>\n";
    }
    const int xticks = 11;
    for (int i = 0; i < xticks; ++i) {
        const double xv = xmin + (xmax - xmin) * i / (xticks - 1);
        const double x = xpix(xv);
        out << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\"" << mt + ph
            << "\" stroke=\"#eeeeee\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << mt + ph + 16
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(xv)
            << "</text>\n";
    }
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">SNR (dB)"
           "</text>\n";
    out << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">BLER</text>\n";

    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const auto& curve = curves[ci];
        const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string pts;
        for (const auto& p : curve.points) {
            if (p.bler <= 0.0) continue;  // log axis: skip empty estimates
            pts += fmt(xpix(p.snr_db)) + "," + fmt(ypix(p.bler)) + " ";
        }
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\""
            << pts << "\"/>\n";
        const double ly = mt + 16 + 16 * double(ci);
        out << "<line x1=\"" << ml + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + 34
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + 40 << "\" y=\"" << ly
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << curve.system_label
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace fadecode
