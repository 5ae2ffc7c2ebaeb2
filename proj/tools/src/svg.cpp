#include "kvnlab_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace kvnlab::cli::svg {

namespace {

constexpr double left = 90.0;
constexpr double right = 30.0;
constexpr double top = 50.0;
constexpr double bottom = 70.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

void header(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"18\">"
       << escape(title) << "</text>\n";
}

void axes(std::ostringstream& os, const std::string& xlabel, const std::string& ylabel, double x0, double x1,
          double y0, double y1) {
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = i / 4.0;
        const double px = left + fx * pw;
        const double py = top + ph - fx * ph;
        os << "<text x=\"" << num(px) << "\" y=\"" << num(top + ph + 20)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << tick(x0 + fx * (x1 - x0))
           << "</text>\n";
        os << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << tick(y0 + fx * (y1 - y0))
           << "</text>\n";
    }
    os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 20.0)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << escape(xlabel) << "</text>\n";
    os << "<text x=\"20\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"14\" transform=\"rotate(-90 20 "
       << num(top + ph / 2) << ")\">" << escape(ylabel) << "</text>\n";
}

void expand(double& lo, double& hi) {
    if (!(hi > lo)) {
        const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
        lo -= pad;
        hi += pad;
    }
}

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    return colors[i % 6];
}

}  // namespace

std::string line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series) {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            if (first) {
                x0 = x1 = s.x[i];
                y0 = y1 = s.y[i];
                first = false;
            }
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    expand(x0, x1);
    expand(y0, y1);
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    std::ostringstream os;
    header(os, title);
    axes(os, xlabel, ylabel, x0, x1, y0, y1);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const std::string color = s.color.empty() ? palette(k) : s.color;
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (s.dashed) {
            os << " stroke-dasharray=\"6 4\"";
        }
        os << " points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            const double px = left + (s.x[i] - x0) / (x1 - x0) * pw;
            const double py = top + ph - (s.y[i] - y0) / (y1 - y0) * ph;
            os << num(px) << ',' << num(py) << ' ';
        }
        os << "\"/>\n";
        const double ly = top + 18.0 + 18.0 * static_cast<double>(k);
        os << "<line x1=\"" << num(left + pw - 170) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
           << num(left + pw - 145) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << num(left + pw - 140) << "\" y=\"" << num(ly)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string heatmap(const std::string& title, const std::string& xlabel, const std::string& ylabel, double x0,
                    double x1, double y0, double y1, std::size_t nx, std::size_t ny,
                    const std::vector<double>& values) {
    double lo = 0.0, hi = 0.0;
    for (double v : values) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    std::ostringstream os;
    header(os, title);
    const double cw = pw / static_cast<double>(nx);
    const double ch = ph / static_cast<double>(ny);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double v = values[i * ny + j];
            const double f = scale > 0.0 && std::isfinite(v) ? v / scale : 0.0;
            // Diverging map: red for positive, blue for negative, white at zero.
            int r = 255, g = 255, b = 255;
            if (f >= 0.0) {
                g = b = static_cast<int>(std::lround(255.0 * (1.0 - f)));
            } else {
                r = g = static_cast<int>(std::lround(255.0 * (1.0 + f)));
            }
            char fill[8];
            std::snprintf(fill, sizeof fill, "#%02x%02x%02x", r, g, b);
            os << "<rect x=\"" << num(left + static_cast<double>(i) * cw) << "\" y=\""
               << num(top + ph - static_cast<double>(j + 1) * ch) << "\" width=\"" << num(cw + 0.05)
               << "\" height=\"" << num(ch + 0.05) << "\" fill=\"" << fill << "\"/>\n";
        }
    }
    axes(os, xlabel, ylabel, x0, x1, y0, y1);
    os << "</svg>\n";
    return os.str();
}

}  // namespace kvnlab::cli::svg
