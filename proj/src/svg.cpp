#include "bvselect/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bvs::svg {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

void open(std::ostringstream& os, int w, int h, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<text x=\"" << w / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
       << "</text>\n";
}

}  // namespace

std::string bar_chart(const std::vector<std::string>& labels, const std::vector<double>& values,
                      const std::string& title, double max) {
    const int left = 120, bar_w = 300, row_h = 20, top = 30;
    const int h = top + row_h * static_cast<int>(labels.size()) + 10;
    std::ostringstream os;
    open(os, left + bar_w + 80, h, title);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int y = top + row_h * static_cast<int>(i);
        const double v = i < values.size() ? values[i] : 0.0;
        const double frac = max > 0 ? std::clamp(v / max, 0.0, 1.0) : 0.0;
        os << "<text x=\"" << left - 6 << "\" y=\"" << y + 14 << "\" text-anchor=\"end\">" << escape(labels[i])
           << "</text>\n";
        os << "<rect x=\"" << left << "\" y=\"" << y + 3 << "\" width=\"" << num(frac * bar_w) << "\" height=\""
           << row_h - 6 << "\" fill=\"#4a6fa5\"/>\n";
        os << "<text x=\"" << left + bar_w + 6 << "\" y=\"" << y + 14 << "\">" << num(v) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string heatmap(const std::vector<std::string>& labels, const Eigen::MatrixXd& m, const std::string& title) {
    const int left = 120, top = 120, cell = 24;
    const int k = static_cast<int>(m.rows());
    std::ostringstream os;
    open(os, left + cell * k + 20, top + cell * k + 20, title);
    os << "<defs><pattern id=\"nan\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">"
          "<path d=\"M0 6L6 0\" stroke=\"#c00\"/></pattern></defs>\n";
    for (int i = 0; i < k; ++i) {
        const std::string lab = i < static_cast<int>(labels.size()) ? escape(labels[i]) : "";
        os << "<text x=\"" << left - 6 << "\" y=\"" << top + cell * i + 16 << "\" text-anchor=\"end\">" << lab
           << "</text>\n";
        const int cx = left + cell * i + 16, cy = top - 6;
        os << "<text x=\"" << cx << "\" y=\"" << cy << "\" transform=\"rotate(-60 " << cx << " " << cy << ")\">"
           << lab << "</text>\n";
        for (int j = 0; j < k; ++j) {
            const double v = m(i, j);
            os << "<rect x=\"" << left + cell * j << "\" y=\"" << top + cell * i << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" stroke=\"#fff\" ";
            if (std::isnan(v)) {
                os << "fill=\"url(#nan)\"";
            } else {
                const int g = static_cast<int>(std::lround(255 * (1.0 - std::clamp(v, 0.0, 1.0))));
                os << "fill=\"rgb(" << g << "," << g << "," << g << ")\"";
            }
            os << "><title>" << num(v) << "</title></rect>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

std::string histogram(const HistData& h, const std::string& title) {
    const int left = 60, top = 30, plot_w = 420, plot_h = 220, gap = 30, zero_w = 30;
    std::size_t max_count = h.zero_count;
    for (auto c : h.counts) max_count = std::max<std::size_t>(max_count, c);
    const double scale = max_count ? static_cast<double>(plot_h) / static_cast<double>(max_count) : 0.0;
    std::ostringstream os;
    open(os, left + zero_w + gap + plot_w + 20, top + plot_h + 40, title);
    const int base = top + plot_h;
    const double zh = static_cast<double>(h.zero_count) * scale;
    os << "<rect x=\"" << left << "\" y=\"" << num(base - zh) << "\" width=\"" << zero_w << "\" height=\"" << num(zh)
       << "\" fill=\"#c44\"/>\n";
    os << "<text x=\"" << left + zero_w / 2 << "\" y=\"" << base + 16 << "\" text-anchor=\"middle\">0</text>\n";
    const int x0 = left + zero_w + gap;
    const std::size_t nb = h.counts.size();
    if (nb > 0) {
        const double bw = static_cast<double>(plot_w) / static_cast<double>(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            const double bh = static_cast<double>(h.counts[b]) * scale;
            os << "<rect x=\"" << num(x0 + bw * static_cast<double>(b)) << "\" y=\"" << num(base - bh)
               << "\" width=\"" << num(bw) << "\" height=\"" << num(bh) << "\" fill=\"#4a6fa5\"/>\n";
        }
        os << "<text x=\"" << x0 << "\" y=\"" << base + 16 << "\">" << num(h.edges.front()) << "</text>\n";
        os << "<text x=\"" << x0 + plot_w << "\" y=\"" << base + 16 << "\" text-anchor=\"end\">"
           << num(h.edges.back()) << "</text>\n";
    }
    os << "<line x1=\"" << left << "\" y1=\"" << base << "\" x2=\"" << x0 + plot_w << "\" y2=\"" << base
       << "\" stroke=\"#000\"/>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace bvs::svg
