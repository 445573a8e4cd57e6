#include "schwarzlab/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "schwarzlab/errors.hpp"

namespace swz::io {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

SvgSketch::SvgSketch(double width, double height) : width_(width), height_(height) {}

void SvgSketch::polyline(const std::vector<cx>& pts, const std::string& color,
                         double stroke_width, bool closed) {
    if (pts.empty()) throw input_error("svg polyline: no points");
    polys_.push_back({pts, color, stroke_width, closed});
}

void SvgSketch::dot(cx center, double radius_px, const std::string& color) {
    dots_.push_back({center, radius_px, color});
}

void SvgSketch::label(cx anchor, const std::string& text) {
    labels_.push_back({anchor, text});
}

std::string SvgSketch::render() const {
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    auto grow = [&](cx z) {
        lo_x = std::min(lo_x, z.real());
        hi_x = std::max(hi_x, z.real());
        lo_y = std::min(lo_y, z.imag());
        hi_y = std::max(hi_y, z.imag());
    };
    for (const Poly& p : polys_)
        for (cx z : p.pts) grow(z);
    for (const Dot& d : dots_) grow(d.center);
    for (const Label& l : labels_) grow(l.anchor);
    if (lo_x > hi_x) {
        lo_x = lo_y = -1.0;
        hi_x = hi_y = 1.0;
    }
    double span_x = std::max(hi_x - lo_x, 1e-9);
    double span_y = std::max(hi_y - lo_y, 1e-9);
    const double margin = 40.0;
    double scale = std::min((width_ - 2 * margin) / span_x, (height_ - 2 * margin) / span_y);
    // y grows downward in SVG
    auto X = [&](cx z) { return margin + (z.real() - lo_x) * scale; };
    auto Y = [&](cx z) { return height_ - margin - (z.imag() - lo_y) * scale; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_)
        << "\" height=\"" << num(height_) << "\" viewBox=\"0 0 " << num(width_) << ' '
        << num(height_) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const Poly& p : polys_) {
        out << (p.closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << p.color
            << "\" stroke-width=\"" << num(p.width) << "\" points=\"";
        for (size_t i = 0; i < p.pts.size(); ++i)
            out << (i ? " " : "") << num(X(p.pts[i])) << ',' << num(Y(p.pts[i]));
        out << "\"/>\n";
    }
    for (const Dot& d : dots_) {
        out << "<circle cx=\"" << num(X(d.center)) << "\" cy=\"" << num(Y(d.center))
            << "\" r=\"" << num(d.radius) << "\" fill=\"" << d.color << "\"/>\n";
    }
    for (const Label& l : labels_) {
        out << "<text x=\"" << num(X(l.anchor) + 6.0) << "\" y=\"" << num(Y(l.anchor) - 6.0)
            << "\" font-family=\"monospace\" font-size=\"16\">" << escape(l.text)
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void SvgSketch::write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open for writing: " + path.string());
    out << render();
}

}  // namespace swz::io
