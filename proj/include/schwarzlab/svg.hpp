#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "schwarzlab/types.hpp"

namespace swz::io {

// Minimal sketch writer: polylines, dots and labels in problem coordinates,
// fitted to a fixed canvas at write time. Output is plain SVG text with
// fixed-precision coordinates, so identical sketches are byte-identical.
class SvgSketch {
 public:
    SvgSketch(double width = 800.0, double height = 600.0);

    void polyline(const std::vector<cx>& pts, const std::string& color,
                  double stroke_width = 1.5, bool closed = false);
    void dot(cx center, double radius_px, const std::string& color);
    void label(cx anchor, const std::string& text);

    std::string render() const;
    void write(const std::filesystem::path& path) const;

 private:
    struct Poly {
        std::vector<cx> pts;
        std::string color;
        double width;
        bool closed;
    };
    struct Dot {
        cx center;
        double radius;
        std::string color;
    };
    struct Label {
        cx anchor;
        std::string text;
    };

    double width_, height_;
    std::vector<Poly> polys_;
    std::vector<Dot> dots_;
    std::vector<Label> labels_;
};

}  // namespace swz::io
