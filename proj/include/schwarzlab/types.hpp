#pragma once

#include "schwarzlab/errors.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace swz {

inline bool finite(cx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Holomorphic function carried either as a truncated power series or as a
// black-box evaluator with a declared disk of validity. Series evaluation is
// permitted up to radius*(1+1e-9) so boundary work on the closure is legal.
class AnalyticModel {
public:
    enum class Kind { series, black_box };

    static AnalyticModel series(cx center, double radius, std::vector<cx> coeff);
    static AnalyticModel black_box(cx center, double radius, std::function<cx(cx)> f);

    cx operator()(cx z) const;

    Kind kind() const { return kind_; }
    cx center() const { return center_; }
    double radius() const { return radius_; }
    const std::vector<cx>& coefficients() const;
    int truncation_order() const;

    AnalyticModel derivative() const;
    // g(z) = f(z + delta); series keep their coefficients, the center moves
    AnalyticModel shifted(cx delta) const;

private:
    AnalyticModel() = default;
    Kind kind_ = Kind::black_box;
    cx center_{};
    double radius_ = 0;
    std::vector<cx> coeff_;
    std::function<cx(cx)> eval_;
};

// counterclockwise equispaced quadrature contour
struct Circle {
    cx center{};
    double radius = 1.0;
    int n = 256;

    Circle(cx c, double r, int samples = 256);
    cx point(int j) const;
};

// w^k + a[k-1] w^{k-1} + ... + a[0]; leading coefficient implicit
struct MonicPoly {
    std::vector<cx> a;

    int degree() const { return static_cast<int>(a.size()); }
    cx eval(cx w) const;
    cx deriv(cx w) const;
};

// continuation path; closed paths repeat the first waypoint at the end
struct Path {
    std::vector<cx> pts;
    bool closed = false;

    Path(std::vector<cx> waypoints, bool is_closed = false);
};

inline constexpr double pi = std::numbers::pi;

}  // namespace swz
