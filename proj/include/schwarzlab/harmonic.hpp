#pragma once

#include "schwarzlab/schwarz.hpp"

#include <functional>
#include <vector>

namespace swz {

// Finite sums u(z) = sum c_n Im(z^n), n = 1..N, on the upper half-disk.
// The basis is odd under conjugation, so u vanishes identically on the real
// diameter and the odd reflection is the same formula on the full disk.
// Positivity on the open upper half-disk is certified on a 200x100 polar grid
// at construction; ops that require a positive function consult positive().
class HalfDiskHarmonic {
public:
    static HalfDiskHarmonic from_coefficients(std::vector<double> c);

    double operator()(cx z) const;
    // exact normal derivative on the diameter: sum c_n n x^{n-1}
    double dy_on_diameter(double x) const;

    const std::vector<double>& coefficients() const { return c_; }
    bool positive() const { return grid_min_ > 0.0; }
    double certified_min() const { return grid_min_; }

private:
    HalfDiskHarmonic() = default;
    std::vector<double> c_;
    double grid_min_ = 0.0;
};

// The boundary ratio h = u*_y / v*_y on an interval of the diameter together
// with a polynomial extension r fitted on Chebyshev-spaced samples.
struct RatioModel {
    double x_lo = 0.0;
    double x_hi = 0.0;
    std::vector<double> xs;  // requested boundary samples
    std::vector<double> h;   // ratio values at xs
    std::vector<double> b;   // fitted real coefficients, constant first
    double fit_residual = 0.0;  // held-out residual of the fit

    double eval(double x) const;
    cx eval(cx z) const;
};

struct HarnackReport {
    double c_low = 0.0;
    double c_high = 0.0;
    bool pass = false;
    double slope = 0.0;  // extrapolated v(x0, y)/y as y -> 0
};

// Transplant of a harmonic pair to a cusp domain: U = u o T^{-1},
// V = v o T^{-1}, A = a o T^{-1}, R = r o T^{-1} on Omega = T(upper half-disk).
struct CuspTransplant {
    std::function<double(cx)> U;
    std::function<double(cx)> V;
    AnalyticModel A;
    AnalyticModel R;
    BoundaryArc arc;
    std::vector<cx> omega_samples;
    double ratio_residual = 0.0;  // max over arc samples of |U/V - |A|^2|
};

namespace harm {

// odd extension across the diameter, valid on the full disk
std::function<double(cx)> reflect_odd(const HalfDiskHarmonic& u);

// certifies c*y/(2-y) <= v(x0, y) <= c*(2-y)/y on the grid and extrapolates
// the vertical difference quotient at the foot point
HarnackReport harnack_check(const HalfDiskHarmonic& v, double x0,
                            const std::vector<double>& ys);

RatioModel normal_derivative_ratio(const HalfDiskHarmonic& u, const HalfDiskHarmonic& v,
                                   const std::vector<double>& gamma_samples);

// a with |a|^2 = r on the interval, analytic on a neighborhood, a(mid) > 0
AnalyticModel analytic_sqrt_factor(const RatioModel& r);

// R = r o phi^{-1} on the image side; phi conformal with the arc as the image
// of the validity interval
AnalyticModel build_R(const RatioModel& r, const AnalyticModel& phi, const BoundaryArc& arc);

// S(z) = (1/z) R(A^{-1}(z)) as a Schwarz candidate for the image arc A(arc)
SchwarzCandidate uv_schwarz(const AnalyticModel& R, const AnalyticModel& A,
                            const BoundaryArc& arc);

// classification of the image boundary at A(zeta0) through the induced
// Schwarz candidate; degenerate base points are reported, not thrown
ClassificationReport uv_classify(const AnalyticModel& R, const AnalyticModel& A,
                                 const BoundaryArc& arc, cx zeta0,
                                 const std::vector<cx>& omega_samples);

CuspTransplant uv_cusp_example(const AnalyticModel& T, const HalfDiskHarmonic& u,
                               const HalfDiskHarmonic& v);

}  // namespace harm
}  // namespace swz
