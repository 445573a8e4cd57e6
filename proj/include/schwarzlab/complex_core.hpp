#pragma once

#include "schwarzlab/types.hpp"

namespace swz::core {

// (1/2\pi i) \oint f(z) dz by the trapezoidal rule; spectrally accurate for f
// analytic in an annulus around the contour.
cx contour_integrate(const std::function<cx(cx)>& f, const Circle& c);

// argument-principle count of zeros of f inside c. Doubles the sample count on
// a failed integer check (up to 16384) before giving up.
int count_zeros(const std::function<cx(cx)>& f, const std::function<cx(cx)>& df,
                const Circle& c);

// s_m = sum of w^m over the zeros of f inside c, m = 1..m_max
std::vector<cx> power_sums(const std::function<cx(cx)>& f,
                           const std::function<cx(cx)>& df, const Circle& c,
                           int m_max);

// unique monic degree-k polynomial with the given root power sums
MonicPoly newton_to_monic(const std::vector<cx>& s, int k);

// disc(p) = (-1)^{k(k-1)/2} Res(p, p') for monic p
cx discriminant(const MonicPoly& p);

// analytic continuation of the root branch through (z0, w0) to the path end.
// Linear predictor, Newton corrector (<= 5 iterations), step halving with an
// absolute floor of 1e-6.
cx continue_root(const std::function<MonicPoly(cx)>& pencil, cx z0, cx w0,
                 const Path& path);

// roots of a monic polynomial via the companion matrix (Eigen), unordered
std::vector<cx> monic_roots(const MonicPoly& p);

// winding number of a closed sampled curve around a point (rounded angle sum);
// throws resolution_error if the sum is farther than 0.1 from an integer
int winding_number(const std::vector<cx>& curve, cx around);

}  // namespace swz::core
