#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace swz {

using cx = std::complex<double>;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a sampled integrand came back NaN/Inf; `sample` names the offending point
struct quadrature_failure : error {
    cx sample;
    quadrature_failure(const std::string& msg, cx s) : error(msg), sample(s) {}
};

// min |f| on the contour fell below the separation threshold
struct contour_through_zero : error {
    double min_abs;
    cx where;
    contour_through_zero(const std::string& msg, double m, cx w)
        : error(msg), min_abs(m), where(w) {}
};

// argument-principle value not within 0.1 of an integer after refinement
struct resolution_error : error {
    using error::error;
};

// root continuation lost its branch (corrector divergence or |dP/dw| collapse)
struct near_branch_point : error {
    cx location;
    near_branch_point(const std::string& msg, cx loc) : error(msg), location(loc) {}
};

// evaluation requested outside a model's declared disk
struct eval_domain_error : error {
    cx at;
    eval_domain_error(const std::string& msg, cx z) : error(msg), at(z) {}
};

// evaluation at a genuine singularity (inner-function atom, pole)
struct singularity_error : error {
    cx at;
    singularity_error(const std::string& msg, cx z) : error(msg), at(z) {}
};

struct degenerate_map_error : error {
    using error::error;
};

// a constructor-level rejection carrying its witness (colliding pair, wrong order, ...)
struct rejection : error {
    cx witness_a{}, witness_b{};
    explicit rejection(const std::string& msg) : error(msg) {}
    rejection(const std::string& msg, cx a, cx b) : error(msg), witness_a(a), witness_b(b) {}
};

struct precondition_error : error {
    using error::error;
};

// shirokov_multiplier on a spec with Blaschke zeros
struct unsupported_support : error {
    using error::error;
};

// analytic square root of a nonpositive ratio
struct factorization_error : error {
    using error::error;
};

// normal-derivative ratio with a vanishing denominator
struct singular_ratio : error {
    double at_x;
    singular_ratio(const std::string& msg, double x) : error(msg), at_x(x) {}
};

// A'(zeta0) = 0 or unstable: the excluded points of the ratio classifier
struct critical_point_error : error {
    cx at;
    critical_point_error(const std::string& msg, cx z) : error(msg), at(z) {}
};

// malformed structured input (CLI / JSON layer)
struct input_error : error {
    using error::error;
};

}  // namespace swz
