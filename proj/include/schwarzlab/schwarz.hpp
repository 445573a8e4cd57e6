#pragma once

#include "schwarzlab/complex_core.hpp"

#include <optional>
#include <string>

namespace swz {

// oriented sampled Jordan arc with a designated base point
struct BoundaryArc {
    std::vector<cx> samples;
    int base_index = 0;
    bool positively_oriented = true;
    std::optional<AnalyticModel> parametrization;

    static BoundaryArc from_samples(std::vector<cx> s, int base_index,
                                    bool positively_oriented = true);

    cx base() const { return samples[base_index]; }
    int size() const { return static_cast<int>(samples.size()); }
    double spacing_near(int i) const;
    cx unit_tangent(int i) const;
    double diameter() const;
};

enum class ArcSide { left, right };

// S together with which side of the arc it lives on and an optional factor,
// so the identity under test is S(zeta) = conj(zeta) * factor(zeta)
struct SchwarzCandidate {
    AnalyticModel S;
    ArcSide omega_side = ArcSide::left;
    std::optional<AnalyticModel> factor;
    // when set, boundary values are taken as Omega-side offset limits with
    // Richardson extrapolation instead of direct evaluation on the arc
    bool boundary_limits = false;
};

enum class CaseLabel {
    regular_analytic,  // (1)
    two_sided_arc,     // (2a)
    tangent_pair,      // (2b)
    cusp,              // (2c)
    inconclusive
};

std::string to_string(CaseLabel label);

struct UnivalenceEvidence {
    bool tested = false;
    bool univalent = false;
    bool collision = false;
    cx pair_a{}, pair_b{};  // colliding preimages, when collision
    int winding = 1;        // offending winding, when != 1
    cx winding_at{};
    std::string note;
};

struct ClassificationReport {
    CaseLabel label = CaseLabel::inconclusive;
    double residual = 0.0;
    UnivalenceEvidence phi1, phi2;
    bool coverage = false;           // Phi2 image + (-eps,eps) covers a punctured disk
    double phi_identity_residual = 0.0;  // max |Phi2^2 - Phi1| at test points
    double two_sided_fraction = 0.0;
    int omega_components = 1;
    double turn_angle = 0.0;  // tangent turn at the base point, in [0, pi]
    std::vector<std::string> notes;
};

namespace schwarz {

// max_i |S(zeta_i) - conj(zeta_i) * factor(zeta_i)|
double schwarz_verify(const SchwarzCandidate& cand, const BoundaryArc& arc);

// S_t(z) = S(z + zeta0) - conj(zeta0) * z^n
AnalyticModel recenter_monomial(const AnalyticModel& S, cx zeta0, int n);

// (f1)_t(z) = f1(z+zeta0) - conj(zeta0) f2(z+zeta0), (f2)_t(z) = f2(z+zeta0)
std::pair<AnalyticModel, AnalyticModel> recenter_pair(const AnalyticModel& f1,
                                                      const AnalyticModel& f2, cx zeta0);

struct LimitReport {
    bool converges = false;
    std::vector<double> terminal_ratios;
    std::vector<bool> partial;  // ray left the domain of S before the cutoff
};

// samples |S(z)/z^n| along rays shrinking geometrically toward 0
LimitReport monomial_limit_diagnostic(const AnalyticModel& S, int n,
                                      const std::vector<Path>& rays);

struct BoundCheckReport {
    bool boundary_ok = false;
    bool interior_ok = false;
    double boundary_margin = 0.0;  // max(|f| - 1) over boundary samples != zeta0
    double interior_margin = 0.0;  // max(|f| |z-zeta0|^beta / alpha - 1)
};

BoundCheckReport pl_bound_check(const AnalyticModel& f, const BoundaryArc& boundary,
                                const std::vector<cx>& interior, double alpha,
                                double beta, cx zeta0);

struct CuspDomain {
    BoundaryArc arc;
    AnalyticModel S;  // A o T^{-1}, black-box on the closure of Omega
    std::vector<cx> omega_samples;
    AnalyticModel T;
    std::function<cx(cx)> invert;  // T^{-1} on the closure of Omega
    double eta = 0.0;
};

// Omega = T({|z| < eta, Im z > 0}) for T with a double zero at 0, univalent on
// the closed upper half-disk; throws rejection with a witness otherwise
CuspDomain build_cusp_domain(const AnalyticModel& T, double eta, int n_samples);

struct UnivalenceOptions {
    bool pairwise_separation = true;
    int min_probes = 20;
    unsigned seed = 20260822;
};

// dual certificate on a closed region: boundary-image separation after
// refinement AND winding 1 around interior image probes
UnivalenceEvidence check_univalent(const std::function<cx(cx)>& f,
                                   const std::vector<cx>& region_boundary,
                                   const UnivalenceOptions& opt = {});
UnivalenceEvidence check_univalent(const std::function<cx(cx)>& f, const Circle& c,
                                   const UnivalenceOptions& opt = {});

// Sakai case classification at the arc's base point
ClassificationReport classify_boundary(const SchwarzCandidate& cand,
                                       const BoundaryArc& arc,
                                       const std::vector<cx>& omega_samples);

}  // namespace schwarz
}  // namespace swz
