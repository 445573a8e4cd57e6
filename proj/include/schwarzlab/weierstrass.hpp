#pragma once

#include "schwarzlab/schwarz.hpp"

#include <optional>

namespace swz {

// holomorphic function of two variables on a bidisk, with a w-derivative
class BivariateModel {
 public:
    using Fn = std::function<cx(cx, cx)>;

    static BivariateModel from_function(cx z_center, double z_radius, cx w_center,
                                        double w_radius, Fn f);
    static BivariateModel from_function_dw(cx z_center, double z_radius, cx w_center,
                                           double w_radius, Fn f, Fn fw);

    cx operator()(cx z, cx w) const;
    cx dw(cx z, cx w) const;

    cx z_center() const { return zc_; }
    double z_radius() const { return zr_; }
    cx w_center() const { return wc_; }
    double w_radius() const { return wr_; }

 private:
    BivariateModel() = default;
    cx zc_{}, wc_{};
    double zr_ = 0.0, wr_ = 0.0;
    Fn f_, fw_;
};

// monic polynomial family P(z, w) = w^k + a_{k-1}(z) w^{k-1} + ... + a_0(z),
// known at grid nodes and interpolated barycentrically in between; an exact
// coefficient evaluator bypasses interpolation when the coefficients are
// available in closed form (interpolation cannot follow poles inside the grid)
class MonicPolyPencil {
 public:
    using CoeffFn = std::function<std::vector<cx>(cx)>;

    static MonicPolyPencil from_nodes(std::vector<cx> grid,
                                      std::vector<std::vector<cx>> coeff, double rho);
    static MonicPolyPencil from_exact(std::vector<cx> grid, int k, CoeffFn exact,
                                      double rho);

    MonicPoly slice(cx z) const;
    int degree() const { return k_; }
    double rho() const { return rho_; }
    const std::vector<cx>& grid() const { return grid_; }
    const std::vector<std::vector<cx>>& coefficient_samples() const { return coeff_; }
    bool has_exact() const { return static_cast<bool>(exact_); }

 private:
    int k_ = 0;
    std::vector<cx> grid_;
    std::vector<std::vector<cx>> coeff_;  // per node, a[0..k-1]
    std::vector<cx> bary_;                // barycentric weights, common scale removed
    double rho_ = 0.0;
    CoeffFn exact_;
};

struct DiscriminantCluster {
    cx center;
    int count = 0;      // argument-principle zero count near the center
    double radius = 0;  // refinement accuracy estimate
};

struct DiscriminantField {
    std::vector<cx> values;  // discriminant at each grid node
    std::vector<DiscriminantCluster> clusters;
    bool identically_zero = false;
};

struct MatchRun {
    int first = 0, last = 0, branch = 0;
};

// per boundary sample: labeled branch values of the pencil and the set of
// branches agreeing with conj(zeta) within tol; labels follow continuation
struct MatchTable {
    std::vector<cx> zeta;
    std::vector<std::vector<cx>> branch_values;
    std::vector<std::vector<int>> matched;
    std::vector<char> excluded;
    std::vector<int> relabelled_at;  // samples where continuation had to restart
    std::vector<MatchRun> runs;
    double tol = 0.0;
};

struct ArcClassification {
    MatchRun run;
    cx base;
    ClassificationReport report;
};

namespace weier {

// order of vanishing of w -> psi(0, w), stabilized over shrinking radii
int order_in_w(const BivariateModel& psi);

std::pair<MonicPolyPencil, BivariateModel> weierstrass_prepare(const BivariateModel& psi,
                                                               const std::vector<cx>& grid,
                                                               double rho);

DiscriminantField discriminant_field(const MonicPolyPencil& pencil);

MonicPoly squarefree_part(const MonicPoly& p);

// permutation of the base roots induced by continuation along the loop:
// result[i] = index of the base root reached from base_roots[i]
std::vector<int> monodromy(const MonicPolyPencil& pencil, const Path& loop,
                           const std::vector<cx>& base_roots);

MatchTable boundary_root_match(const MonicPolyPencil& pencil, const BoundaryArc& arc,
                               double tol);

std::vector<ArcClassification> classify_arcs(const MatchTable& match, const BoundaryArc& arc,
                                             const MonicPolyPencil& pencil,
                                             const std::vector<cx>& omega_samples = {});

}  // namespace weier
}  // namespace swz
