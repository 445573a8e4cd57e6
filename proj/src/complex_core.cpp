#include "schwarzlab/complex_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace swz {

// ---- AnalyticModel ----------------------------------------------------------

AnalyticModel AnalyticModel::series(cx center, double radius, std::vector<cx> coeff) {
    if (!(radius > 0)) throw error("AnalyticModel: radius must be positive");
    for (cx c : coeff)
        if (!finite(c)) throw error("AnalyticModel: non-finite series coefficient");
    AnalyticModel m;
    m.kind_ = Kind::series;
    m.center_ = center;
    m.radius_ = radius;
    m.coeff_ = std::move(coeff);
    if (m.coeff_.empty()) m.coeff_.push_back(cx{0.0});
    return m;
}

AnalyticModel AnalyticModel::black_box(cx center, double radius,
                                       std::function<cx(cx)> f) {
    if (!(radius > 0)) throw error("AnalyticModel: radius must be positive");
    if (!f) throw error("AnalyticModel: empty evaluator");
    AnalyticModel m;
    m.kind_ = Kind::black_box;
    m.center_ = center;
    m.radius_ = radius;
    m.eval_ = std::move(f);
    return m;
}

cx AnalyticModel::operator()(cx z) const {
    double d = std::abs(z - center_);
    if (d > radius_ * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "evaluation outside declared disk: |z-center| = " << d
           << " > radius = " << radius_;
        throw eval_domain_error(os.str(), z);
    }
    if (kind_ == Kind::series) {
        cx u = z - center_;
        cx v{0.0};
        for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it) v = v * u + *it;
        return v;
    }
    return eval_(z);
}

const std::vector<cx>& AnalyticModel::coefficients() const {
    if (kind_ != Kind::series) throw error("coefficients(): not a series model");
    return coeff_;
}

int AnalyticModel::truncation_order() const {
    return kind_ == Kind::series ? static_cast<int>(coeff_.size()) - 1 : -1;
}

AnalyticModel AnalyticModel::derivative() const {
    if (kind_ == Kind::series) {
        std::vector<cx> d;
        for (size_t j = 1; j < coeff_.size(); ++j)
            d.push_back(static_cast<double>(j) * coeff_[j]);
        if (d.empty()) d.push_back(cx{0.0});
        return series(center_, radius_, std::move(d));
    }
    AnalyticModel base = *this;
    return black_box(center_, radius_, [base](cx z) {
        double margin = base.radius_ * (1.0 + 1e-9) - std::abs(z - base.center_);
        if (margin <= 1e-10)
            throw eval_domain_error("derivative stencil has no room at the boundary", z);
        double h = std::min(1e-4 * std::max(1.0, base.radius_), margin / 2.5);
        cx hh{h, 0.0};
        cx v = (base(z - 2.0 * hh) - 8.0 * base(z - hh) + 8.0 * base(z + hh) -
                base(z + 2.0 * hh)) /
               (12.0 * h);
        return v;
    });
}

AnalyticModel AnalyticModel::shifted(cx delta) const {
    if (kind_ == Kind::series) {
        // f(z+delta) has the same expansion around center-delta
        return series(center_ - delta, radius_, coeff_);
    }
    AnalyticModel base = *this;
    return black_box(center_ - delta, radius_,
                     [base, delta](cx z) { return base(z + delta); });
}

// ---- Circle / MonicPoly / Path ---------------------------------------------

Circle::Circle(cx c, double r, int samples) : center(c), radius(r), n(samples) {
    if (!(r > 0)) throw error("Circle: radius must be positive");
    if (n < 16) throw error("Circle: at least 16 samples required");
}

cx Circle::point(int j) const {
    double t = 2.0 * pi * j / n;
    return center + radius * cx{std::cos(t), std::sin(t)};
}

cx MonicPoly::eval(cx w) const {
    cx v{1.0};
    for (int j = degree() - 1; j >= 0; --j) v = v * w + a[j];
    return v;
}

cx MonicPoly::deriv(cx w) const {
    int k = degree();
    cx v{static_cast<double>(k)};
    for (int j = k - 1; j >= 1; --j) v = v * w + static_cast<double>(j) * a[j];
    return v;
}

Path::Path(std::vector<cx> waypoints, bool is_closed)
    : pts(std::move(waypoints)), closed(is_closed) {
    if (pts.size() < 2) throw error("Path: need at least two waypoints");
    for (size_t i = 1; i < pts.size(); ++i)
        if (pts[i] == pts[i - 1]) throw error("Path: consecutive waypoints coincide");
    if (closed) {
        double scale = 0.0;
        for (cx p : pts) scale = std::max(scale, std::abs(p));
        if (std::abs(pts.front() - pts.back()) > 1e-9 * std::max(1.0, scale))
            throw error("Path: closed path must end at its first waypoint");
    }
}

namespace core {

// ---- quadrature -------------------------------------------------------------

cx contour_integrate(const std::function<cx(cx)>& f, const Circle& c) {
    // (1/2pi i) \oint f dz = (1/N) sum f(z_j) (z_j - center) on equispaced samples
    cx acc{0.0};
    for (int j = 0; j < c.n; ++j) {
        cx z = c.point(j);
        cx v = f(z);
        if (!finite(v)) {
            std::ostringstream os;
            os << "non-finite integrand at sample " << j << " (z = " << z.real() << "+"
               << z.imag() << "i)";
            throw quadrature_failure(os.str(), z);
        }
        acc += v * (z - c.center);
    }
    return acc / static_cast<double>(c.n);
}

static void check_contour_clear(const std::function<cx(cx)>& f, const Circle& c) {
    double min_abs = std::numeric_limits<double>::infinity();
    cx where{};
    for (int j = 0; j < c.n; ++j) {
        cx z = c.point(j);
        cx v = f(z);
        if (!finite(v)) {
            std::ostringstream os;
            os << "non-finite value at sample " << j;
            throw quadrature_failure(os.str(), z);
        }
        double a = std::abs(v);
        if (a < min_abs) {
            min_abs = a;
            where = z;
        }
    }
    if (min_abs <= 1e-10) {
        std::ostringstream os;
        os << "contour passes through a zero: min |f| = " << min_abs;
        throw contour_through_zero(os.str(), min_abs, where);
    }
}

int count_zeros(const std::function<cx(cx)>& f, const std::function<cx(cx)>& df,
                const Circle& c) {
    int n = c.n;
    while (true) {
        Circle cc{c.center, c.radius, n};
        check_contour_clear(f, cc);
        cx I = contour_integrate([&](cx z) { return df(z) / f(z); }, cc);
        double r = std::round(I.real());
        if (std::abs(I - cx{r, 0.0}) <= 0.1) return static_cast<int>(r);
        if (n >= 16384) {
            std::ostringstream os;
            os << "argument-principle value " << I.real() << "+" << I.imag()
               << "i not within 0.1 of an integer at " << n << " samples";
            throw resolution_error(os.str());
        }
        n *= 2;
    }
}

std::vector<cx> power_sums(const std::function<cx(cx)>& f,
                           const std::function<cx(cx)>& df, const Circle& c,
                           int m_max) {
    check_contour_clear(f, c);
    std::vector<cx> s(m_max, cx{0.0});
    for (int j = 0; j < c.n; ++j) {
        cx z = c.point(j);
        cx logd = df(z) / f(z) * (z - c.center);
        cx zp = z;
        for (int m = 1; m <= m_max; ++m) {
            s[m - 1] += zp * logd;
            zp *= z;
        }
    }
    for (auto& v : s) v /= static_cast<double>(c.n);
    return s;
}

MonicPoly newton_to_monic(const std::vector<cx>& s, int k) {
    if (static_cast<int>(s.size()) < k)
        throw error("newton_to_monic: need at least k power sums");
    std::vector<cx> e(k + 1, cx{0.0});
    e[0] = 1.0;
    for (int m = 1; m <= k; ++m) {
        cx acc{0.0};
        double sign = 1.0;
        for (int i = 1; i <= m; ++i) {
            acc += sign * e[m - i] * s[i - 1];
            sign = -sign;
        }
        e[m] = acc / static_cast<double>(m);
    }
    MonicPoly p;
    p.a.assign(k, cx{0.0});
    double sign = -1.0;
    for (int j = 1; j <= k; ++j) {
        p.a[k - j] = sign * e[j];
        sign = -sign;
    }
    return p;
}

cx discriminant(const MonicPoly& p) {
    int k = p.degree();
    if (k < 1) throw error("discriminant: degree must be >= 1");
    if (k == 1) return cx{1.0};
    // Sylvester matrix of p (degree k, monic) and p' (degree k-1)
    int n = 2 * k - 1;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    std::vector<cx> F(k + 1);
    F[0] = 1.0;
    for (int j = 0; j < k; ++j) F[j + 1] = p.a[k - 1 - j];
    std::vector<cx> G(k);
    G[0] = static_cast<double>(k);
    for (int j = 1; j < k; ++j) G[j] = static_cast<double>(k - j) * p.a[k - j];
    for (int i = 0; i < k - 1; ++i)
        for (int j = 0; j <= k; ++j) M(i, i + j) = F[j];
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) M(k - 1 + i, i + j) = G[j];
    cx res = M.determinant();
    int half = (k * (k - 1) / 2) % 2;
    return half ? -res : res;
}

std::vector<cx> monic_roots(const MonicPoly& p) {
    int k = p.degree();
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(k, k);
    for (int i = 0; i < k; ++i) C(i, k - 1) = -p.a[i];
    for (int i = 1; i < k; ++i) C(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<cx> out;
    for (int i = 0; i < k; ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

cx continue_root(const std::function<MonicPoly(cx)>& pencil, cx z0, cx w0,
                 const Path& path) {
    {
        MonicPoly p = pencil(z0);
        if (std::abs(p.eval(w0)) > 1e-6 * (1.0 + std::abs(w0)))
            throw precondition_error("continue_root: (z0, w0) is not a root");
        if (std::abs(path.pts.front() - z0) > 1e-9 * (1.0 + std::abs(z0)))
            throw precondition_error("continue_root: path does not start at z0");
    }
    cx z = z0, w = w0;
    bool have_prev = false;
    cx zp{}, wp{};
    for (size_t seg = 0; seg + 1 < path.pts.size(); ++seg) {
        cx u = path.pts[seg], v = path.pts[seg + 1];
        double seglen = std::abs(v - u);
        double step = seglen / 16.0;
        double t = 0.0;
        while (t < seglen * (1.0 - 1e-12)) {
            double h = std::min(step, seglen - t);
            cx znew = u + (v - u) * ((t + h) / seglen);
            cx wpred = w;
            if (have_prev && std::abs(z - zp) > 0)
                wpred = w + (w - wp) / (z - zp) * (znew - z);
            MonicPoly P = pencil(znew);
            cx wc = wpred;
            bool ok = false;
            for (int it = 0; it < 5; ++it) {
                cx pv = P.eval(wc);
                cx dv = P.deriv(wc);
                if (std::abs(dv) < 1e-14) break;
                cx delta = pv / dv;
                wc -= delta;
                if (std::abs(delta) <= 1e-13 * (1.0 + std::abs(wc))) {
                    ok = true;
                    break;
                }
            }
            if (ok) {
                // corrector must stay close to the predictor, otherwise we may
                // have hopped onto a neighboring sheet
                if (std::abs(wc - wpred) > 0.1 * (1.0 + std::abs(w))) ok = false;
                if (ok && std::abs(P.deriv(wc)) < 1e-8)
                    throw near_branch_point(
                        "continue_root: branches merge (|dP/dw| below tolerance)", znew);
            }
            if (!ok) {
                step *= 0.5;
                if (step < 1e-6)
                    throw near_branch_point(
                        "continue_root: step floor reached (branch point nearby)", znew);
                continue;
            }
            zp = z;
            wp = w;
            have_prev = true;
            z = znew;
            w = wc;
            t += h;
        }
    }
    return w;
}

int winding_number(const std::vector<cx>& curve, cx around) {
    if (curve.size() < 3) throw error("winding_number: degenerate curve");
    double total = 0.0;
    for (size_t i = 0; i + 1 < curve.size(); ++i) {
        cx a = curve[i] - around, b = curve[i + 1] - around;
        double ma = std::abs(a), mb = std::abs(b);
        if (ma < 1e-13 || mb < 1e-13)
            throw contour_through_zero("winding_number: curve passes through the point",
                                       std::min(ma, mb), around);
        total += std::arg(b / a);
    }
    double turns = total / (2.0 * pi);
    double r = std::round(turns);
    if (std::abs(turns - r) > 0.1) {
        std::ostringstream os;
        os << "winding_number: angle sum " << turns << " not within 0.1 of an integer";
        throw resolution_error(os.str());
    }
    return static_cast<int>(r);
}

}  // namespace core
}  // namespace swz
