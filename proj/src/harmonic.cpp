#include "schwarzlab/harmonic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

namespace swz {

HalfDiskHarmonic HalfDiskHarmonic::from_coefficients(std::vector<double> c) {
    if (c.empty() || c.size() > 64) {
        throw input_error("coefficient count must be between 1 and 64");
    }
    HalfDiskHarmonic u;
    u.c_ = std::move(c);
    // positivity certificate on a 200x100 polar grid of the open half-disk
    double min_val = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 200; ++j) {
        double r = (j + 0.5) / 200.0;
        for (int l = 0; l < 100; ++l) {
            double t = pi * (l + 0.5) / 100.0;
            min_val = std::min(min_val, u(r * std::exp(cx(0.0, t))));
        }
    }
    u.grid_min_ = min_val;
    return u;
}

double HalfDiskHarmonic::operator()(cx z) const {
    double acc = 0.0;
    cx p = z;
    for (double cn : c_) {
        acc += cn * p.imag();
        p *= z;
    }
    return acc;
}

double HalfDiskHarmonic::dy_on_diameter(double x) const {
    double acc = 0.0;
    double p = 1.0;
    for (size_t n = 0; n < c_.size(); ++n) {
        acc += c_[n] * static_cast<double>(n + 1) * p;
        p *= x;
    }
    return acc;
}

double RatioModel::eval(double x) const {
    double acc = 0.0;
    for (size_t j = b.size(); j-- > 0;) acc = acc * x + b[j];
    return acc;
}

cx RatioModel::eval(cx z) const {
    cx acc(0.0, 0.0);
    for (size_t j = b.size(); j-- > 0;) acc = acc * z + b[j];
    return acc;
}

namespace harm {

std::function<double(cx)> reflect_odd(const HalfDiskHarmonic& u) {
    // the Im(z^n) basis is already odd across the diameter
    return [u](cx z) { return u(z); };
}

HarnackReport harnack_check(const HalfDiskHarmonic& v, double x0,
                            const std::vector<double>& ys) {
    if (std::abs(x0) >= 1.0) throw input_error("foot point outside the diameter");
    if (ys.empty()) throw input_error("empty Harnack grid");
    for (double y : ys) {
        if (!(y > 0.0) || !(y < 1.0)) throw input_error("Harnack grid must lie in (0,1)");
        if (std::hypot(x0, y) >= 1.0) throw input_error("grid point outside the half-disk");
    }
    if (!v.positive()) {
        throw precondition_error("input is not certified positive on the half-disk");
    }

    HarnackReport rep;
    rep.c_low = std::numeric_limits<double>::infinity();
    rep.c_high = 0.0;
    for (double y : ys) {
        double val = v(cx(x0, y));
        rep.c_low = std::min(rep.c_low, val * (2.0 - y) / y);
        rep.c_high = std::max(rep.c_high, val * y / (2.0 - y));
    }
    // linear extrapolation of v/y from the two smallest grid heights
    std::vector<double> sorted = ys;
    std::sort(sorted.begin(), sorted.end());
    double y1 = sorted[0];
    double s1 = v(cx(x0, y1)) / y1;
    if (sorted.size() >= 2) {
        double y2 = sorted[1];
        double s2 = v(cx(x0, y2)) / y2;
        rep.slope = s1 - (s2 - s1) / (y2 - y1) * y1;
    } else {
        rep.slope = s1;
    }
    rep.pass = rep.c_low > 0.0 && std::isfinite(rep.c_high);
    return rep;
}

namespace {

// least-squares polynomial fit of f on [lo, hi], adaptive in degree until the
// held-out residual target is met; returns coefficients in x, constant first
std::pair<std::vector<double>, double> chebyshev_fit(const std::function<double(double)>& f,
                                                     double lo, double hi, double target) {
    const double m = 0.5 * (lo + hi);
    const double s = 0.5 * (hi - lo);
    if (!(s > 0.0)) throw input_error("degenerate fit interval");

    std::vector<double> best;
    double best_resid = std::numeric_limits<double>::infinity();
    for (int d = 0; d <= 40; ++d) {
        const int n = 2 * (d + 1);
        Eigen::MatrixXd M(n, d + 1);
        Eigen::VectorXd rhs(n);
        double scale = 1.0;
        for (int j = 0; j < n; ++j) {
            double t = std::cos(pi * (j + 0.5) / n);
            double p = 1.0;
            for (int q = 0; q <= d; ++q) {
                M(j, q) = p;
                p *= t;
            }
            rhs(j) = f(m + s * t);
            scale = std::max(scale, std::abs(rhs(j)));
        }
        Eigen::VectorXd a = M.colPivHouseholderQr().solve(rhs);

        // held-out nodes interlace the fit nodes and include the endpoints
        double resid = 0.0;
        for (int j = 0; j <= n; ++j) {
            double t = std::cos(pi * j / n);
            double p = 1.0, val = 0.0;
            for (int q = 0; q <= d; ++q) {
                val += a(q) * p;
                p *= t;
            }
            resid = std::max(resid, std::abs(val - f(m + s * t)));
        }
        if (resid < best_resid) {
            best_resid = resid;
            best.assign(a.data(), a.data() + d + 1);
        }
        if (resid <= target * scale) break;
    }
    if (best.empty()) throw resolution_error("ratio fit produced no candidate");

    // convert from t = (x - m)/s to x by Horner composition
    std::vector<double> bx{best.back()};
    for (size_t j = best.size() - 1; j-- > 0;) {
        std::vector<double> nx(bx.size() + 1, 0.0);
        for (size_t q = 0; q < bx.size(); ++q) {
            nx[q] += bx[q] * (-m / s);
            nx[q + 1] += bx[q] / s;
        }
        nx[0] += best[j];
        bx = std::move(nx);
    }
    return {bx, best_resid};
}

}  // namespace

RatioModel normal_derivative_ratio(const HalfDiskHarmonic& u, const HalfDiskHarmonic& v,
                                   const std::vector<double>& gamma_samples) {
    if (gamma_samples.size() < 2) throw input_error("need at least 2 boundary samples");
    auto ratio_at = [&](double x) {
        double vy = v.dy_on_diameter(x);
        if (!(vy > 1e-12)) {
            throw singular_ratio("denominator normal derivative is not positive", x);
        }
        return u.dy_on_diameter(x) / vy;
    };

    RatioModel r;
    r.x_lo = *std::min_element(gamma_samples.begin(), gamma_samples.end());
    r.x_hi = *std::max_element(gamma_samples.begin(), gamma_samples.end());
    if (!(r.x_hi > r.x_lo)) throw input_error("boundary samples are degenerate");
    r.xs = gamma_samples;
    r.h.reserve(gamma_samples.size());
    for (double x : gamma_samples) r.h.push_back(ratio_at(x));

    auto [bx, resid] = chebyshev_fit(ratio_at, r.x_lo, r.x_hi, 1e-8);
    r.b = std::move(bx);
    r.fit_residual = resid;
    if (r.fit_residual > 1e-6) {
        throw resolution_error("ratio fit failed to meet the held-out tolerance");
    }
    return r;
}

AnalyticModel analytic_sqrt_factor(const RatioModel& r) {
    const double mid = 0.5 * (r.x_lo + r.x_hi);
    double rad = 0.5 * (r.x_hi - r.x_lo);
    if (!(rad > 0.0)) throw input_error("degenerate validity interval");

    for (int i = 0; i <= 1000; ++i) {
        double x = r.x_lo + (r.x_hi - r.x_lo) * i / 1000.0;
        if (!(r.eval(x) > 0.0)) {
            throw factorization_error("the ratio is not positive on the interval");
        }
    }
    // shrink the disk until the ratio stays in the right half-plane on it
    int shrink = 0;
    for (; shrink < 25; ++shrink) {
        bool ok = true;
        for (int j = 1; j <= 5 && ok; ++j) {
            double rr = rad * j / 5.0;
            for (int l = 0; l < 40 && ok; ++l) {
                cx z = cx(mid, 0.0) + rr * std::exp(cx(0.0, 2.0 * pi * l / 40.0));
                if (r.eval(z).real() <= 0.0) ok = false;
            }
        }
        if (ok) break;
        rad *= 0.8;
    }
    if (shrink == 25) {
        throw factorization_error("no neighborhood keeps the ratio off the branch cut");
    }
    RatioModel rc = r;
    return AnalyticModel::black_box(cx(mid, 0.0), rad, [rc](cx z) {
        return std::exp(0.5 * std::log(rc.eval(z)));
    });
}

namespace {

struct InverseMap {
    std::shared_ptr<std::vector<std::pair<cx, cx>>> table;  // (preimage, image)
    AnalyticModel f, df;

    cx operator()(cx z) const {
        cx w0;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [w, img] : *table) {
            double d = std::abs(img - z);
            if (d < best) {
                best = d;
                w0 = w;
            }
        }
        const double tol = 1e-13 * std::max(1.0, std::abs(z));
        cx w = w0;
        double r = std::abs(f(w) - z);
        for (int it = 0; it < 60 && r > tol; ++it) {
            cx d = df(w);
            if (std::abs(d) < 1e-14) break;
            cx step = (f(w) - z) / d;
            cx wn = w - step;
            double rn;
            try {
                rn = std::abs(f(wn) - z);
            } catch (const error&) {
                rn = std::numeric_limits<double>::infinity();
            }
            if (rn > r) {
                wn = w - 0.5 * step;
                try {
                    rn = std::abs(f(wn) - z);
                } catch (const error&) {
                    break;
                }
                if (rn > r) break;
            }
            w = wn;
            r = rn;
        }
        if (r > tol) throw eval_domain_error("conformal inversion failed", z);
        return w;
    }
};

}  // namespace

AnalyticModel build_R(const RatioModel& r, const AnalyticModel& phi, const BoundaryArc& arc) {
    const double s = 0.5 * (r.x_hi - r.x_lo);
    auto table = std::make_shared<std::vector<std::pair<cx, cx>>>();
    for (int i = 0; i <= 400; ++i) {
        double x = r.x_lo + (r.x_hi - r.x_lo) * i / 400.0;
        for (double off : {0.0, 0.05 * s, 0.15 * s}) {
            cx w(x, off);
            try {
                table->emplace_back(w, phi(w));
            } catch (const error&) {
            }
        }
    }
    if (table->empty()) throw input_error("the map covers none of the validity interval");

    InverseMap inv{table, phi, phi.derivative()};
    for (size_t i = 0; i < arc.samples.size(); i += std::max<size_t>(1, arc.samples.size() / 32)) {
        inv(arc.samples[i]);  // inversion must reach the arc; throws with the sample
    }

    cx center = phi(cx(0.5 * (r.x_lo + r.x_hi), 0.0));
    double reach = 0.0;
    for (const auto& [w, img] : *table) reach = std::max(reach, std::abs(img - center));
    for (const cx& p : arc.samples) reach = std::max(reach, std::abs(p - center));

    RatioModel rc = r;
    return AnalyticModel::black_box(center, 1.5 * reach + 1e-9, [rc, inv](cx z) {
        return rc.eval(inv(z));
    });
}

SchwarzCandidate uv_schwarz(const AnalyticModel& R, const AnalyticModel& A,
                            const BoundaryArc& arc) {
    const cx base = arc.base();
    const int n = arc.size();

    std::vector<cx> image(n);
    for (int i = 0; i < n; ++i) image[i] = A(arc.samples[i]);
    double img_diam = 0.0;
    cx img_mean(0.0, 0.0);
    for (const cx& w : image) img_mean += w;
    img_mean /= static_cast<double>(n);
    for (const cx& w : image) img_diam = std::max(img_diam, 2.0 * std::abs(w - img_mean));

    cx dA = A.derivative()(base);
    double deriv_scale = std::max(1.0, img_diam / std::max(arc.diameter(), 1e-300));
    if (std::abs(dA) <= 1e-8 * deriv_scale) {
        throw critical_point_error("the factor map has a critical point at the base", base);
    }

    // local image spacing; distant domain points whose images land closer than
    // half of it indicate a fold straddled by the sampling
    std::vector<double> istep(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (i > 0) istep[i] = std::max(istep[i], std::abs(image[i] - image[i - 1]));
        if (i + 1 < n) istep[i] = std::max(istep[i], std::abs(image[i + 1] - image[i]));
    }
    const double dom_diam = arc.diameter();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(arc.samples[i] - arc.samples[j]) < 0.01 * dom_diam) continue;
            double thresh = std::max(1e-9 * std::max(img_diam, 1e-300),
                                     0.5 * std::min(istep[i], istep[j]));
            if (std::abs(image[i] - image[j]) <= thresh) {
                throw rejection("the factor map identifies two arc points",
                                arc.samples[i], arc.samples[j]);
            }
        }
    }

    double min_mod = std::numeric_limits<double>::infinity();
    for (const cx& w : image) min_mod = std::min(min_mod, std::abs(w));
    if (min_mod <= 1e-9 * std::max(1.0, img_diam)) {
        throw eval_domain_error("zero lies in the closure of the image domain", cx(0.0, 0.0));
    }

    auto table = std::make_shared<std::vector<std::pair<cx, cx>>>();
    table->reserve(n);
    for (int i = 0; i < n; ++i) table->emplace_back(arc.samples[i], image[i]);
    InverseMap invA{table, A, A.derivative()};

    AnalyticModel Rc = R;
    auto eval = [Rc, invA](cx z) -> cx {
        if (std::abs(z) < 1e-13) {
            throw eval_domain_error("the induced Schwarz function has a pole at 0", z);
        }
        return Rc(invA(z)) / z;
    };
    AnalyticModel S = AnalyticModel::black_box(A(base), 2.0 * std::max(img_diam, 1e-9) + 1.0,
                                               std::move(eval));
    return SchwarzCandidate{std::move(S), ArcSide::left, std::nullopt, false};
}

ClassificationReport uv_classify(const AnalyticModel& R, const AnalyticModel& A,
                                 const BoundaryArc& arc, cx zeta0,
                                 const std::vector<cx>& omega_samples) {
    // rebase the arc at the requested study point
    int idx = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int i = 0; i < arc.size(); ++i) {
        double d = std::abs(arc.samples[i] - zeta0);
        if (d < bd) {
            bd = d;
            idx = i;
        }
    }
    BoundaryArc based = BoundaryArc::from_samples(arc.samples, idx);
    const cx base = based.base();

    // degeneracy precheck: |A'| along the inward ray must not blow up
    {
        cx tang = based.unit_tangent(idx);
        double eps0 = 3.0 * based.spacing_near(idx);
        auto deriv_at = [&](cx p, double h) -> cx {
            return (A(p + cx(h, 0.0) * tang) - A(p - cx(h, 0.0) * tang)) / (2.0 * h);
        };
        for (cx dir : {cx(0.0, 1.0) * tang, cx(0.0, -1.0) * tang}) {
            int growing = 0;
            bool degenerate = false;
            double prev = -1.0;
            for (int k = 0; k <= 6; ++k) {
                double eps = eps0 * std::pow(0.5, k);
                double mag;
                try {
                    mag = std::abs(deriv_at(base + eps * dir, 0.25 * eps));
                } catch (const error&) {
                    break;
                }
                if (prev > 0.0 && mag > 1.2 * prev) {
                    // three consecutive growth steps settle it; later samples sit
                    // at the resolution floor and cannot retract the verdict
                    if (++growing >= 3) {
                        degenerate = true;
                        break;
                    }
                } else if (prev > 0.0) {
                    growing = 0;
                }
                prev = mag;
            }
            if (degenerate) {
                ClassificationReport rep;
                rep.label = CaseLabel::inconclusive;
                rep.notes.push_back(
                    "the factor map degenerates at the base point; it is an excluded point");
                return rep;
            }
        }
    }

    // the standing assumption: the pair must not be proportional
    {
        double mean = 0.0;
        std::vector<double> mods(based.size());
        for (int i = 0; i < based.size(); ++i) {
            mods[i] = std::norm(A(based.samples[i]));
            mean += mods[i];
        }
        mean /= static_cast<double>(based.size());
        double var = 0.0;
        for (double m : mods) var += (m - mean) * (m - mean);
        var /= static_cast<double>(based.size());
        if (!(mean > 0.0) || var / (mean * mean) < 1e-8) {
            throw precondition_error("the pair is proportional: |A|^2 is constant on the arc");
        }
    }

    std::optional<SchwarzCandidate> cand;
    try {
        cand.emplace(uv_schwarz(R, A, based));
    } catch (const critical_point_error& e) {
        ClassificationReport rep;
        rep.label = CaseLabel::inconclusive;
        rep.notes.push_back(std::string("excluded point: ") + e.what());
        return rep;
    }

    std::vector<cx> image(based.size());
    for (int i = 0; i < based.size(); ++i) image[i] = A(based.samples[i]);
    BoundaryArc image_arc = BoundaryArc::from_samples(image, based.base_index);

    std::vector<cx> image_omega;
    image_omega.reserve(omega_samples.size());
    for (const cx& w : omega_samples) {
        try {
            image_omega.push_back(A(w));
        } catch (const error&) {
        }
    }
    return schwarz::classify_boundary(*cand, image_arc, image_omega);
}

CuspTransplant uv_cusp_example(const AnalyticModel& T, const HalfDiskHarmonic& u,
                               const HalfDiskHarmonic& v) {
    const double eta = 0.25;
    schwarz::CuspDomain dom = schwarz::build_cusp_domain(T, eta, 1201);

    std::vector<double> gamma;
    for (int i = 0; i <= 80; ++i) gamma.push_back(0.9999 * eta * (i - 40) / 40.0);
    RatioModel ratio = normal_derivative_ratio(u, v, gamma);
    AnalyticModel a = analytic_sqrt_factor(ratio);

    auto invert = dom.invert;
    HalfDiskHarmonic uc = u, vc = v;
    auto U = [uc, invert](cx z) { return uc(invert(z)); };
    auto V = [vc, invert](cx z) { return vc(invert(z)); };

    AnalyticModel A = AnalyticModel::black_box(cx(0.0, 0.0), dom.S.radius(),
                                               [a, invert](cx z) { return a(invert(z)); });
    RatioModel rc = ratio;
    AnalyticModel R = AnalyticModel::black_box(cx(0.0, 0.0), dom.S.radius(),
                                               [rc, invert](cx z) { return rc.eval(invert(z)); });

    // boundary limits of U/V along curved vertical approach in the preimage
    AnalyticModel Tc = T;
    double worst = 0.0;
    const double e0 = 1e-3 * eta;
    for (int i = 0; i < dom.arc.size(); ++i) {
        cx w = invert(dom.arc.samples[i]);
        auto q = [&](double eps) {
            cx p = Tc(cx(w.real(), eps));
            return U(p) / V(p);
        };
        double limit = 2.0 * q(e0 / 2.0) - q(e0);
        double target = std::norm(A(dom.arc.samples[i]));
        worst = std::max(worst, std::abs(limit - target));
    }

    CuspTransplant tp{std::move(U), std::move(V), std::move(A), std::move(R),
                      dom.arc, dom.omega_samples, worst};
    return tp;
}

}  // namespace harm
}  // namespace swz
