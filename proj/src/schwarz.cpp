#include "schwarzlab/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

namespace swz {

namespace {

double cross2(cx a, cx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double dist_point_segment(cx p, cx a, cx b) {
    cx ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2,
                          0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

// distance from p to the closed polyline through pts
double dist_to_loop(cx p, const std::vector<cx>& pts) {
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i) {
        d = std::min(d, dist_point_segment(p, pts[i], pts[(i + 1) % pts.size()]));
    }
    return d;
}

double signed_area(const std::vector<cx>& pts) {
    double a = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        a += cross2(pts[i], pts[(i + 1) % pts.size()]);
    }
    return 0.5 * a;
}

double loop_diameter(const std::vector<cx>& pts) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const cx& p : pts) {
        xlo = std::min(xlo, p.real());
        xhi = std::max(xhi, p.real());
        ylo = std::min(ylo, p.imag());
        yhi = std::max(yhi, p.imag());
    }
    return std::hypot(xhi - xlo, yhi - ylo);
}

int winding_or(const std::vector<cx>& loop, cx at, int fallback) {
    try {
        return core::winding_number(loop, at);
    } catch (const error&) {
        return fallback;
    }
}

}  // namespace

BoundaryArc BoundaryArc::from_samples(std::vector<cx> s, int base_index,
                                      bool positively_oriented) {
    if (s.size() < 5) throw input_error("arc needs at least 5 samples");
    if (base_index < 0 || base_index >= static_cast<int>(s.size())) {
        throw input_error("arc base index out of range");
    }
    BoundaryArc arc;
    arc.samples = std::move(s);
    arc.base_index = base_index;
    arc.positively_oriented = positively_oriented;
    double diam = arc.diameter();
    if (!(diam > 0.0)) throw input_error("arc samples are all coincident");
    const double tol = 1e-9 * diam;
    const int n = arc.size();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // a closed arc may repeat its endpoints
            if (std::abs(arc.samples[i] - arc.samples[j]) < tol) {
                std::ostringstream os;
                os << "arc self-contact between samples " << i << " and " << j;
                throw input_error(os.str());
            }
        }
    }
    return arc;
}

double BoundaryArc::spacing_near(int i) const {
    const int n = size();
    if (i + 1 < n) return std::abs(samples[i + 1] - samples[i]);
    return std::abs(samples[i] - samples[i - 1]);
}

cx BoundaryArc::unit_tangent(int i) const {
    const int n = size();
    cx d;
    if (i > 0 && i + 1 < n) {
        d = samples[i + 1] - samples[i - 1];
    } else if (i + 1 < n) {
        d = samples[i + 1] - samples[i];
    } else {
        d = samples[i] - samples[i - 1];
    }
    double m = std::abs(d);
    if (m == 0.0) throw input_error("degenerate tangent estimate");
    return d / m;
}

double BoundaryArc::diameter() const { return loop_diameter(samples); }

std::string to_string(CaseLabel label) {
    switch (label) {
        case CaseLabel::regular_analytic: return "regular_analytic";
        case CaseLabel::two_sided_arc: return "two_sided_arc";
        case CaseLabel::tangent_pair: return "tangent_pair";
        case CaseLabel::cusp: return "cusp";
        case CaseLabel::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace schwarz {

namespace {

// one-sided limit along the inward normal, Richardson-extrapolated to the arc
cx offset_limit(const AnalyticModel& S, cx zeta, cx inward, double eps0) {
    auto f = [&](double e) { return S(zeta + e * inward); };
    cx v0 = f(eps0), v1 = f(eps0 / 2), v2 = f(eps0 / 4);
    cx A = 2.0 * v1 - v0, B = 2.0 * v2 - v1;
    return (4.0 * B - A) / 3.0;
}

cx candidate_value(const SchwarzCandidate& cand, const BoundaryArc& arc, int i) {
    cx zeta = arc.samples[i];
    if (!cand.boundary_limits) return cand.S(zeta);
    cx t = arc.unit_tangent(i);
    cx inward = (cand.omega_side == ArcSide::left ? cx(0.0, 1.0) : cx(0.0, -1.0)) * t;
    return offset_limit(cand.S, zeta, inward, 0.1 * arc.spacing_near(i));
}

}  // namespace

double schwarz_verify(const SchwarzCandidate& cand, const BoundaryArc& arc) {
    double worst = 0.0;
    for (int i = 0; i < arc.size(); ++i) {
        cx zeta = arc.samples[i];
        cx target = std::conj(zeta);
        if (cand.factor) target *= (*cand.factor)(zeta);
        worst = std::max(worst, std::abs(candidate_value(cand, arc, i) - target));
    }
    return worst;
}

AnalyticModel recenter_monomial(const AnalyticModel& S, cx zeta0, int n) {
    if (n < 0) throw input_error("monomial order must be nonnegative");
    if (S.kind() == AnalyticModel::Kind::series && n == 0) {
        AnalyticModel shifted = S.shifted(zeta0);
        std::vector<cx> c = shifted.coefficients();
        c[0] -= std::conj(zeta0);
        return AnalyticModel::series(shifted.center(), shifted.radius(), std::move(c));
    }
    cx cz = std::conj(zeta0);
    return AnalyticModel::black_box(S.center() - zeta0, S.radius(), [S, zeta0, cz, n](cx z) {
        return S(z + zeta0) - cz * std::pow(z, n);
    });
}

std::pair<AnalyticModel, AnalyticModel> recenter_pair(const AnalyticModel& f1,
                                                      const AnalyticModel& f2, cx zeta0) {
    cx cz = std::conj(zeta0);
    double radius = std::min(f1.radius(), f2.radius());
    AnalyticModel g1 =
        AnalyticModel::black_box(f1.center() - zeta0, radius, [f1, f2, zeta0, cz](cx z) {
            return f1(z + zeta0) - cz * f2(z + zeta0);
        });
    AnalyticModel g2 = f2.kind() == AnalyticModel::Kind::series
                           ? f2.shifted(zeta0)
                           : AnalyticModel::black_box(f2.center() - zeta0, radius,
                                                      [f2, zeta0](cx z) { return f2(z + zeta0); });
    return {g1, g2};
}

LimitReport monomial_limit_diagnostic(const AnalyticModel& S, int n,
                                      const std::vector<Path>& rays) {
    if (rays.empty()) throw input_error("no rays supplied");
    LimitReport rep;
    rep.converges = true;
    for (const Path& ray : rays) {
        cx start = ray.pts.front();
        if (std::abs(start) == 0.0) throw input_error("ray starts at the base point");
        std::vector<double> ratios;
        bool partial = false;
        cx z = start;
        for (int k = 0; k < 90 && std::abs(z) > 1e-9 * std::abs(start); ++k) {
            try {
                ratios.push_back(std::abs(S(z)) / std::pow(std::abs(z), n));
            } catch (const eval_domain_error&) {
                partial = true;
                break;
            }
            z *= 0.55;
        }
        rep.partial.push_back(partial);
        if (ratios.empty()) {
            rep.terminal_ratios.push_back(std::numeric_limits<double>::quiet_NaN());
            rep.converges = false;
            continue;
        }
        rep.terminal_ratios.push_back(ratios.back());
        bool ok = ratios.size() >= 6;
        if (ok) {
            for (size_t k = ratios.size() - 5; k < ratios.size(); ++k) {
                if (ratios[k] > 1.10 * ratios[k - 1] + 1e-300) ok = false;
            }
            if (ratios.back() > 1e-6) ok = false;
        }
        if (!ok) rep.converges = false;
    }
    return rep;
}

BoundCheckReport pl_bound_check(const AnalyticModel& f, const BoundaryArc& boundary,
                                const std::vector<cx>& interior, double alpha,
                                double beta, cx zeta0) {
    if (!(alpha > 0.0)) throw input_error("alpha must be positive");
    BoundCheckReport rep;
    double bm = -std::numeric_limits<double>::infinity();
    double skip = 1e-12 * std::max(1.0, boundary.diameter());
    for (const cx& zeta : boundary.samples) {
        if (std::abs(zeta - zeta0) < skip) continue;
        bm = std::max(bm, std::abs(f(zeta)) - 1.0);
    }
    double im = -std::numeric_limits<double>::infinity();
    for (const cx& z : interior) {
        double d = std::abs(z - zeta0);
        if (d < skip) continue;
        im = std::max(im, std::abs(f(z)) * std::pow(d, beta) / alpha - 1.0);
    }
    rep.boundary_margin = bm;
    rep.interior_margin = im;
    rep.boundary_ok = bm <= 1e-9;
    rep.interior_ok = im <= 1e-9;
    return rep;
}

UnivalenceEvidence check_univalent(const std::function<cx(cx)>& f,
                                   const std::vector<cx>& region_boundary,
                                   const UnivalenceOptions& opt) {
    if (region_boundary.size() < 8) throw input_error("region boundary needs >= 8 samples");
    std::vector<cx> pts = region_boundary;
    if (signed_area(pts) < 0.0) std::reverse(pts.begin(), pts.end());

    std::vector<cx> imgs(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) imgs[i] = f(pts[i]);

    double diam_dom = loop_diameter(pts);
    double diam_img = loop_diameter(imgs);
    if (diam_img < 1e-12 * std::max(1.0, diam_dom)) {
        throw degenerate_map_error("boundary image has no extent");
    }

    UnivalenceEvidence ev;
    ev.tested = true;

    // refine by chord midpoints until the loop is densely resolved; bail out
    // if the map cannot be evaluated off the original samples
    while (pts.size() < 512) {
        std::vector<cx> p2, w2;
        p2.reserve(2 * pts.size());
        w2.reserve(2 * pts.size());
        bool ok = true;
        for (size_t i = 0; i < pts.size() && ok; ++i) {
            cx mid = 0.5 * (pts[i] + pts[(i + 1) % pts.size()]);
            p2.push_back(pts[i]);
            w2.push_back(imgs[i]);
            try {
                cx wm = f(mid);
                p2.push_back(mid);
                w2.push_back(wm);
            } catch (const error&) {
                ok = false;
            }
        }
        if (!ok) {
            ev.note = "refinement left the evaluation domain; using supplied samples";
            break;
        }
        pts.swap(p2);
        imgs.swap(w2);
        diam_img = loop_diameter(imgs);
    }

    if (opt.pairwise_separation) {
        const double dd = 0.01 * diam_dom;
        const double ti = 1e-9 * diam_img;
        const int n = static_cast<int>(pts.size());
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (std::abs(pts[i] - pts[j]) < dd) continue;
                if (std::abs(imgs[i] - imgs[j]) <= ti) {
                    ev.univalent = false;
                    ev.collision = true;
                    ev.pair_a = pts[i];
                    ev.pair_b = pts[j];
                    ev.note = "distinct boundary points share an image value";
                    return ev;
                }
            }
        }
    }

    // interior probes: the image winding around f(p) counts preimages
    std::mt19937 gen(opt.seed);
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const cx& p : pts) {
        xlo = std::min(xlo, p.real());
        xhi = std::max(xhi, p.real());
        ylo = std::min(ylo, p.imag());
        yhi = std::max(yhi, p.imag());
    }
    std::uniform_real_distribution<double> ux(xlo, xhi), uy(ylo, yhi);
    int accepted = 0;
    const int want = std::max(1, opt.min_probes);
    for (int attempt = 0; attempt < 400 * want && accepted < want; ++attempt) {
        cx p(ux(gen), uy(gen));
        if (dist_to_loop(p, pts) < 0.02 * diam_dom) continue;
        if (winding_or(pts, p, 0) != 1) continue;
        cx q;
        try {
            q = f(p);
        } catch (const error&) {
            continue;
        }
        if (dist_to_loop(q, imgs) < 1e-6 * diam_img) continue;
        int w = winding_or(imgs, q, -1);
        if (w < 0) continue;
        if (w == 0) continue;  // numerically outside the image: not usable
        ++accepted;
        if (w != 1) {
            ev.univalent = false;
            ev.winding = w;
            ev.winding_at = p;
            ev.note = "an interior image point is covered more than once";
            return ev;
        }
    }
    if (accepted < std::max(5, want / 2)) {
        ev.univalent = false;
        ev.note = "could not place enough interior probes";
        return ev;
    }
    ev.univalent = true;
    return ev;
}

UnivalenceEvidence check_univalent(const std::function<cx(cx)>& f, const Circle& c,
                                   const UnivalenceOptions& opt) {
    int n = std::max(256, c.n);
    std::vector<cx> loop(n);
    for (int j = 0; j < n; ++j) {
        loop[j] = c.center + c.radius * std::exp(cx(0.0, 2.0 * pi * j / n));
    }
    return check_univalent(f, loop, opt);
}

CuspDomain build_cusp_domain(const AnalyticModel& T, double eta, int n_samples) {
    if (!(eta > 0.0)) throw input_error("eta must be positive");
    if (n_samples < 51) throw input_error("need at least 51 arc samples");
    if (T.radius() < eta * 1.01) throw input_error("model map domain smaller than eta");

    cx t0 = T(cx(0.0, 0.0));
    if (std::abs(t0) > 1e-12) throw rejection("model map does not vanish at 0", t0, t0);

    AnalyticModel dT = T.derivative();
    auto Tf = [&T](cx z) { return T(z); };
    auto dTf = [&dT](cx z) { return dT(z); };
    int order = core::count_zeros(Tf, dTf, Circle{cx(0.0, 0.0), eta / 8, 1024});
    if (order != 2) {
        std::ostringstream os;
        os << "model map has zero count " << order << " near 0, need exactly 2";
        throw rejection(os.str(), cx(0.0, 0.0), cx(0.0, 0.0));
    }

    // closed upper half-disk boundary: diameter then semicircle, positively oriented
    const int m = 160;
    std::vector<cx> loop;
    loop.reserve(4 * m);
    for (int i = 0; i < 2 * m; ++i) loop.push_back(cx(-eta + eta * i / m, 0.0));
    for (int j = 0; j < 2 * m; ++j) {
        loop.push_back(eta * std::exp(cx(0.0, pi * j / (2.0 * m))));
    }
    UnivalenceEvidence uni = check_univalent(Tf, loop);
    if (!uni.univalent) {
        throw rejection("model map is not injective on the closed upper half-disk: " + uni.note,
                        uni.pair_a, uni.pair_b);
    }

    int n = n_samples | 1;  // odd, so the cusp lands exactly on a sample
    int half = n / 2;
    std::vector<cx> arc_samples(n);
    std::vector<std::pair<cx, cx>> table;  // (preimage, image) seeds for inversion
    table.reserve(static_cast<size_t>(n) + 24 * 36 + 2 * m);
    for (int i = 0; i < n; ++i) {
        double x = 0.999 * eta * (i - half) / static_cast<double>(half);
        cx w(x, 0.0);
        arc_samples[i] = T(w);
        table.emplace_back(w, arc_samples[i]);
    }
    BoundaryArc arc = BoundaryArc::from_samples(std::move(arc_samples), half);

    std::vector<cx> omega;
    const int rings = 24, spokes = 36;
    omega.reserve(rings * spokes);
    for (int j = 0; j < rings; ++j) {
        double r = 0.98 * eta * (j + 0.5) / rings;
        for (int l = 0; l < spokes; ++l) {
            cx w = r * std::exp(cx(0.0, pi * (l + 0.5) / spokes));
            cx z = T(w);
            omega.push_back(z);
            table.emplace_back(w, z);
        }
    }
    for (int j = 1; j < 2 * m; ++j) {
        cx w = eta * std::exp(cx(0.0, pi * j / (2.0 * m)));
        table.emplace_back(w, T(w));
    }

    auto shared_table = std::make_shared<std::vector<std::pair<cx, cx>>>(std::move(table));
    auto invert = [T, dT, eta, shared_table](cx z) -> cx {
        cx w0;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [w, img] : *shared_table) {
            double d = std::abs(img - z);
            if (d < best) {
                best = d;
                w0 = w;
            }
        }
        const double tol = 1e-13 * std::max(1.0, std::abs(z));
        cx w = w0;
        double r = std::abs(T(w) - z);
        for (int it = 0; it < 60 && r > tol; ++it) {
            cx d = dT(w);
            if (std::abs(d) < 1e-10) {
                // near-critical start: step to a preimage of the local quadratic
                double h = 1e-6 * std::max(1.0, std::abs(w));
                cx d2 = (dT(w + cx(h, 0.0)) - dT(w - cx(h, 0.0))) / (2.0 * h);
                if (std::abs(d2) < 1e-14) break;
                cx kick = std::sqrt((z - T(w)) / (0.5 * d2));
                cx wn = (std::abs(T(w + kick) - z) <= std::abs(T(w - kick) - z)) ? w + kick
                                                                                : w - kick;
                double rn = std::abs(T(wn) - z);
                if (rn >= r) break;
                w = wn;
                r = rn;
                continue;
            }
            cx step = (T(w) - z) / d;
            cx wn = w - step;
            double rn = std::abs(T(wn) - z);
            if (rn > r) {  // damp once if the full step overshoots
                wn = w - 0.5 * step;
                rn = std::abs(T(wn) - z);
                if (rn > r) break;
            }
            w = wn;
            r = rn;
        }
        if (r > tol) throw eval_domain_error("point is outside the mapped half-disk", z);
        if (w.imag() < -0.05 * eta || std::abs(w) > 1.05 * eta) {
            throw eval_domain_error("preimage escapes the closed upper half-disk", z);
        }
        return w;
    };

    double reach = 0.0;
    for (const auto& [w, img] : *shared_table) reach = std::max(reach, std::abs(img));
    AnalyticModel S = AnalyticModel::black_box(cx(0.0, 0.0), 2.0 * reach + 1e-12,
                                               [T, invert](cx z) {
                                                   cx w = invert(z);
                                                   return std::conj(T(std::conj(w)));
                                               });

    return CuspDomain{std::move(arc), std::move(S), std::move(omega), T, invert, eta};
}

namespace {

int count_components(const std::vector<cx>& pts, double link_radius) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(pts[i] - pts[j]) <= link_radius) {
                parent[find(i)] = find(j);
            }
        }
    }
    int comps = 0;
    for (int i = 0; i < n; ++i) {
        if (find(i) == i) ++comps;
    }
    return comps;
}

double median_nn_distance(const std::vector<cx>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<double> nn(n, std::numeric_limits<double>::infinity());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) nn[i] = std::min(nn[i], std::abs(pts[i] - pts[j]));
        }
    }
    std::nth_element(nn.begin(), nn.begin() + n / 2, nn.end());
    return nn[n / 2];
}

struct Lens {
    bool built = false;
    std::string why;
    std::vector<cx> polygon;  // CCW, starts at the base point (the origin)
    std::vector<cx> probes;
    double delta = 0.0;
};

// lens at the origin: the piece of the shifted arc inside |z| < delta, closed
// by the circular arc on the side of Omega
Lens build_lens(const std::vector<cx>& shifted_arc, int base, double delta,
                const std::vector<cx>& shifted_omega, cx base_tangent, unsigned seed) {
    Lens lens;
    lens.delta = delta;
    const int n = static_cast<int>(shifted_arc.size());

    int lo = base, hi = base;
    while (lo - 1 >= 0 && std::abs(shifted_arc[lo - 1]) < delta) --lo;
    while (hi + 1 < n && std::abs(shifted_arc[hi + 1]) < delta) ++hi;
    if (lo == base || hi == base) {
        lens.why = "the base point has no arc neighbours inside the lens radius";
        return lens;
    }
    if (lo == 0 || hi == n - 1) {
        lens.why = "the arc ends inside the lens radius";
        return lens;
    }

    auto crossing = [delta](cx inside, cx outside) {
        // |inside + t (outside - inside)| = delta, t in (0, 1]
        cx d = outside - inside;
        double a = std::norm(d);
        double b = 2.0 * (inside.real() * d.real() + inside.imag() * d.imag());
        double c = std::norm(inside) - delta * delta;
        double disc = std::max(0.0, b * b - 4.0 * a * c);
        double t = (-b + std::sqrt(disc)) / (2.0 * a);
        return inside + std::clamp(t, 0.0, 1.0) * d;
    };
    cx e_lo = crossing(shifted_arc[lo], shifted_arc[lo - 1]);
    cx e_hi = crossing(shifted_arc[hi], shifted_arc[hi + 1]);

    std::vector<cx> chain;  // e_lo -> base -> e_hi along the arc
    chain.push_back(e_lo);
    for (int i = lo; i <= hi; ++i) chain.push_back(shifted_arc[i]);
    chain.push_back(e_hi);

    cx mid_a, mid_b;
    auto closure = [&](bool ccw, cx& mid) {
        std::vector<cx> poly = chain;
        double a0 = std::arg(e_hi), a1 = std::arg(e_lo);
        if (ccw && a1 <= a0) a1 += 2.0 * pi;
        if (!ccw && a1 >= a0) a1 -= 2.0 * pi;
        mid = delta * std::exp(cx(0.0, 0.5 * (a0 + a1)));
        int steps = std::max<int>(48, std::min<int>(256, hi - lo));
        for (int k = 1; k < steps; ++k) {
            double a = a0 + (a1 - a0) * k / steps;
            poly.push_back(delta * std::exp(cx(0.0, a)));
        }
        return poly;
    };

    auto omega_inside = [&](const std::vector<cx>& poly) {
        int count = 0;
        for (const cx& p : shifted_omega) {
            if (std::abs(p) >= delta) continue;
            if (dist_to_loop(p, poly) < 1e-9) continue;
            if (std::abs(winding_or(poly, p, 0)) == 1) ++count;
        }
        return count;
    };

    std::vector<cx> pa = closure(true, mid_a), pb = closure(false, mid_b);
    int ca = omega_inside(pa), cb = omega_inside(pb);
    std::vector<cx> poly;
    if (std::max(ca, cb) >= 3 && ca != cb) {
        poly = (ca > cb) ? std::move(pa) : std::move(pb);
    } else {
        // sparse sampling near the base point: decide by which side of the
        // base tangent line holds the interior mass closest to the base
        std::vector<double> dist;
        dist.reserve(shifted_omega.size());
        for (const cx& p : shifted_omega) dist.push_back(std::abs(p));
        std::vector<size_t> idx(shifted_omega.size());
        std::iota(idx.begin(), idx.end(), size_t{0});
        size_t keep = std::min<size_t>(15, idx.size());
        std::partial_sort(idx.begin(), idx.begin() + keep, idx.end(),
                          [&](size_t a, size_t b) { return dist[a] < dist[b]; });
        double side = 0.0;
        for (size_t k = 0; k < keep; ++k) {
            double cr = cross2(base_tangent, shifted_omega[idx[k]]);
            side += (cr > 0.0) - (cr < 0.0);
        }
        if (side == 0.0) {
            lens.why = "cannot decide which side of the arc holds the interior";
            return lens;
        }
        bool want_left = side > 0.0;
        bool a_left = cross2(base_tangent, mid_a) > 0.0;
        poly = (a_left == want_left) ? std::move(pa) : std::move(pb);
    }
    if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());

    // rotate so that the polygon starts at the base point, where both lens
    // boundary branches meet; square-root tracking then closes through it
    size_t base_pos = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < poly.size(); ++i) {
        if (std::abs(poly[i]) < best) {
            best = std::abs(poly[i]);
            base_pos = i;
        }
    }
    std::rotate(poly.begin(), poly.begin() + base_pos, poly.end());

    // interior probes, plus a deterministic inner ring aimed at the puncture
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> ux(-delta, delta), uy(-delta, delta);
    auto admissible = [&](cx p) {
        if (dist_to_loop(p, poly) < 0.03 * delta) return false;
        return winding_or(poly, p, 0) == 1;
    };
    for (int k = 0; k < 16; ++k) {
        cx p = 0.12 * delta * std::exp(cx(0.0, 2.0 * pi * (k + 0.5) / 16));
        if (admissible(p)) lens.probes.push_back(p);
    }
    const int want = 40;
    for (int attempt = 0; attempt < 8000 && static_cast<int>(lens.probes.size()) < want;
         ++attempt) {
        cx p(ux(gen), uy(gen));
        if (admissible(p)) lens.probes.push_back(p);
    }
    if (lens.probes.size() < 12) {
        lens.why = "could not place enough probes inside the lens";
        return lens;
    }
    lens.polygon = std::move(poly);
    lens.built = true;
    return lens;
}

struct LensOutcome {
    bool usable = false;
    std::string why;
    UnivalenceEvidence e1, e2;
    bool phi2_computed = false;
    double identity_residual = 0.0;
    std::vector<cx> certified;  // probe images of the square-root branch
    double q_scale = 0.0;       // max modulus among certified images
};

LensOutcome run_lens_tests(const Lens& lens, const std::function<cx(cx)>& phi1) {
    LensOutcome out;
    std::vector<cx> img(lens.polygon.size());
    for (size_t i = 0; i < lens.polygon.size(); ++i) img[i] = phi1(lens.polygon[i]);
    double diam_img = loop_diameter(img);
    if (!(diam_img > 0.0)) {
        out.why = "lens image is degenerate";
        return out;
    }

    auto winding_tests = [&](const std::vector<cx>& image_loop,
                             const std::function<std::vector<cx>(cx)>& images_of_probe,
                             UnivalenceEvidence& ev) {
        ev.tested = true;
        double d = loop_diameter(image_loop);
        int used = 0;
        for (const cx& p : lens.probes) {
            bool in_image = false;
            for (const cx& q : images_of_probe(p)) {
                if (dist_to_loop(q, image_loop) < 3e-3 * d) continue;
                int w = winding_or(image_loop, q, -1);
                if (w < 0) continue;
                if (w >= 2) {
                    ev.univalent = false;
                    ev.winding = w;
                    ev.winding_at = p;
                    ev.note = "a lens image point is covered more than once";
                    return;
                }
                if (w == 1) in_image = true;
            }
            if (in_image) ++used;
        }
        if (used < 8) {
            ev.univalent = false;
            ev.note = "too few usable winding probes";
            return;
        }
        ev.univalent = true;
    };

    winding_tests(img, [&](cx p) { return std::vector<cx>{phi1(p)}; }, out.e1);
    out.usable = true;
    if (out.e1.univalent) return out;
    if (out.e1.winding >= 3 && !out.e1.note.empty()) {
        // fall through: the square root test is still meaningful
    }

    // branch-tracked square root along the lens boundary; the loop starts and
    // closes at the base point where the value pinches to 0
    std::vector<cx> simg(img.size());
    cx prev = std::sqrt(img[0]);
    simg[0] = prev;
    double ident = 0.0;
    for (size_t i = 0; i < img.size(); ++i) {
        cx s = std::sqrt(img[i]);
        if (std::abs(s - prev) > std::abs(s + prev)) s = -s;
        simg[i] = s;
        prev = s;
        ident = std::max(ident, std::abs(s * s - img[i]));
    }
    out.phi2_computed = true;
    out.identity_residual = ident;

    winding_tests(
        simg,
        [&](cx p) {
            cx q = std::sqrt(phi1(p));
            return std::vector<cx>{q, -q};
        },
        out.e2);

    if (out.e2.univalent) {
        double d = loop_diameter(simg);
        for (const cx& p : lens.probes) {
            cx q = std::sqrt(phi1(p));
            for (cx cand : {q, -q}) {
                if (dist_to_loop(cand, simg) < 3e-3 * d) continue;
                if (winding_or(simg, cand, 0) == 1) {
                    out.certified.push_back(cand);
                    out.q_scale = std::max(out.q_scale, std::abs(cand));
                }
            }
        }
    }
    return out;
}

// the certified square-root images, together with a short real segment, must
// fill a punctured neighbourhood: every angular bin away from the real axis
// is hit and small moduli are reached
bool coverage_from(const std::vector<cx>& normalized) {
    if (normalized.size() < 24) return false;
    const int bins = 12;
    std::vector<bool> hit(bins, false);
    double min_mod = std::numeric_limits<double>::infinity();
    for (const cx& q : normalized) {
        double m = std::abs(q);
        if (m > 1.0) continue;
        min_mod = std::min(min_mod, m);
        int b = static_cast<int>(std::floor((std::arg(q) + pi) / (2.0 * pi) * bins));
        hit[std::clamp(b, 0, bins - 1)] = true;
    }
    for (int b = 0; b < bins; ++b) {
        if (hit[b]) continue;
        double centre = -pi + 2.0 * pi * (b + 0.5) / bins;
        double to_axis = std::min({std::abs(centre), std::abs(centre - pi),
                                   std::abs(centre + pi)});
        if (to_axis > pi / 6) return false;  // a bin off the real axis is empty
    }
    return min_mod <= 0.45;
}

}  // namespace

ClassificationReport classify_boundary(const SchwarzCandidate& cand,
                                       const BoundaryArc& arc,
                                       const std::vector<cx>& omega_samples) {
    ClassificationReport rep;
    rep.residual = schwarz_verify(cand, arc);
    if (rep.residual > 1e-6) {
        std::ostringstream os;
        os << "boundary identity residual " << rep.residual << " exceeds 1e-6";
        throw precondition_error(os.str());
    }
    if (cand.factor) {
        rep.notes.push_back("a nonunit factor is present; the lens analysis assumes it is 1");
    }

    const cx zeta0 = arc.base();
    const int n = arc.size();
    const int base = arc.base_index;

    std::vector<cx> sarc(n);
    for (int i = 0; i < n; ++i) sarc[i] = arc.samples[i] - zeta0;
    std::vector<cx> somega(omega_samples.size());
    for (size_t k = 0; k < omega_samples.size(); ++k) somega[k] = omega_samples[k] - zeta0;

    if (base > 0 && base + 1 < n) {
        cx tin = sarc[base] - sarc[base - 1];
        cx tout = sarc[base + 1] - sarc[base];
        rep.turn_angle = std::abs(std::arg(tout / tin));
    } else {
        rep.notes.push_back("base point sits at an arc end; no turning angle");
    }

    if (somega.size() < 24) {
        rep.label = CaseLabel::inconclusive;
        rep.notes.push_back("too few interior samples to resolve the topology");
        return rep;
    }

    double nn = median_nn_distance(somega);
    rep.omega_components = count_components(somega, 2.5 * nn);
    if (rep.omega_components >= 2) {
        rep.label = CaseLabel::tangent_pair;
        double line_gap = std::min(rep.turn_angle, std::abs(pi - rep.turn_angle));
        if (line_gap < 0.15) {
            rep.notes.push_back("the two boundary branches share a tangent line at the base point");
        } else {
            rep.notes.push_back("warning: branch tangent lines disagree at the base point");
        }
        return rep;
    }

    // side votes: which sides of the arc carry interior samples, away from the
    // base point where a thin spike would confuse the tube test
    double max_abs = 0.0;
    for (const cx& z : sarc) max_abs = std::max(max_abs, std::abs(z));
    const double delta_b = 0.25 * max_abs;
    {
        std::vector<char> left(n, 0), right(n, 0);
        for (const cx& w : somega) {
            int bi = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i) {
                double d = std::abs(w - sarc[i]);
                if (d < bd) {
                    bd = d;
                    bi = i;
                }
            }
            double tube = std::max(2.5 * arc.spacing_near(bi), 1.5 * nn);
            if (bd > tube) continue;
            cx t = arc.unit_tangent(bi);
            (cross2(t, w - sarc[bi]) > 0.0 ? left[bi] : right[bi]) = 1;
        }
        int voted = 0, both = 0;
        for (int i = 0; i < n; ++i) {
            if (std::abs(sarc[i]) < 0.5 * delta_b) continue;
            if (!left[i] && !right[i]) continue;
            ++voted;
            if (left[i] && right[i]) ++both;
        }
        if (voted >= 10) {
            rep.two_sided_fraction = static_cast<double>(both) / voted;
        } else {
            rep.notes.push_back("too few side votes near the arc; treating it as one-sided");
        }
    }
    if (rep.two_sided_fraction >= 0.5) {
        if (rep.turn_angle < pi / 2) {
            rep.label = CaseLabel::two_sided_arc;
            return rep;
        }
        rep.label = CaseLabel::inconclusive;
        rep.notes.push_back("interior on both sides but the arc turns sharply at the base point");
        return rep;
    }

    // lens tests at shrinking radii; the two smallest must agree
    const AnalyticModel& S = cand.S;
    cx czeta0 = std::conj(zeta0);
    auto phi1 = [&S, zeta0, czeta0](cx z) { return z * (S(z + zeta0) - czeta0); };

    const double deltas[3] = {delta_b, delta_b / 2, delta_b / 4};
    LensOutcome outcomes[3];
    std::vector<cx> coverage_pool;
    cx base_tangent = arc.unit_tangent(base);
    for (int k = 0; k < 3; ++k) {
        Lens lens = build_lens(sarc, base, deltas[k], somega, base_tangent, 911u + 7u * k);
        if (!lens.built) {
            outcomes[k].why = lens.why;
            continue;
        }
        try {
            outcomes[k] = run_lens_tests(lens, phi1);
        } catch (const error& e) {
            outcomes[k].why = e.what();
            continue;
        }
        if (outcomes[k].phi2_computed) {
            rep.phi_identity_residual =
                std::max(rep.phi_identity_residual, outcomes[k].identity_residual);
            if (outcomes[k].q_scale > 0.0) {
                for (const cx& q : outcomes[k].certified) {
                    coverage_pool.push_back(q / (0.6 * outcomes[k].q_scale));
                }
            }
        }
    }

    const LensOutcome& s2 = outcomes[1];
    const LensOutcome& s4 = outcomes[2];
    if (!s2.usable || !s4.usable) {
        rep.label = CaseLabel::inconclusive;
        rep.notes.push_back("lens construction failed: " +
                            (s2.usable ? s4.why : s2.why));
        return rep;
    }

    rep.phi1 = s4.e1;
    rep.phi1.tested = true;
    if (s2.e1.univalent && s4.e1.univalent) {
        rep.phi1.univalent = true;
        if (outcomes[0].usable && !outcomes[0].e1.univalent) {
            rep.notes.push_back("the largest lens already shows folding; the small-radius "
                                "verdicts decide");
        }
        rep.label = CaseLabel::regular_analytic;
        return rep;
    }
    if (s2.e1.univalent != s4.e1.univalent) {
        rep.label = CaseLabel::inconclusive;
        rep.notes.push_back("the shrinking lenses disagree about simple covering");
        return rep;
    }
    rep.phi1.univalent = false;
    if (!s4.e1.univalent && s4.e1.winding >= 2) {
        rep.phi1.winding = s4.e1.winding;
        rep.phi1.winding_at = s4.e1.winding_at;
    }

    rep.phi2 = s4.e2;
    rep.phi2.tested = s4.phi2_computed || s2.phi2_computed;
    rep.coverage = coverage_from(coverage_pool);
    if (s2.e2.univalent && s4.e2.univalent && rep.coverage) {
        rep.phi2.univalent = true;
        rep.label = CaseLabel::cusp;
        return rep;
    }

    rep.label = CaseLabel::inconclusive;
    if (!(s2.e2.univalent && s4.e2.univalent)) {
        rep.notes.push_back("neither the map nor its square root covers the lens simply");
    } else {
        rep.notes.push_back("the square root is simple but its image misses part of a "
                            "punctured neighbourhood");
    }
    return rep;
}

}  // namespace schwarz
}  // namespace swz
