#include "schwarzlab/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace swz {

BivariateModel BivariateModel::from_function(cx z_center, double z_radius, cx w_center,
                                             double w_radius, Fn f) {
    if (!(z_radius > 0.0) || !(w_radius > 0.0)) throw input_error("bidisk radii must be positive");
    BivariateModel m;
    m.zc_ = z_center;
    m.zr_ = z_radius;
    m.wc_ = w_center;
    m.wr_ = w_radius;
    m.f_ = std::move(f);
    return m;
}

BivariateModel BivariateModel::from_function_dw(cx z_center, double z_radius, cx w_center,
                                                double w_radius, Fn f, Fn fw) {
    BivariateModel m = from_function(z_center, z_radius, w_center, w_radius, std::move(f));
    m.fw_ = std::move(fw);
    return m;
}

cx BivariateModel::operator()(cx z, cx w) const {
    if (std::abs(z - zc_) > zr_ * (1.0 + 1e-9)) {
        throw eval_domain_error("z outside the bidisk", z);
    }
    if (std::abs(w - wc_) > wr_ * (1.0 + 1e-9)) {
        throw eval_domain_error("w outside the bidisk", w);
    }
    return f_(z, w);
}

cx BivariateModel::dw(cx z, cx w) const {
    if (fw_) return fw_(z, w);
    double h = 1e-5 * std::max(1.0, std::abs(w));
    cx hh(h, 0.0);
    return (f_(z, w - 2.0 * hh) - 8.0 * f_(z, w - hh) + 8.0 * f_(z, w + hh) -
            f_(z, w + 2.0 * hh)) /
           (12.0 * hh);
}

MonicPolyPencil MonicPolyPencil::from_nodes(std::vector<cx> grid,
                                            std::vector<std::vector<cx>> coeff, double rho) {
    if (grid.size() < 2) throw input_error("pencil needs at least 2 nodes");
    if (grid.size() != coeff.size()) throw input_error("grid and coefficient counts differ");
    if (!(rho > 0.0)) throw input_error("rho must be positive");
    const int k = static_cast<int>(coeff.front().size());
    for (const auto& c : coeff) {
        if (static_cast<int>(c.size()) != k) throw input_error("inconsistent pencil degree");
    }

    MonicPolyPencil p;
    p.k_ = k;
    p.rho_ = rho;

    // barycentric weights via log accumulation, common scale removed
    const int n = static_cast<int>(grid.size());
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) s = std::max(s, std::abs(grid[i] - grid[j]));
    }
    if (!(s > 0.0)) throw input_error("pencil nodes are coincident");
    std::vector<cx> logs(n, cx(0.0, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            cx d = (grid[i] - grid[j]) / s;
            if (std::abs(d) == 0.0) throw input_error("duplicate pencil node");
            logs[i] -= std::log(d);
        }
    }
    double m = -std::numeric_limits<double>::infinity();
    for (const cx& l : logs) m = std::max(m, l.real());
    p.bary_.resize(n);
    for (int i = 0; i < n; ++i) p.bary_[i] = std::exp(logs[i] - m);

    p.grid_ = std::move(grid);
    p.coeff_ = std::move(coeff);
    return p;
}

MonicPolyPencil MonicPolyPencil::from_exact(std::vector<cx> grid, int k, CoeffFn exact,
                                            double rho) {
    if (k < 0) throw input_error("pencil degree must be nonnegative");
    std::vector<std::vector<cx>> coeff;
    coeff.reserve(grid.size());
    for (const cx& z : grid) {
        std::vector<cx> c = exact(z);
        if (static_cast<int>(c.size()) != k) throw input_error("exact evaluator degree mismatch");
        coeff.push_back(std::move(c));
    }
    MonicPolyPencil p = from_nodes(std::move(grid), std::move(coeff), rho);
    p.exact_ = std::move(exact);
    return p;
}

MonicPoly MonicPolyPencil::slice(cx z) const {
    if (exact_) return MonicPoly{exact_(z)};
    const int n = static_cast<int>(grid_.size());
    double scale = 0.0;
    for (const cx& g : grid_) scale = std::max(scale, std::abs(g - grid_.front()));
    for (int i = 0; i < n; ++i) {
        if (std::abs(z - grid_[i]) < 1e-13 * std::max(scale, 1e-300)) {
            return MonicPoly{coeff_[i]};
        }
    }
    std::vector<cx> num(k_, cx(0.0, 0.0));
    cx den(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        cx t = bary_[i] / (z - grid_[i]);
        den += t;
        for (int q = 0; q < k_; ++q) num[q] += t * coeff_[i][q];
    }
    if (std::abs(den) == 0.0) throw resolution_error("barycentric denominator vanished");
    for (cx& v : num) v /= den;
    return MonicPoly{std::move(num)};
}

namespace weier {

int order_in_w(const BivariateModel& psi) {
    const cx zc = psi.z_center(), wc = psi.w_center();
    auto f = [&psi, zc](cx w) { return psi(zc, w); };
    auto df = [&psi, zc](cx w) { return psi.dw(zc, w); };
    double rho = 0.8 * psi.w_radius();
    int prev = -1;
    for (int iter = 0; iter < 24 && rho > 1e-12 * psi.w_radius(); ++iter) {
        int cnt;
        try {
            cnt = core::count_zeros(f, df, Circle{wc, rho, 512});
        } catch (const contour_through_zero&) {
            rho *= 0.77;
            continue;
        }
        if (cnt > 12) throw resolution_error("vanishing order exceeds the supported maximum 12");
        if (cnt == prev) return cnt;
        prev = cnt;
        rho *= 0.5;
    }
    throw resolution_error("vanishing order did not stabilize under shrinking radii");
}

std::pair<MonicPolyPencil, BivariateModel> weierstrass_prepare(const BivariateModel& psi,
                                                               const std::vector<cx>& grid,
                                                               double rho) {
    if (grid.empty()) throw input_error("empty preparation grid");
    if (!(rho > 0.0) || rho > psi.w_radius()) throw input_error("rho outside the w-disk");
    for (const cx& z : grid) {
        if (std::abs(z - psi.z_center()) > psi.z_radius() * (1.0 + 1e-9)) {
            throw input_error("grid node outside the z-disk");
        }
    }
    const cx wc = psi.w_center();
    const Circle ring{wc, rho, 1024};

    int k = -1;
    std::vector<std::vector<cx>> coeff;
    coeff.reserve(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        cx z = grid[i];
        auto f = [&psi, z](cx w) { return psi(z, w); };
        auto df = [&psi, z](cx w) { return psi.dw(z, w); };
        int cnt;
        try {
            cnt = core::count_zeros(f, df, Circle{wc, rho, 512});
        } catch (const contour_through_zero&) {
            std::ostringstream os;
            os << "a root sits on |w| = rho at node " << i << "; shrink rho";
            throw resolution_error(os.str());
        }
        if (k < 0) k = cnt;
        if (cnt != k) {
            std::ostringstream os;
            os << "root count " << cnt << " at node " << i << " differs from " << k
               << "; shrink rho or the grid radius";
            throw resolution_error(os.str());
        }
        if (k == 0) {
            coeff.emplace_back();
            continue;
        }
        std::vector<cx> sums = core::power_sums(f, df, ring, k);
        coeff.push_back(core::newton_to_monic(sums, k).a);
    }

    MonicPolyPencil pencil = MonicPolyPencil::from_nodes(grid, std::move(coeff), rho);

    MonicPolyPencil pc = pencil;  // captured copy for the cofactor
    double wr = psi.w_radius() * 0.999;
    auto c_eval = [psi, pc, rho, wc](cx z, cx w) -> cx {
        MonicPoly P = pc.slice(z);
        cx fv = psi(z, w);
        cx pv = P.eval(w);
        if (std::abs(pv) > 1e-8 * (1.0 + std::abs(fv))) return fv / pv;
        // mean-value average on a circle clearing the root set
        for (double rr : {0.05 * rho, 0.1 * rho, 0.2 * rho, 0.4 * rho}) {
            cx acc(0.0, 0.0);
            bool ok = true;
            for (int t = 0; t < 32 && ok; ++t) {
                cx wt = w + rr * std::exp(cx(0.0, 2.0 * pi * t / 32.0));
                if (std::abs(wt - wc) > 0.98 * psi.w_radius()) {
                    ok = false;
                    break;
                }
                cx fvt = psi(z, wt);
                cx pvt = P.eval(wt);
                if (std::abs(pvt) <= 1e-10 * (1.0 + std::abs(fvt))) {
                    ok = false;
                    break;
                }
                acc += fvt / pvt;
            }
            if (ok) return acc / 32.0;
        }
        throw factorization_error("cannot evaluate the cofactor near the root set");
    };
    BivariateModel c =
        BivariateModel::from_function(psi.z_center(), psi.z_radius(), wc, wr, c_eval);

    cx c00 = c(cx(0.0, 0.0), cx(0.0, 0.0));
    if (std::abs(c00) <= 1e-8) {
        throw factorization_error("cofactor vanishes at the study point");
    }
    return {std::move(pencil), std::move(c)};
}

namespace {

// dense polynomial helpers for the square-free reduction, lowest degree first
using Dense = std::vector<cx>;

double max_abs(const Dense& p) {
    double m = 0.0;
    for (const cx& c : p) m = std::max(m, std::abs(c));
    return m;
}

Dense trim(Dense p, double tol) {
    while (!p.empty() && std::abs(p.back()) <= tol) p.pop_back();
    return p;
}

// remainder of a by b (b nonempty after trim)
Dense poly_mod(Dense a, const Dense& b) {
    const int db = static_cast<int>(b.size()) - 1;
    cx lead = b.back();
    while (static_cast<int>(a.size()) - 1 >= db) {
        int da = static_cast<int>(a.size()) - 1;
        cx q = a.back() / lead;
        for (int i = 0; i <= db; ++i) a[da - db + i] -= q * b[i];
        a.pop_back();
    }
    return a;
}

Dense poly_div_exact(const Dense& a, const Dense& b, double rem_tol) {
    Dense r = a;
    const int db = static_cast<int>(b.size()) - 1;
    const int dq = static_cast<int>(a.size()) - 1 - db;
    if (dq < 0) throw factorization_error("division by a higher-degree factor");
    Dense q(dq + 1, cx(0.0, 0.0));
    cx lead = b.back();
    for (int i = dq; i >= 0; --i) {
        cx qi = r[i + db] / lead;
        q[i] = qi;
        for (int j = 0; j <= db; ++j) r[i + j] -= qi * b[j];
    }
    for (int i = 0; i < db; ++i) {
        if (std::abs(r[i]) > rem_tol) {
            throw factorization_error("square-free factor does not divide the input");
        }
    }
    return q;
}

}  // namespace

MonicPoly squarefree_part(const MonicPoly& p) {
    const int k = p.degree();
    if (k < 1) throw input_error("degree must be at least 1");
    Dense full(p.a.begin(), p.a.end());
    full.push_back(cx(1.0, 0.0));
    Dense deriv(k);
    for (int i = 1; i <= k; ++i) deriv[i - 1] = static_cast<double>(i) * full[i];

    const double scale = std::max(1.0, max_abs(full));
    const double tol = 1e-10 * scale;

    Dense a = full, b = trim(deriv, tol);
    Dense gcd{cx(1.0, 0.0)};
    int guard = 0;
    while (!b.empty()) {
        if (++guard > 2 * k + 4) {
            throw factorization_error("gcd iteration stalled; perturb the grid");
        }
        if (b.size() == 1) break;  // constant gcd
        Dense r = trim(poly_mod(a, b), tol);
        if (r.empty()) {
            gcd = b;
            break;
        }
        a = std::move(b);
        b = std::move(r);
    }

    if (gcd.size() == 1) {
        return p;  // already square-free
    }
    // normalize the gcd monic, divide it out, and renormalize
    cx lead = gcd.back();
    for (cx& c : gcd) c /= lead;
    Dense q = poly_div_exact(full, gcd, 1e-9 * scale);
    cx ql = q.back();
    if (std::abs(ql) < 1e-12) throw factorization_error("degenerate square-free quotient");
    std::vector<cx> out(q.begin(), q.end() - 1);
    for (cx& c : out) c /= ql;
    return MonicPoly{std::move(out)};
}

DiscriminantField discriminant_field(const MonicPolyPencil& pencil) {
    DiscriminantField field;
    const auto& grid = pencil.grid();
    const int n = static_cast<int>(grid.size());
    field.values.resize(n);
    int tiny = 0;
    for (int i = 0; i < n; ++i) {
        field.values[i] = core::discriminant(MonicPoly{pencil.coefficient_samples()[i]});
        if (std::abs(field.values[i]) < 1e-12) ++tiny;
    }
    if (tiny > (4 * n) / 5) {
        field.identically_zero = true;
        return field;
    }

    cx centroid(0.0, 0.0);
    for (const cx& z : grid) centroid += z;
    centroid /= static_cast<double>(n);
    double hull = 0.0;
    for (const cx& z : grid) hull = std::max(hull, std::abs(z - centroid));
    if (!(hull > 0.0)) return field;

    auto dval = [&pencil](cx z) { return core::discriminant(pencil.slice(z)); };

    auto deflated = [&](cx z) {
        cx v = dval(z);
        for (const auto& cl : field.clusters) {
            for (int t = 0; t < cl.count; ++t) v /= (z - cl.center);
        }
        return v;
    };

    auto loop_winding = [&](cx c, double r, const std::function<cx(cx)>& g) -> int {
        for (int attempt = 0; attempt < 5; ++attempt) {
            std::vector<cx> vals(256);
            for (int j = 0; j < 256; ++j) {
                vals[j] = g(c + r * std::exp(cx(0.0, 2.0 * pi * j / 256)));
            }
            try {
                return core::winding_number(vals, cx(0.0, 0.0));
            } catch (const error&) {
                r *= 0.97;
            }
        }
        return -1;
    };

    const double R = 0.95 * hull;
    for (int rounds = 0; rounds < 8; ++rounds) {
        int remaining = loop_winding(centroid, R, deflated);
        if (remaining <= 0) break;

        // minimum-modulus descent from the best grid node
        cx c = grid[0];
        double best = std::numeric_limits<double>::infinity();
        for (const cx& z : grid) {
            double v = std::abs(deflated(z));
            if (v < best) {
                best = v;
                c = z;
            }
        }
        double step = 0.5 * R;
        double fc = std::abs(deflated(c));
        for (int it = 0; it < 300 && step > 1e-10 * R; ++it) {
            cx bestp = c;
            double bestv = fc;
            for (int d = 0; d < 8; ++d) {
                cx cand = c + step * std::exp(cx(0.0, 2.0 * pi * d / 8));
                if (std::abs(cand - centroid) > 0.99 * hull) continue;
                double v = std::abs(deflated(cand));
                if (v < bestv) {
                    bestv = v;
                    bestp = cand;
                }
            }
            if (bestv < fc) {
                c = bestp;
                fc = bestv;
            } else {
                step *= 0.5;
            }
        }

        double rc = std::max(1e-7 * R, 20.0 * step);
        int count = loop_winding(c, rc, deflated);
        if (count <= 0) break;
        field.clusters.push_back(DiscriminantCluster{c, count, rc});
    }
    return field;
}

std::vector<int> monodromy(const MonicPolyPencil& pencil, const Path& loop,
                           const std::vector<cx>& base_roots) {
    if (base_roots.empty()) throw input_error("no base roots supplied");
    auto slices = [&pencil](cx z) { return pencil.slice(z); };
    const cx z0 = loop.pts.front();
    std::vector<cx> ends(base_roots.size());
    for (size_t i = 0; i < base_roots.size(); ++i) {
        ends[i] = core::continue_root(slices, z0, base_roots[i], loop);
    }
    std::vector<int> perm(base_roots.size(), -1);
    std::vector<char> used(base_roots.size(), 0);
    for (size_t i = 0; i < ends.size(); ++i) {
        int jb = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < base_roots.size(); ++j) {
            double d = std::abs(ends[i] - base_roots[j]);
            if (d < bd) {
                bd = d;
                jb = static_cast<int>(j);
            }
        }
        if (bd > 0.05 * (1.0 + std::abs(ends[i])) || used[jb]) {
            throw near_branch_point("continuation does not return to the base fibre", ends[i]);
        }
        used[jb] = 1;
        perm[i] = jb;
    }
    return perm;
}

MatchTable boundary_root_match(const MonicPolyPencil& pencil, const BoundaryArc& arc,
                               double tol) {
    if (!(tol > 0.0)) throw input_error("match tolerance must be positive");
    const int k = pencil.degree();
    const int n = arc.size();
    MatchTable table;
    table.tol = tol;
    table.zeta = arc.samples;
    table.branch_values.assign(n, {});
    table.matched.assign(n, {});
    table.excluded.assign(n, 0);
    if (k == 0) return table;

    std::vector<DiscriminantCluster> clusters;
    if (k >= 2) {
        clusters = discriminant_field(pencil).clusters;
    }
    const double zone_r = 4e-6 * std::max(1.0, arc.diameter());

    auto slices = [&pencil](cx z) { return pencil.slice(z); };
    auto lex_sorted = [](std::vector<cx> v) {
        std::sort(v.begin(), v.end(), [](cx a, cx b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
        return v;
    };

    std::vector<cx> cur = lex_sorted(core::monic_roots(pencil.slice(arc.samples[0])));
    for (int i = 0; i < n; ++i) {
        const cx zeta = arc.samples[i];
        if (i > 0) {
            std::vector<cx> next(k);
            bool ok = true;
            for (int j = 0; j < k && ok; ++j) {
                try {
                    next[j] = core::continue_root(slices, arc.samples[i - 1], cur[j],
                                                  Path{{arc.samples[i - 1], zeta}, false});
                } catch (const error&) {
                    ok = false;
                }
            }
            if (ok) {
                cur = std::move(next);
            } else {
                // labels lose continuity here but the fresh values are sound
                table.relabelled_at.push_back(i);
                cur = lex_sorted(core::monic_roots(pencil.slice(zeta)));
            }
        }
        table.branch_values[i] = cur;
        for (const auto& cl : clusters) {
            if (std::abs(zeta - cl.center) < zone_r + cl.radius) table.excluded[i] = 1;
        }
        if (table.excluded[i]) continue;
        for (int j = 0; j < k; ++j) {
            if (std::abs(cur[j] - std::conj(zeta)) < tol) table.matched[i].push_back(j);
        }
    }

    for (int j = 0; j < k; ++j) {
        int start = -1;
        for (int i = 0; i <= n; ++i) {
            bool hit = i < n && !table.excluded[i] &&
                       std::find(table.matched[i].begin(), table.matched[i].end(), j) !=
                           table.matched[i].end();
            if (hit && start < 0) start = i;
            if (!hit && start >= 0) {
                table.runs.push_back(MatchRun{start, i - 1, j});
                start = -1;
            }
        }
    }
    std::sort(table.runs.begin(), table.runs.end(), [](const MatchRun& a, const MatchRun& b) {
        return a.first < b.first;
    });
    return table;
}

std::vector<ArcClassification> classify_arcs(const MatchTable& match, const BoundaryArc& arc,
                                             const MonicPolyPencil& pencil,
                                             const std::vector<cx>& omega_samples) {
    std::vector<ArcClassification> entries;
    for (const MatchRun& run : match.runs) {
        const int len = run.last - run.first + 1;
        if (len < 9) continue;

        std::vector<int> probes{run.first + len / 2, run.first + len / 4, run.last - len / 4};
        for (int& b : probes) b = std::clamp(b, run.first + 2, run.last - 2);
        std::sort(probes.begin(), probes.end());
        probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

        std::vector<cx> window(arc.samples.begin() + run.first,
                               arc.samples.begin() + run.last + 1);
        auto window_ptr = std::make_shared<std::vector<cx>>(window);
        auto values_ptr = std::make_shared<std::vector<cx>>();
        values_ptr->reserve(len);
        for (int i = run.first; i <= run.last; ++i) {
            values_ptr->push_back(match.branch_values[i][run.branch]);
        }

        MonicPolyPencil pc = pencil;
        auto branch_eval = [pc, window_ptr, values_ptr](cx z) -> cx {
            size_t best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < window_ptr->size(); ++i) {
                double d = std::abs((*window_ptr)[i] - z);
                if (d < bd) {
                    bd = d;
                    best = i;
                }
            }
            MonicPoly P = pc.slice(z);
            cx w = (*values_ptr)[best];
            for (int it = 0; it < 40; ++it) {
                cx d = P.deriv(w);
                if (std::abs(d) < 1e-14) break;
                cx dw = P.eval(w) / d;
                w -= dw;
                if (std::abs(dw) < 1e-13 * (1.0 + std::abs(w))) break;
            }
            if (std::abs(P.eval(w)) > 1e-8 * (1.0 + std::abs(w))) {
                throw eval_domain_error("branch polish failed off the matched run", z);
            }
            return w;
        };

        double reach = 2.0 * arc.diameter() + 1.0;
        for (int b : probes) {
            AnalyticModel S = AnalyticModel::black_box(arc.samples[b], reach, branch_eval);
            SchwarzCandidate cand{S, ArcSide::left, std::nullopt, false};
            ArcClassification entry{run, arc.samples[b], ClassificationReport{}};
            try {
                BoundaryArc win = BoundaryArc::from_samples(window, b - run.first);
                entry.report = schwarz::classify_boundary(cand, win, omega_samples);
            } catch (const error& e) {
                entry.report.label = CaseLabel::inconclusive;
                entry.report.notes.push_back(std::string("delegation failed: ") + e.what());
            }
            entries.push_back(std::move(entry));
        }
    }
    return entries;
}

}  // namespace weier
}  // namespace swz
