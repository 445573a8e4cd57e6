#include "schwarzlab/model_spaces.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <utility>

namespace swz {

namespace {

// the FFTW planner is a process-wide singleton and not thread-safe; execution
// of a private plan is
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<cx> run_dft(const std::vector<cx>& in, int sign) {
    const int n = static_cast<int>(in.size());
    std::vector<cx> a(in);
    std::vector<cx> out(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), sign,
                                FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw error("spectral plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

bool power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace

InnerFunctionSpec InnerFunctionSpec::make(std::vector<Zero> zeros, std::vector<Atom> atoms) {
    for (auto& z : zeros) {
        if (std::abs(z.position) >= 1.0 - 1e-12) {
            throw input_error("Blaschke zeros must lie strictly inside the disk");
        }
        if (z.multiplicity < 1) throw input_error("zero multiplicities must be positive");
    }
    for (auto& a : atoms) {
        double r = std::abs(a.position);
        if (std::abs(r - 1.0) > 1e-12) throw input_error("atoms must sit on the unit circle");
        a.position /= r;
        if (!(a.mass > 0.0)) throw input_error("atom masses must be positive");
    }
    InnerFunctionSpec spec;
    spec.zeros = std::move(zeros);
    spec.atoms = std::move(atoms);
    return spec;
}

CircleFunction CircleFunction::from_samples(std::vector<cx> samples) {
    if (!power_of_two(static_cast<int>(samples.size()))) {
        throw input_error("circle sample counts must be powers of two");
    }
    return CircleFunction(std::move(samples));
}

CircleFunction CircleFunction::constant(int n, cx value) {
    return from_samples(std::vector<cx>(n, value));
}

CircleFunction CircleFunction::sample(int n, const std::function<cx(double)>& f) {
    if (!power_of_two(n)) throw input_error("circle sample counts must be powers of two");
    std::vector<cx> v(n);
    for (int k = 0; k < n; ++k) v[k] = f(2.0 * pi * k / n);
    return CircleFunction(std::move(v));
}

cx CircleFunction::point(int k) const { return std::polar(1.0, angle(k)); }

std::vector<cx> CircleFunction::spectrum() const {
    auto c = run_dft(v_, FFTW_FORWARD);
    for (auto& z : c) z /= static_cast<double>(v_.size());
    return c;
}

CircleFunction CircleFunction::from_spectrum(const std::vector<cx>& coeff) {
    if (!power_of_two(static_cast<int>(coeff.size()))) {
        throw input_error("circle sample counts must be powers of two");
    }
    return CircleFunction(run_dft(coeff, FFTW_BACKWARD));
}

int spectrum_bin(int m, int n) { return ((m % n) + n) % n; }

namespace mspace {

cx eval_inner(const InnerFunctionSpec& spec, cx z) {
    cx out(1.0, 0.0);
    for (const auto& zr : spec.zeros) {
        const cx a = zr.position;
        cx factor;
        if (std::abs(a) < 1e-14) {
            factor = z;
        } else {
            cx denom = 1.0 - std::conj(a) * z;
            if (std::abs(denom) < 1e-12 * (1.0 + std::abs(z))) {
                throw singularity_error("evaluation at a reflected Blaschke pole", z);
            }
            factor = (std::abs(a) / a) * (a - z) / denom;
        }
        for (int m = 0; m < zr.multiplicity; ++m) out *= factor;
    }
    for (const auto& at : spec.atoms) {
        cx d = at.position - z;
        if (std::abs(d) < 1e-12) {
            throw singularity_error("evaluation at an atom of the singular measure", z);
        }
        out *= std::exp(-at.mass * (at.position + z) / d);
    }
    return out;
}

std::function<cx(cx)> tilde(std::function<cx(cx)> f) {
    return [f = std::move(f)](cx z) { return std::conj(f(1.0 / std::conj(z))); };
}

InnerTrace inner_trace(const InnerFunctionSpec& spec, int n, cx placeholder) {
    auto tr = CircleFunction::constant(n, cx(0.0, 0.0));
    std::vector<int> masked;
    for (int k = 0; k < n; ++k) {
        try {
            tr[k] = eval_inner(spec, tr.point(k));
        } catch (const singularity_error&) {
            tr[k] = placeholder;
            masked.push_back(k);
        }
    }
    return InnerTrace{std::move(tr), std::move(masked)};
}

AnalyticModel outer_from_modulus(const CircleFunction& mod) {
    const int n = mod.size();
    double scale = 0.0;
    for (int k = 0; k < n; ++k) scale = std::max(scale, std::abs(mod[k]));
    std::vector<cx> u(n);
    for (int k = 0; k < n; ++k) {
        if (std::abs(mod[k].imag()) > 1e-12 * std::max(1.0, scale)) {
            throw input_error("modulus samples must be real");
        }
        if (!(mod[k].real() > 0.0)) {
            throw input_error("modulus samples must be positive");
        }
        u[k] = cx(std::log(mod[k].real()), 0.0);
    }
    auto uhat = CircleFunction::from_samples(u).spectrum();

    // Herglotz kernel: (e^{it}+z)/(e^{it}-z) = 1 + 2 sum_{m>=1} (z e^{-it})^m,
    // so log outer = uhat_0 + 2 sum_{m>=1} uhat_m z^m; positive at the origin
    const int top = n / 2 - 1;
    std::vector<cx> L(top + 1);
    L[0] = cx(uhat[0].real(), 0.0);
    for (int m = 1; m <= top; ++m) L[m] = 2.0 * uhat[m];

    // exponentiate the series: E' = L' E term by term
    std::vector<cx> E(top + 1);
    E[0] = std::exp(L[0]);
    for (int k = 1; k <= top; ++k) {
        cx s(0.0, 0.0);
        for (int j = 1; j <= k; ++j) s += static_cast<double>(j) * L[j] * E[k - j];
        E[k] = s / static_cast<double>(k);
    }
    return AnalyticModel::series(cx(0.0, 0.0), 1.0, std::move(E));
}

FactorizationResult inner_outer_factorize(const CircleFunction& trace) {
    const int n = trace.size();
    auto mods = CircleFunction::constant(n, cx(0.0, 0.0));
    std::vector<int> floored;
    for (int k = 0; k < n; ++k) {
        double m = std::abs(trace[k]);
        if (m < 1e-12) {
            m = 1e-12;
            floored.push_back(k);
        }
        mods[k] = cx(m, 0.0);
    }
    if (10 * static_cast<int>(floored.size()) > 9 * n) {
        throw factorization_error("boundary modulus vanishes pervasively");
    }
    auto outer = outer_from_modulus(mods);
    auto inner = CircleFunction::constant(n, cx(0.0, 0.0));
    for (int k = 0; k < n; ++k) inner[k] = trace[k] / outer(inner.point(k));
    return FactorizationResult{std::move(inner), std::move(outer), std::move(floored)};
}

cx MembershipReport::raw_coefficient(int m) const {
    const int n = static_cast<int>(raw_spectrum.size());
    if (n == 0) throw input_error("no raw spectrum recorded");
    return raw_spectrum[spectrum_bin(m, n)];
}

MembershipReport ktheta_membership(const CircleFunction& phi, const InnerFunctionSpec& spec) {
    const int n = phi.size();
    auto [tht, masked] = inner_trace(spec, n);

    const int per_atom = 3;
    const int pa = per_atom * static_cast<int>(spec.atoms.size());
    std::vector<double> window(n, 1.0);
    for (const auto& at : spec.atoms) {
        double s = std::arg(at.position);
        for (int k = 0; k < n; ++k) {
            double t = 2.0 * pi * k / n;
            window[k] *= std::pow(2.0 - 2.0 * std::cos(t - s), per_atom);
        }
    }

    std::vector<cx> model_side(n), hardy_side(n), raw(n), pairing(n);
    for (int k = 0; k < n; ++k) {
        cx ct = std::conj(tht[k]);
        model_side[k] = window[k] * ct * phi[k];
        hardy_side[k] = window[k] * phi[k];
        raw[k] = ct * phi[k];
        pairing[k] = tht[k] * std::conj(phi[k]);
    }
    auto cm = CircleFunction::from_samples(std::move(model_side)).spectrum();
    auto ch = CircleFunction::from_samples(std::move(hardy_side)).spectrum();

    double m_bad = 0.0, m_tot = 0.0, h_bad = 0.0, h_tot = 0.0;
    for (int m = -n / 2; m < n / 2; ++m) {
        double a = std::norm(cm[spectrum_bin(m, n)]);
        double b = std::norm(ch[spectrum_bin(m, n)]);
        m_tot += a;
        h_tot += b;
        if (m >= pa) m_bad += a;
        if (m < -pa) h_bad += b;
    }

    MembershipReport rep;
    rep.window_order = pa;
    rep.model_side_leak = m_tot > 0.0 ? m_bad / m_tot : 0.0;
    rep.hardy_side_leak = h_tot > 0.0 ? h_bad / h_tot : 0.0;
    rep.leak = std::max(rep.model_side_leak, rep.hardy_side_leak);
    rep.member = rep.model_side_leak <= 1e-6 && rep.hardy_side_leak <= 1e-6;
    rep.raw_spectrum = CircleFunction::from_samples(std::move(raw)).spectrum();
    rep.pairing_coefficient = CircleFunction::from_samples(std::move(pairing)).spectrum()[0];
    return rep;
}

AnalyticModel phi_aggregate(const AnalyticModel& G, cx alpha, const InnerFunctionSpec& spec) {
    if (std::abs(alpha) <= 1.0 + 1e-12) {
        throw eval_domain_error("the aggregate point must lie outside the closed disk", alpha);
    }
    cx beta = 1.0 / std::conj(alpha);
    if (std::abs(eval_inner(spec, beta)) < 1e-14) {
        throw precondition_error("the inner function vanishes at the reflected point");
    }
    const cx g_alpha = G(alpha);
    const cx g_prime = G.derivative()(alpha);
    const double snap = 1e-9 * (1.0 + std::abs(alpha));
    auto eval = [G, alpha, g_alpha, g_prime, snap](cx z) -> cx {
        if (std::abs(z - alpha) <= snap) return g_prime;
        return (G(z) - g_alpha) / (z - alpha);
    };
    return AnalyticModel::black_box(G.center(), G.radius(), std::move(eval));
}

namespace {

// the closed disk minus a thin wedge at every atom: the aggregate is analytic
// there, while nothing useful can be certified across the essential
// singularities themselves
std::vector<cx> wedge_free_region(const InnerFunctionSpec& spec) {
    const double r_out = 0.995;
    const double r_in = 0.02;
    const double half = 0.05;
    std::vector<double> angles;
    for (const auto& at : spec.atoms) angles.push_back(std::arg(at.position));
    std::sort(angles.begin(), angles.end());
    const int m = static_cast<int>(angles.size());
    std::vector<cx> poly;
    for (int j = 0; j < m; ++j) {
        double a0 = angles[j] + half;
        double a1 = angles[(j + 1) % m] - half + (j + 1 == m ? 2.0 * pi : 0.0);
        int arc_pts = std::max(16, static_cast<int>(720.0 * (a1 - a0) / (2.0 * pi)));
        for (int i = 0; i < arc_pts; ++i) {
            poly.push_back(std::polar(r_out, a0 + (a1 - a0) * i / arc_pts));
        }
        for (int i = 0; i < 40; ++i) {
            poly.push_back(std::polar(r_out + (r_in - r_out) * i / 40.0, a1));
        }
        for (int i = 0; i < 16; ++i) {
            poly.push_back(std::polar(r_in, a1 + 2.0 * half * i / 16.0));
        }
        for (int i = 0; i < 40; ++i) {
            poly.push_back(std::polar(r_in + (r_out - r_in) * i / 40.0, a1 + 2.0 * half));
        }
    }
    return poly;
}

}  // namespace

AlphaScanResult scan_alpha(const AnalyticModel& G, const InnerFunctionSpec& spec, int n_grid) {
    if (n_grid < 1) throw input_error("the scan grid must be nonempty");
    if (spec.atoms.empty()) throw unsupported_support("the scan needs at least one atom");
    auto region = wedge_free_region(spec);
    for (int i = 0; i < n_grid; ++i) {
        cx alpha(1.0 + (i + 0.5) / n_grid, 0.0);
        try {
            auto phi = phi_aggregate(G, alpha, spec);
            schwarz::UnivalenceOptions opt;
            opt.min_probes = 20;
            auto ev = schwarz::check_univalent([phi](cx z) { return phi(z); }, region, opt);
            if (ev.univalent) return AlphaScanResult{alpha, i, ev, std::move(phi)};
        } catch (const error&) {
            continue;
        }
    }
    throw resolution_error("no aggregate point in (1,2) passed the univalence certificate");
}

MultiplierReport shirokov_multiplier(const InnerFunctionSpec& spec, int taming_order, int grid) {
    if (!spec.zeros.empty()) {
        throw unsupported_support("the multiplier construction needs a purely atomic spec");
    }
    if (spec.atoms.empty()) throw unsupported_support("at least one atom is required");
    if (taming_order < 3) throw input_error("the taming order must be at least 3");
    if (!power_of_two(grid)) throw input_error("the report grid must be a power of two");

    std::vector<cx> coeff{cx(1.0, 0.0)};
    for (const auto& at : spec.atoms) {
        for (int r = 0; r < taming_order; ++r) {
            std::vector<cx> next(coeff.size() + 1, cx(0.0, 0.0));
            for (size_t i = 0; i < coeff.size(); ++i) {
                next[i] += coeff[i];
                next[i + 1] -= coeff[i] / at.position;
            }
            coeff = std::move(next);
        }
    }
    AnalyticModel H = AnalyticModel::series(cx(0.0, 0.0), 4.0, std::move(coeff));

    auto [tht, masked] = inner_trace(spec, grid);
    std::vector<cx> hv(grid), htv(grid);
    for (int k = 0; k < grid; ++k) {
        cx z = tht.point(k);
        hv[k] = H(z);
        bool hit = std::find(masked.begin(), masked.end(), k) != masked.end();
        htv[k] = hit ? cx(0.0, 0.0) : hv[k] * tht[k];  // H vanishes at the atoms
    }
    const double chord = std::abs(tht.point(1) - tht.point(0));
    auto lip = [&](const std::vector<cx>& v) {
        double worst = 0.0;
        for (int k = 0; k < grid; ++k) {
            worst = std::max(worst, std::abs(v[(k + 1) % grid] - v[k]) / chord);
        }
        return worst;
    };
    return MultiplierReport{std::move(H), lip(hv), lip(htv), grid};
}

double nevanlinna_certificate(const CircleFunction& f1, const CircleFunction& f2,
                              const CircleFunction& phi, const std::vector<char>* keep) {
    const int n = f1.size();
    if (f2.size() != n || phi.size() != n) {
        throw input_error("the traces must share one grid");
    }
    if (keep != nullptr && static_cast<int>(keep->size()) != n) {
        throw input_error("the mask must match the grid");
    }
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        if (keep != nullptr && (*keep)[k] == 0) continue;
        worst = std::max(worst, std::abs(f1[k] - std::conj(phi[k]) * f2[k]));
    }
    return worst;
}

}  // namespace mspace
}  // namespace swz
