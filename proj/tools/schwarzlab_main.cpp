#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "schwarzlab/complex_core.hpp"
#include "schwarzlab/errors.hpp"
#include "schwarzlab/harmonic.hpp"
#include "schwarzlab/json_io.hpp"
#include "schwarzlab/model_spaces.hpp"
#include "schwarzlab/schwarz.hpp"
#include "schwarzlab/svg.hpp"
#include "schwarzlab/weierstrass.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using swz::AnalyticModel;
using swz::ArcSide;
using swz::BivariateModel;
using swz::BoundaryArc;
using swz::CaseLabel;
using swz::CircleFunction;
using swz::ClassificationReport;
using swz::cx;
using swz::HalfDiskHarmonic;
using swz::InnerFunctionSpec;
using swz::MatchTable;
using swz::MonicPolyPencil;
using swz::Path;
using swz::SchwarzCandidate;

struct Options {
    fs::path out{"."};
    unsigned seed = 20260822;
    int samples = 0;     // 0 keeps the command default
    double tol = 0.0;    // 0 keeps the command default
    bool svg_on = true;
    std::string fixture;
    std::string config;
};

// exit codes: 0 pass, 1 quantitative fail, 2 input error, 3 inconclusive
constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_input = 2;
constexpr int exit_inconclusive = 3;

// ---------------------------------------------------------------------------
// shared constructions

AnalyticModel disk_reflection(cx c, double r) {
    return AnalyticModel::black_box(c, 8.0 * (std::abs(c) + r) + 1.0, [c, r](cx z) {
        return std::conj(c) + r * r / (z - c);
    });
}

BoundaryArc circle_arc(cx c, double r, int n, int base_index) {
    std::vector<cx> s(n);
    for (int j = 0; j < n; ++j)
        s[j] = c + r * std::exp(cx(0.0, 2.0 * swz::pi * j / n));
    return BoundaryArc::from_samples(std::move(s), base_index);
}

std::vector<cx> disk_grid(cx c, double r, int rings, int spokes) {
    std::vector<cx> pts;
    for (int j = 0; j < rings; ++j) {
        double rr = r * (j + 0.5) / rings;
        for (int l = 0; l < spokes; ++l) {
            double t = 2.0 * swz::pi * (l + 0.5) / spokes;
            pts.push_back(c + rr * std::exp(cx(0.0, t)));
        }
    }
    return pts;
}

AnalyticModel cusp_map() {
    return AnalyticModel::series(cx(0.0, 0.0), 4.0,
                                 {cx(0.0), cx(0.0), cx(1.0), cx(0.0, 1.0)});
}

InnerFunctionSpec atom_spec() {
    return InnerFunctionSpec::make({}, {{cx(1.0, 0.0), 1.0}});
}

cx kernel_ref(cx z, const InnerFunctionSpec& spec, cx lambda) {
    cx tl = swz::mspace::eval_inner(spec, lambda);
    return (1.0 - std::conj(tl) * swz::mspace::eval_inner(spec, z)) /
           (1.0 - std::conj(lambda) * z);
}

std::vector<cx> circle_grid(cx c, double r, int n) {
    std::vector<cx> g(n);
    for (int i = 0; i < n; ++i) g[i] = c + r * std::exp(cx(0.0, 2.0 * swz::pi * i / n));
    return g;
}

Path polar_loop(cx c, double r, int segs) {
    std::vector<cx> pts;
    for (int j = 0; j <= segs; ++j)
        pts.push_back(c + r * std::exp(cx(0.0, 2.0 * swz::pi * j / segs)));
    pts.back() = pts.front();
    return Path{std::move(pts), true};
}

bool is_masked(const std::vector<int>& masked, int k) {
    return std::find(masked.begin(), masked.end(), k) != masked.end();
}

std::string case_code(CaseLabel label) {
    switch (label) {
        case CaseLabel::regular_analytic: return "1";
        case CaseLabel::two_sided_arc: return "2a";
        case CaseLabel::tangent_pair: return "2b";
        case CaseLabel::cusp: return "2c";
        case CaseLabel::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

// cycles of a permutation, 1-based, fixed points dropped: "(1 2)(3 5 4)"
std::string cycle_string(const std::vector<int>& perm) {
    std::string out;
    std::vector<char> seen(perm.size(), 0);
    for (size_t i = 0; i < perm.size(); ++i) {
        if (seen[i] || perm[i] == static_cast<int>(i)) continue;
        out += '(';
        size_t j = i;
        bool first = true;
        while (!seen[j]) {
            seen[j] = 1;
            if (!first) out += ' ';
            out += std::to_string(j + 1);
            first = false;
            j = static_cast<size_t>(perm[j]);
        }
        out += ')';
    }
    return out.empty() ? "()" : out;
}

// ---------------------------------------------------------------------------
// config parsing

[[noreturn]] void bad_field(const std::string& name, const std::string& why) {
    throw swz::input_error("field '" + name + "': " + why);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (item.key() == a) ok = true;
        if (!ok) bad_field(item.key(), "unknown key");
    }
}

const json& need(const json& j, const char* name) {
    if (!j.is_object()) bad_field(name, "parent is not an object");
    auto it = j.find(name);
    if (it == j.end()) bad_field(name, "missing");
    return *it;
}

cx complex_from(const json& j, const char* name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        bad_field(name, "expected [re, im]");
    return cx(j[0].get<double>(), j[1].get<double>());
}

double number_from(const json& j, const char* name) {
    if (!j.is_number()) bad_field(name, "expected a number");
    return j.get<double>();
}

int integer_from(const json& j, const char* name) {
    if (!j.is_number_integer()) bad_field(name, "expected an integer");
    return j.get<int>();
}

std::string string_from(const json& j, const char* name) {
    if (!j.is_string()) bad_field(name, "expected a string");
    return j.get<std::string>();
}

// candidate descriptors: closed forms the report formats can carry
SchwarzCandidate candidate_from_json(const json& j) {
    check_keys(j, {"kind", "center", "radius", "coefficients"});
    std::string kind = string_from(need(j, "kind"), "candidate.kind");
    if (kind == "circle") {
        cx c = complex_from(need(j, "center"), "candidate.center");
        double r = number_from(need(j, "radius"), "candidate.radius");
        if (r <= 0.0) bad_field("candidate.radius", "must be positive");
        return SchwarzCandidate{disk_reflection(c, r), ArcSide::left, std::nullopt, false};
    }
    if (kind == "identity") {
        return SchwarzCandidate{AnalyticModel::series(cx(0.0, 0.0), 1e6, {cx(0.0), cx(1.0)}),
                                ArcSide::left, std::nullopt, false};
    }
    if (kind == "polynomial") {
        const json& jc = need(j, "coefficients");
        if (!jc.is_array() || jc.empty())
            bad_field("candidate.coefficients", "expected a nonempty array");
        std::vector<cx> coeff;
        for (const json& e : jc) coeff.push_back(complex_from(e, "candidate.coefficients"));
        return SchwarzCandidate{AnalyticModel::series(cx(0.0, 0.0), 1e6, std::move(coeff)),
                                ArcSide::left, std::nullopt, false};
    }
    bad_field("candidate.kind", "expected circle, identity or polynomial");
}

std::vector<cx> points_from_json(const json& j, const char* name) {
    if (!j.is_array()) bad_field(name, "expected an array of [re, im]");
    std::vector<cx> pts;
    for (const json& e : j) pts.push_back(complex_from(e, name));
    return pts;
}

// psi(z, w) = sum_j c_j(z) w^j with polynomial c_j(z) = sum_m coeff[j][m] z^m
BivariateModel bivariate_from_json(const json& j) {
    check_keys(j, {"kind", "coefficients", "z_radius", "w_radius"});
    std::string kind = string_from(need(j, "kind"), "psi.kind");
    if (kind != "bivariate-poly")
        bad_field("psi.kind", "expected bivariate-poly");
    const json& jc = need(j, "coefficients");
    if (!jc.is_array() || jc.empty())
        bad_field("psi.coefficients", "expected one row per w power");
    std::vector<std::vector<cx>> rows;
    for (const json& row : jc) {
        if (!row.is_array()) bad_field("psi.coefficients", "expected arrays of [re, im]");
        std::vector<cx> r;
        for (const json& e : row) r.push_back(complex_from(e, "psi.coefficients"));
        rows.push_back(std::move(r));
    }
    double zr = 1.0, wr = 2.0;
    if (auto it = j.find("z_radius"); it != j.end()) zr = number_from(*it, "psi.z_radius");
    if (auto it = j.find("w_radius"); it != j.end()) wr = number_from(*it, "psi.w_radius");
    auto eval = [rows](cx z, cx w) {
        cx acc(0.0, 0.0), wp(1.0, 0.0);
        for (const auto& row : rows) {
            cx c(0.0, 0.0), zp(1.0, 0.0);
            for (cx a : row) {
                c += a * zp;
                zp *= z;
            }
            acc += c * wp;
            wp *= w;
        }
        return acc;
    };
    return BivariateModel::from_function(cx(0.0, 0.0), zr, cx(0.0, 0.0), wr, eval);
}

json load_config(const Options& opt) {
    return swz::io::load_json(opt.config);
}

// ---------------------------------------------------------------------------
// report plumbing

json base_report(const Options& opt, const char* command) {
    json j;
    j["format_version"] = swz::io::format_version;
    j["command"] = command;
    j["seed"] = opt.seed;
    if (!opt.fixture.empty())
        j["fixture"] = opt.fixture;
    else
        j["config"] = fs::path(opt.config).filename().string();
    return j;
}

int finish(const Options& opt, const char* command, json& report, int code) {
    report["exit_code"] = code;
    report["pass"] = (code == exit_pass);
    fs::create_directories(opt.out);
    swz::io::write_json(opt.out / (std::string(command) + "_report.json"), report);
    return code;
}

void sketch_arc(const Options& opt, const char* command, const BoundaryArc& arc,
                const std::vector<cx>& omega, const std::string& text) {
    if (!opt.svg_on) return;
    swz::io::SvgSketch sk;
    sk.polyline(arc.samples, "#1f4e8c", 1.5, false);
    for (size_t i = 0; i < omega.size(); i += std::max<size_t>(1, omega.size() / 400))
        sk.dot(omega[i], 1.5, "#b8b8b8");
    sk.dot(arc.base(), 4.0, "#c22");
    sk.label(arc.base(), text);
    fs::create_directories(opt.out);
    sk.write(opt.out / (std::string(command) + "_sketch.svg"));
}

// ---------------------------------------------------------------------------
// schwarz-verify

int run_schwarz_verify(const Options& opt) {
    BoundaryArc arc = circle_arc(cx(0.0, 0.0), 1.0, 8, 0);
    SchwarzCandidate cand{AnalyticModel::series(cx(0.0, 0.0), 2.0, {cx(0.0)}), ArcSide::left,
                          std::nullopt, false};
    double tol = opt.tol > 0.0 ? opt.tol : 1e-12;

    if (!opt.fixture.empty()) {
        if (opt.fixture == "circle") {
            int n = opt.samples > 0 ? opt.samples : 512;
            arc = circle_arc(cx(0.2, 0.1), 0.7, n, 37);
            cand = SchwarzCandidate{disk_reflection(cx(0.2, 0.1), 0.7), ArcSide::left,
                                    std::nullopt, false};
        } else if (opt.fixture == "slit") {
            int n = opt.samples > 0 ? opt.samples : 301;
            std::vector<cx> seg(n);
            for (int j = 0; j < n; ++j) seg[j] = cx(0.2 + 0.6 * j / (n - 1.0), 0.0);
            arc = BoundaryArc::from_samples(std::move(seg), n / 2);
            cand = SchwarzCandidate{AnalyticModel::series(cx(0.5, 0.0), 8.0, {cx(0.5), cx(1.0)}),
                                    ArcSide::left, std::nullopt, false};
        } else if (opt.fixture == "cusp") {
            int n = opt.samples > 0 ? opt.samples : 1201;
            auto dom = swz::schwarz::build_cusp_domain(cusp_map(), 0.25, n);
            arc = dom.arc;
            cand = SchwarzCandidate{dom.S, ArcSide::left, std::nullopt, false};
            if (opt.tol <= 0.0) tol = 1e-8;
        } else if (opt.fixture == "disk") {
            int n = opt.samples > 0 ? opt.samples : 512;
            arc = circle_arc(cx(0.0, 0.0), 1.0, n, 0);
            cand = SchwarzCandidate{AnalyticModel::series(cx(0.0, 0.0), 8.0, {cx(0.0), cx(1.0)}),
                                    ArcSide::left, std::nullopt, false};
        } else {
            bad_field("fixture", "unknown fixture '" + opt.fixture +
                                     "' (expected circle, slit, cusp or disk)");
        }
    } else {
        json cfg = load_config(opt);
        check_keys(cfg, {"format_version", "arc", "candidate", "tol"});
        arc = swz::io::arc_from_json(swz::io::load_json(string_from(need(cfg, "arc"), "arc")));
        cand = candidate_from_json(need(cfg, "candidate"));
        if (auto it = cfg.find("tol"); it != cfg.end() && opt.tol <= 0.0)
            tol = number_from(*it, "tol");
        if (tol <= 0.0) bad_field("tol", "must be positive");
    }

    double residual = swz::schwarz::schwarz_verify(cand, arc);
    std::vector<double> per_sample(arc.samples.size(), 0.0);
    for (size_t i = 0; i < arc.samples.size(); ++i) {
        cx zeta = arc.samples[i];
        cx want = std::conj(zeta);
        if (cand.factor) want *= (*cand.factor)(zeta);
        per_sample[i] = std::abs(cand.S(zeta) - want);
    }

    json report = base_report(opt, "schwarz-verify");
    report["tolerances"] = {{"residual", tol}};
    report["results"] = {{"residual", residual},
                         {"n_samples", arc.size()},
                         {"per_sample_residuals", per_sample}};
    int code = residual <= tol ? exit_pass : exit_fail;
    char text[64];
    std::snprintf(text, sizeof(text), "residual %.3g", residual);
    sketch_arc(opt, "schwarz-verify", arc, {}, text);
    return finish(opt, "schwarz-verify", report, code);
}

// ---------------------------------------------------------------------------
// classify

json univalence_to_json(const swz::UnivalenceEvidence& e) {
    return json{{"tested", e.tested},   {"univalent", e.univalent},
                {"collision", e.collision}, {"winding", e.winding},
                {"note", e.note}};
}

int run_classify_arc_mode(const Options& opt, const SchwarzCandidate& cand,
                          const BoundaryArc& arc, const std::vector<cx>& omega) {
    ClassificationReport rep = swz::schwarz::classify_boundary(cand, arc, omega);
    json report = base_report(opt, "classify");
    report["mode"] = "arc";
    report["results"] = {{"label", case_code(rep.label)},
                         {"label_name", swz::to_string(rep.label)},
                         {"residual", rep.residual},
                         {"turn_angle", rep.turn_angle},
                         {"omega_components", rep.omega_components},
                         {"two_sided_fraction", rep.two_sided_fraction},
                         {"phi_identity_residual", rep.phi_identity_residual},
                         {"coverage", rep.coverage},
                         {"phi1", univalence_to_json(rep.phi1)},
                         {"phi2", univalence_to_json(rep.phi2)},
                         {"notes", rep.notes}};
    sketch_arc(opt, "classify", arc, omega, "case " + case_code(rep.label));
    int code = rep.label == CaseLabel::inconclusive ? exit_inconclusive : exit_pass;
    return finish(opt, "classify", report, code);
}

int run_classify_pencil_mode(const Options& opt, const MonicPolyPencil& pencil,
                             const BoundaryArc& arc, double match_tol,
                             const std::vector<cx>& omega) {
    MatchTable table = swz::weier::boundary_root_match(pencil, arc, match_tol);
    auto arcs = swz::weier::classify_arcs(table, arc, pencil, omega);

    int matched_samples = 0;
    for (const auto& m : table.matched)
        if (!m.empty()) ++matched_samples;

    json jarcs = json::array();
    for (const auto& a : arcs) {
        jarcs.push_back({{"first", a.run.first},
                         {"last", a.run.last},
                         {"branch", a.run.branch},
                         {"probe", {a.base.real(), a.base.imag()}},
                         {"label", case_code(a.report.label)},
                         {"label_name", swz::to_string(a.report.label)}});
    }
    json report = base_report(opt, "classify");
    report["mode"] = "pencil";
    report["tolerances"] = {{"match", match_tol}};
    report["results"] = {{"n_samples", static_cast<int>(table.zeta.size())},
                         {"matched_samples", matched_samples},
                         {"relabelled_at", table.relabelled_at},
                         {"runs", static_cast<int>(table.runs.size())},
                         {"arcs", std::move(jarcs)}};
    fs::create_directories(opt.out);
    swz::io::write_match_csv(opt.out / "classify_match.csv", table);
    if (opt.svg_on) {
        swz::io::SvgSketch sk;
        sk.polyline(arc.samples, "#1f4e8c", 1.5, false);
        for (size_t i = 0; i < table.zeta.size(); ++i)
            if (!table.matched[i].empty()) sk.dot(table.zeta[i], 2.5, "#2a8c2a");
        sk.label(arc.base(), "matched " + std::to_string(matched_samples) + "/" +
                                 std::to_string(table.zeta.size()));
        sk.write(opt.out / "classify_sketch.svg");
    }
    int code = exit_pass;
    for (const auto& a : arcs)
        if (a.report.label == CaseLabel::inconclusive) code = exit_inconclusive;
    return finish(opt, "classify", report, code);
}

int run_classify(const Options& opt) {
    if (!opt.fixture.empty()) {
        if (opt.fixture == "circle") {
            const cx c(0.2, 0.1);
            int n = opt.samples > 0 ? opt.samples : 512;
            SchwarzCandidate cand{disk_reflection(c, 0.7), ArcSide::left, std::nullopt, false};
            return run_classify_arc_mode(opt, cand, circle_arc(c, 0.7, n, 37),
                                         disk_grid(c, 0.63, 14, 28));
        }
        if (opt.fixture == "cusp") {
            int n = opt.samples > 0 ? opt.samples : 1201;
            auto dom = swz::schwarz::build_cusp_domain(cusp_map(), 0.25, n);
            SchwarzCandidate cand{dom.S, ArcSide::left, std::nullopt, false};
            return run_classify_arc_mode(opt, cand, dom.arc, dom.omega_samples);
        }
        if (opt.fixture == "slit") {
            int n = opt.samples > 0 ? opt.samples : 301;
            std::vector<cx> seg(n);
            for (int j = 0; j < n; ++j) seg[j] = cx(0.2 + 0.6 * j / (n - 1.0), 0.0);
            BoundaryArc arc = BoundaryArc::from_samples(std::move(seg), n / 2);
            SchwarzCandidate cand{AnalyticModel::series(cx(0.5, 0.0), 8.0, {cx(0.5), cx(1.0)}),
                                  ArcSide::left, std::nullopt, false};
            std::vector<cx> omega;
            for (const cx& p : disk_grid(cx(0.5, 0.0), 0.45, 16, 32)) {
                bool on_slit_band = std::abs(p.imag()) < 0.015 && p.real() < 0.91;
                if (!on_slit_band) omega.push_back(p);
            }
            return run_classify_arc_mode(opt, cand, arc, omega);
        }
        if (opt.fixture == "tangent-pair") {
            const cx cu(0.0, 0.25), cl(0.0, -0.35);
            const double ru = 0.25, rl = 0.35;
            std::vector<cx> samples;
            const int m = opt.samples > 0 ? opt.samples / 2 : 180;
            for (int j = 0; j < m; ++j) {
                double t = swz::pi / 2 - 1.2 + 1.2 * j / (m - 1.0);
                samples.push_back(cl + rl * std::exp(cx(0.0, t)));
            }
            samples.back() = cx(0.0, 0.0);
            for (int j = 1; j < m; ++j) {
                double t = -swz::pi / 2 + 1.2 * j / (m - 1.0);
                samples.push_back(cu + ru * std::exp(cx(0.0, t)));
            }
            BoundaryArc arc = BoundaryArc::from_samples(std::move(samples), m - 1);
            AnalyticModel S = AnalyticModel::black_box(cx(0.0, 0.0), 8.0, [=](cx z) {
                double du = std::abs(std::abs(z - cu) - ru);
                double dl = std::abs(std::abs(z - cl) - rl);
                cx c = du <= dl ? cu : cl;
                double r = du <= dl ? ru : rl;
                return std::conj(c) + r * r / (z - c);
            });
            std::vector<cx> omega = disk_grid(cu, 0.85 * ru, 10, 20);
            for (const cx& p : disk_grid(cl, 0.85 * rl, 10, 20)) omega.push_back(p);
            SchwarzCandidate cand{S, ArcSide::left, std::nullopt, false};
            return run_classify_arc_mode(opt, cand, arc, omega);
        }
        if (opt.fixture == "inconclusive") {
            // too few samples for one-sided tangents: reported, not guessed
            const cx c(0.2, 0.1);
            SchwarzCandidate cand{disk_reflection(c, 0.7), ArcSide::left, std::nullopt, false};
            return run_classify_arc_mode(opt, cand, circle_arc(c, 0.7, 16, 0),
                                         disk_grid(c, 0.63, 6, 10));
        }
        if (opt.fixture == "w2-z") {
            std::vector<cx> grid = circle_grid(cx(0.0, 0.0), 1.3, 64);
            std::vector<std::vector<cx>> coeff;
            for (cx z : grid) coeff.push_back({-z, cx(0.0, 0.0)});
            MonicPolyPencil pencil = MonicPolyPencil::from_nodes(grid, coeff, 2.0);
            int n = opt.samples > 0 ? opt.samples : 768;
            double tol = opt.tol > 0.0 ? opt.tol : 1e-5;
            return run_classify_pencil_mode(opt, pencil, circle_arc(cx(0.0, 0.0), 1.0, n, 0),
                                            tol, {});
        }
        if (opt.fixture == "circle-pencil") {
            const cx z0(0.3, -0.2);
            const double r = 0.5;
            MonicPolyPencil pencil = MonicPolyPencil::from_exact(
                circle_grid(z0, r, 64), 1,
                [z0, r](cx z) {
                    return std::vector<cx>{-(std::conj(z0) + r * r / (z - z0))};
                },
                4.0);
            int n = opt.samples > 0 ? opt.samples : 512;
            BoundaryArc arc = circle_arc(z0, r, n, 0);
            double tol = opt.tol > 0.0 ? opt.tol : 1e-6 * arc.diameter();
            return run_classify_pencil_mode(opt, pencil, arc, tol, disk_grid(z0, 0.45, 10, 20));
        }
        bad_field("fixture",
                  "unknown fixture '" + opt.fixture +
                      "' (expected circle, cusp, slit, tangent-pair, inconclusive, w2-z or "
                      "circle-pencil)");
    }
    json cfg = load_config(opt);
    check_keys(cfg, {"format_version", "mode", "arc", "candidate", "omega", "pencil",
                     "match_tol"});
    std::string mode = string_from(need(cfg, "mode"), "mode");
    BoundaryArc arc =
        swz::io::arc_from_json(swz::io::load_json(string_from(need(cfg, "arc"), "arc")));
    if (mode == "arc") {
        SchwarzCandidate cand = candidate_from_json(need(cfg, "candidate"));
        std::vector<cx> omega;
        if (auto it = cfg.find("omega"); it != cfg.end())
            omega = points_from_json(*it, "omega");
        return run_classify_arc_mode(opt, cand, arc, omega);
    }
    if (mode == "pencil") {
        MonicPolyPencil pencil = swz::io::pencil_from_json(
            swz::io::load_json(string_from(need(cfg, "pencil"), "pencil")));
        double tol = opt.tol > 0.0 ? opt.tol : 1e-6 * arc.diameter();
        if (auto it = cfg.find("match_tol"); it != cfg.end() && opt.tol <= 0.0)
            tol = number_from(*it, "match_tol");
        std::vector<cx> omega;
        if (auto it = cfg.find("omega"); it != cfg.end())
            omega = points_from_json(*it, "omega");
        return run_classify_pencil_mode(opt, pencil, arc, tol, omega);
    }
    bad_field("mode", "expected arc or pencil");
}

// ---------------------------------------------------------------------------
// wprep

int run_wprep(const Options& opt) {
    BivariateModel psi = BivariateModel::from_function(
        cx(0.0, 0.0), 1.0, cx(0.0, 0.0), 2.0, [](cx z, cx w) { return w * w - z; });
    int nodes = opt.samples > 0 ? opt.samples : 128;
    double grid_radius = 0.04;
    double rho = 0.3;
    enum class Expect { none, w2_z, shifted_linear } expect = Expect::none;

    if (!opt.fixture.empty()) {
        if (opt.fixture == "w2-z") {
            expect = Expect::w2_z;
        } else if (opt.fixture == "shifted-linear") {
            psi = BivariateModel::from_function(cx(0.0, 0.0), 1.0, cx(0.0, 0.0), 2.0,
                                                [](cx z, cx w) { return (w - z) * (2.0 + w); });
            expect = Expect::shifted_linear;
        } else {
            bad_field("fixture", "unknown fixture '" + opt.fixture +
                                     "' (expected w2-z or shifted-linear)");
        }
    } else {
        json cfg = load_config(opt);
        check_keys(cfg, {"format_version", "psi", "grid_nodes", "grid_radius", "rho"});
        psi = bivariate_from_json(need(cfg, "psi"));
        if (auto it = cfg.find("grid_nodes"); it != cfg.end() && opt.samples <= 0)
            nodes = integer_from(*it, "grid_nodes");
        if (auto it = cfg.find("grid_radius"); it != cfg.end())
            grid_radius = number_from(*it, "grid_radius");
        if (auto it = cfg.find("rho"); it != cfg.end()) rho = number_from(*it, "rho");
        if (nodes < 2) bad_field("grid_nodes", "need at least 2");
        if (grid_radius <= 0.0) bad_field("grid_radius", "must be positive");
        if (rho <= 0.0) bad_field("rho", "must be positive");
    }

    std::vector<cx> grid = circle_grid(cx(0.0, 0.0), grid_radius, nodes);
    auto [pencil, cofactor] = swz::weier::weierstrass_prepare(psi, grid, rho);

    json report = base_report(opt, "wprep");
    json results = {{"degree", pencil.degree()},
                    {"grid_nodes", nodes},
                    {"grid_radius", grid_radius},
                    {"rho", rho}};
    int code = exit_pass;
    double coeff_tol = opt.tol > 0.0 ? opt.tol : 1e-8;

    if (expect == Expect::w2_z) {
        double e1 = 0.0, e0 = 0.0;
        for (size_t i = 0; i < grid.size(); ++i) {
            e1 = std::max(e1, std::abs(pencil.coefficient_samples()[i][1]));
            e0 = std::max(e0, std::abs(pencil.coefficient_samples()[i][0] + grid[i]));
        }
        double ce = 0.0;
        for (cx z : {cx(0.01, 0.0), cx(0.0, 0.012), cx(-0.008, 0.006)})
            for (cx w : {cx(0.05, 0.0), cx(-0.04, 0.03), cx(0.0, -0.06)})
                ce = std::max(ce, std::abs(cofactor(z, w) - 1.0));
        results["max_a1"] = e1;
        results["max_a0_plus_z"] = e0;
        results["max_cofactor_minus_1"] = ce;
        report["tolerances"] = {{"coefficients", coeff_tol}, {"cofactor", 1e-6}};
        if (e1 > coeff_tol || e0 > coeff_tol || ce > 1e-6) code = exit_fail;
    } else if (expect == Expect::shifted_linear) {
        double e0 = 0.0;
        for (size_t i = 0; i < grid.size(); ++i)
            e0 = std::max(e0, std::abs(pencil.coefficient_samples()[i][0] + grid[i]));
        double ce = 0.0;
        for (cx z : {cx(0.01, 0.0), cx(0.0, 0.012), cx(-0.008, 0.006)})
            for (cx w : {cx(0.05, 0.0), cx(-0.04, 0.03), cx(0.0, -0.06)})
                ce = std::max(ce, std::abs(cofactor(z, w) - (2.0 + w)));
        results["max_a0_plus_z"] = e0;
        results["max_cofactor_minus_2_plus_w"] = ce;
        report["tolerances"] = {{"coefficients", coeff_tol}, {"cofactor", coeff_tol}};
        if (pencil.degree() != 1 || e0 > coeff_tol || ce > coeff_tol) code = exit_fail;
    } else {
        report["tolerances"] = json::object();
    }
    report["results"] = std::move(results);
    fs::create_directories(opt.out);
    swz::io::write_json(opt.out / "wprep_pencil.json", swz::io::pencil_to_json(pencil));
    return finish(opt, "wprep", report, code);
}

// ---------------------------------------------------------------------------
// trace (monodromy)

int run_trace(const Options& opt) {
    MonicPolyPencil pencil = MonicPolyPencil::from_nodes(
        circle_grid(cx(0.0, 0.0), 1.2, 48), std::vector<std::vector<cx>>(48, {cx(0.0)}), 2.0);
    Path loop = polar_loop(cx(0.0, 0.0), 1.0, 24);
    std::string expect_type;  // "", "transposition", "3-cycle"

    if (!opt.fixture.empty()) {
        std::vector<cx> grid = circle_grid(cx(0.0, 0.0), 1.2, 48);
        std::vector<std::vector<cx>> coeff;
        if (opt.fixture == "w2-z") {
            for (cx z : grid) coeff.push_back({-z, cx(0.0, 0.0)});
            expect_type = "transposition";
        } else if (opt.fixture == "w3-z") {
            for (cx z : grid) coeff.push_back({-z, cx(0.0, 0.0), cx(0.0, 0.0)});
            expect_type = "3-cycle";
        } else {
            bad_field("fixture",
                      "unknown fixture '" + opt.fixture + "' (expected w2-z or w3-z)");
        }
        pencil = MonicPolyPencil::from_nodes(std::move(grid), std::move(coeff), 2.0);
    } else {
        json cfg = load_config(opt);
        check_keys(cfg, {"format_version", "pencil", "loop"});
        pencil = swz::io::pencil_from_json(
            swz::io::load_json(string_from(need(cfg, "pencil"), "pencil")));
        std::vector<cx> pts = points_from_json(need(cfg, "loop"), "loop");
        if (pts.size() < 3) bad_field("loop", "need at least 3 waypoints");
        if (std::abs(pts.front() - pts.back()) > 1e-12) pts.push_back(pts.front());
        loop = Path{std::move(pts), true};
    }

    std::vector<cx> roots = swz::core::monic_roots(pencil.slice(loop.pts.front()));
    std::sort(roots.begin(), roots.end(), [](cx a, cx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    std::vector<int> perm = swz::weier::monodromy(pencil, loop, roots);
    std::string cycles = cycle_string(perm);

    // cycle type: sorted lengths of the nontrivial cycles
    std::vector<int> lens;
    {
        std::vector<char> seen(perm.size(), 0);
        for (size_t i = 0; i < perm.size(); ++i) {
            if (seen[i]) continue;
            int len = 0;
            size_t j = i;
            while (!seen[j]) {
                seen[j] = 1;
                ++len;
                j = static_cast<size_t>(perm[j]);
            }
            if (len > 1) lens.push_back(len);
        }
        std::sort(lens.begin(), lens.end());
    }

    json report = base_report(opt, "trace");
    json jroots = json::array();
    for (cx r : roots) jroots.push_back({r.real(), r.imag()});
    report["results"] = {{"permutation", cycles},
                        {"images", perm},
                        {"cycle_lengths", lens},
                        {"base_roots", std::move(jroots)}};
    int code = exit_pass;
    if (expect_type == "transposition" && !(lens == std::vector<int>{2})) code = exit_fail;
    if (expect_type == "3-cycle" && !(lens == std::vector<int>{3})) code = exit_fail;
    return finish(opt, "trace", report, code);
}

// ---------------------------------------------------------------------------
// inner

int run_inner(const Options& opt) {
    json report = base_report(opt, "inner");
    double tol = opt.tol > 0.0 ? opt.tol : 1e-9;

    bool trace_mode = false;
    InnerFunctionSpec spec = atom_spec();
    CircleFunction data = CircleFunction::constant(8, cx(1.0, 0.0));

    if (!opt.fixture.empty()) {
        if (opt.fixture == "atom") {
            trace_mode = true;
        } else if (opt.fixture == "blaschke-outer") {
            auto bspec = InnerFunctionSpec::make({{cx(0.4, 0.0), 1}}, {});
            int n = opt.samples > 0 ? opt.samples : 4096;
            data = CircleFunction::sample(n, [&bspec](double t) {
                cx z = std::polar(1.0, t);
                return swz::mspace::eval_inner(bspec, z) * (2.0 + z);
            });
            if (opt.tol <= 0.0) tol = 1e-6;
        } else {
            bad_field("fixture", "unknown fixture '" + opt.fixture +
                                     "' (expected atom or blaschke-outer)");
        }
    } else {
        json cfg = load_config(opt);
        check_keys(cfg, {"format_version", "inner_spec", "trace"});
        bool has_spec = cfg.contains("inner_spec"), has_trace = cfg.contains("trace");
        if (has_spec == has_trace)
            bad_field("inner_spec/trace", "provide exactly one of them");
        if (has_spec) {
            spec = swz::io::inner_spec_from_json(
                swz::io::load_json(string_from(cfg["inner_spec"], "inner_spec")));
            trace_mode = true;
        } else {
            data = swz::io::read_trace_csv(string_from(cfg["trace"], "trace"));
            if (opt.tol <= 0.0) tol = 1e-6;
        }
    }

    int code = exit_pass;
    if (trace_mode) {
        int n = opt.samples > 0 ? opt.samples : 4096;
        auto [tht, masked] = swz::mspace::inner_trace(spec, n);
        double dev = 0.0;
        for (int k = 0; k < n; ++k) {
            if (is_masked(masked, k)) continue;
            dev = std::max(dev, std::abs(std::abs(tht[k]) - 1.0));
        }
        fs::create_directories(opt.out);
        swz::io::write_trace_csv(opt.out / "inner_trace.csv", tht);
        report["tolerances"] = {{"unimodularity", tol}};
        report["results"] = {{"n_samples", n},
                             {"masked", masked},
                             {"max_unimodularity_deviation", dev}};
        if (dev > tol) code = exit_fail;
    } else {
        auto res = swz::mspace::inner_outer_factorize(data);
        double dev = 0.0;
        for (int k = 0; k < data.size(); ++k) {
            bool near_floor = false;
            for (int f : res.floored) {
                double d = std::abs(data.angle(k) - data.angle(f));
                d = std::min(d, 2.0 * swz::pi - d);
                if (d < 0.5) near_floor = true;
            }
            if (!near_floor)
                dev = std::max(dev, std::abs(std::abs(res.inner_trace[k]) - 1.0));
        }
        cx outer0 = res.outer(cx(0.0, 0.0));
        report["tolerances"] = {{"unimodularity", tol}};
        report["results"] = {{"n_samples", data.size()},
                             {"floored", res.floored},
                             {"outer_at_0", {outer0.real(), outer0.imag()}},
                             {"max_unimodularity_deviation", dev}};
        if (dev > tol) code = exit_fail;
    }
    return finish(opt, "inner", report, code);
}

// ---------------------------------------------------------------------------
// ktheta

int run_ktheta(const Options& opt) {
    InnerFunctionSpec spec = atom_spec();
    int n = opt.samples > 0 ? opt.samples : 4096;
    double tol = opt.tol > 0.0 ? opt.tol : 1e-6;
    CircleFunction phi = CircleFunction::constant(8, cx(1.0, 0.0));

    auto kernel_trace = [&spec](int m, cx lambda) {
        auto [tht, masked] = swz::mspace::inner_trace(spec, m);
        auto tr = CircleFunction::constant(m, cx(0.0, 0.0));
        for (int k = 0; k < m; ++k)
            tr[k] = is_masked(masked, k) ? cx(1.0, 0.0) : kernel_ref(tr.point(k), spec, lambda);
        return tr;
    };

    if (!opt.fixture.empty()) {
        if (opt.fixture == "kernel") {
            phi = kernel_trace(n, cx(0.3, 0.0));
        } else if (opt.fixture == "z") {
            phi = CircleFunction::sample(n, [](double t) { return std::polar(1.0, t); });
        } else if (opt.fixture == "theta-z") {
            auto [tht, masked] = swz::mspace::inner_trace(spec, n);
            phi = CircleFunction::constant(n, cx(0.0, 0.0));
            for (int k = 0; k < n; ++k) phi[k] = tht[k] * phi.point(k);
        } else {
            bad_field("fixture", "unknown fixture '" + opt.fixture +
                                     "' (expected kernel, z or theta-z)");
        }
    } else {
        json cfg = load_config(opt);
        check_keys(cfg, {"format_version", "inner_spec", "phi"});
        spec = swz::io::inner_spec_from_json(
            swz::io::load_json(string_from(need(cfg, "inner_spec"), "inner_spec")));
        const json& jp = need(cfg, "phi");
        check_keys(jp, {"kind", "lambda", "path"});
        std::string kind = string_from(need(jp, "kind"), "phi.kind");
        if (kind == "kernel") {
            phi = kernel_trace(n, complex_from(need(jp, "lambda"), "phi.lambda"));
        } else if (kind == "identity") {
            phi = CircleFunction::sample(n, [](double t) { return std::polar(1.0, t); });
        } else if (kind == "trace") {
            phi = swz::io::read_trace_csv(string_from(need(jp, "path"), "phi.path"));
        } else {
            bad_field("phi.kind", "expected kernel, identity or trace");
        }
    }

    auto rep = swz::mspace::ktheta_membership(phi, spec);
    json report = base_report(opt, "ktheta");
    report["tolerances"] = {{"leak", tol}};
    report["results"] = {{"member", rep.member},
                        {"leak", rep.leak},
                        {"model_side_leak", rep.model_side_leak},
                        {"hardy_side_leak", rep.hardy_side_leak},
                        {"window_order", rep.window_order},
                        {"n_samples", phi.size()},
                        {"coefficient_1", {rep.raw_coefficient(1).real(),
                                           rep.raw_coefficient(1).imag()}}};
    int code = (rep.member && rep.leak <= tol) ? exit_pass : exit_fail;
    return finish(opt, "ktheta", report, code);
}

// ---------------------------------------------------------------------------
// nevanlinna

int run_nevanlinna(const Options& opt) {
    json report = base_report(opt, "nevanlinna");
    double tol = opt.tol > 0.0 ? opt.tol : 1e-5;

    if (opt.fixture == "corrupt") {
        int n = opt.samples > 0 ? opt.samples : 64;
        auto phi = CircleFunction::sample(n, [](double t) { return std::polar(1.0, t); });
        auto f2 = CircleFunction::sample(n, [](double t) { return cx(std::cos(t), 0.4); });
        auto f1 = CircleFunction::constant(n, cx(0.0, 0.0));
        for (int k = 0; k < n; ++k) f1[k] = std::conj(phi[k]) * f2[k];
        f1[7 % n] += cx(5.0, 0.0);
        double resid = swz::mspace::nevanlinna_certificate(f1, f2, phi);
        report["tolerances"] = {{"residual", tol}};
        report["results"] = {{"residual", resid}, {"n_samples", n}};
        return finish(opt, "nevanlinna", report, resid <= tol ? exit_pass : exit_fail);
    }

    InnerFunctionSpec spec = atom_spec();
    cx lambda(0.3, 0.0), alpha(1.5, 0.0);
    int taming_order = 3;
    double exclusion = 1e-2;
    int n = opt.samples > 0 ? opt.samples : 65536;

    if (!opt.fixture.empty()) {
        if (opt.fixture != "kernel-pipeline")
            bad_field("fixture", "unknown fixture '" + opt.fixture +
                                     "' (expected kernel-pipeline or corrupt)");
    } else {
        json cfg = load_config(opt);
        check_keys(cfg, {"format_version", "inner_spec", "lambda", "alpha", "taming_order",
                         "exclusion"});
        spec = swz::io::inner_spec_from_json(
            swz::io::load_json(string_from(need(cfg, "inner_spec"), "inner_spec")));
        lambda = complex_from(need(cfg, "lambda"), "lambda");
        alpha = complex_from(need(cfg, "alpha"), "alpha");
        if (auto it = cfg.find("taming_order"); it != cfg.end())
            taming_order = integer_from(*it, "taming_order");
        if (auto it = cfg.find("exclusion"); it != cfg.end())
            exclusion = number_from(*it, "exclusion");
    }

    AnalyticModel G = AnalyticModel::black_box(
        cx(0.0, 0.0), 2.5, [spec, lambda](cx z) { return kernel_ref(z, spec, lambda); });
    AnalyticModel phi_fn = swz::mspace::phi_aggregate(G, alpha, spec);

    auto [tht, masked] = swz::mspace::inner_trace(spec, n);
    auto phitr = CircleFunction::constant(n, cx(0.0, 0.0));
    for (int k = 0; k < n; ++k)
        phitr[k] = is_masked(masked, k) ? cx(1.0, 0.0) : phi_fn(phitr.point(k));

    auto mult = swz::mspace::shirokov_multiplier(spec, taming_order);
    auto prod = CircleFunction::constant(n, cx(0.0, 0.0));
    for (int k = 0; k < n; ++k) {
        if (is_masked(masked, k)) continue;
        prod[k] = mult.H(prod.point(k)) * tht[k] * std::conj(phitr[k]);
    }
    auto c = prod.spectrum();
    for (int m = -n / 2; m < 0; ++m) c[swz::spectrum_bin(m, n)] = cx(0.0, 0.0);
    auto f1 = CircleFunction::from_spectrum(c);
    auto f2 = CircleFunction::constant(n, cx(0.0, 0.0));
    for (int k = 0; k < n; ++k) {
        if (is_masked(masked, k)) continue;
        f2[k] = mult.H(f2.point(k)) * tht[k];
    }
    std::vector<char> keep(n, 1);
    for (int k = 0; k < n; ++k) {
        double t = 2.0 * swz::pi * k / n;
        double d = std::min(t, 2.0 * swz::pi - t);
        if (d < exclusion) keep[k] = 0;
    }
    for (int k : masked) keep[k] = 0;
    double resid = swz::mspace::nevanlinna_certificate(f1, f2, phitr, &keep);

    report["tolerances"] = {{"residual", tol}};
    report["results"] = {{"residual", resid},
                        {"n_samples", n},
                        {"alpha", {alpha.real(), alpha.imag()}},
                        {"lambda", {lambda.real(), lambda.imag()}},
                        {"taming_order", taming_order},
                        {"exclusion", exclusion},
                        {"lipschitz_H", mult.lipschitz_H},
                        {"lipschitz_H_theta", mult.lipschitz_H_theta}};
    return finish(opt, "nevanlinna", report, resid <= tol ? exit_pass : exit_fail);
}

// ---------------------------------------------------------------------------
// uv

int run_uv(const Options& opt) {
    AnalyticModel T = cusp_map();
    HalfDiskHarmonic u = HalfDiskHarmonic::from_coefficients({1.0, 0.5});
    HalfDiskHarmonic v = HalfDiskHarmonic::from_coefficients({1.0});
    double tol = opt.tol > 0.0 ? opt.tol : 1e-6;

    if (!opt.fixture.empty()) {
        if (opt.fixture != "uv-example")
            bad_field("fixture", "unknown fixture '" + opt.fixture + "' (expected uv-example)");
    } else {
        json cfg = load_config(opt);
        check_keys(cfg, {"format_version", "t_poly", "eta", "u", "v"});
        std::vector<cx> tc = points_from_json(need(cfg, "t_poly"), "t_poly");
        T = AnalyticModel::series(cx(0.0, 0.0), 4.0, std::move(tc));
        if (auto it = cfg.find("eta"); it != cfg.end()) {
            if (std::abs(number_from(*it, "eta") - 0.25) > 1e-12)
                bad_field("eta", "the example pipeline fixes eta = 0.25");
        }
        u = swz::io::halfdisk_from_json(swz::io::load_json(string_from(need(cfg, "u"), "u")));
        v = swz::io::halfdisk_from_json(swz::io::load_json(string_from(need(cfg, "v"), "v")));
    }

    auto tp = swz::harm::uv_cusp_example(T, u, v);
    ClassificationReport rep =
        swz::harm::uv_classify(tp.R, tp.A, tp.arc, cx(0.0, 0.0), tp.omega_samples);

    json report = base_report(opt, "uv");
    report["tolerances"] = {{"ratio_residual", tol}};
    report["results"] = {{"ratio_residual", tp.ratio_residual},
                        {"label", case_code(rep.label)},
                        {"label_name", swz::to_string(rep.label)},
                        {"residual", rep.residual},
                        {"notes", rep.notes},
                        {"n_arc_samples", tp.arc.size()}};
    sketch_arc(opt, "uv", tp.arc, tp.omega_samples, "case " + case_code(rep.label));
    int code = exit_pass;
    if (tp.ratio_residual > tol)
        code = exit_fail;
    else if (rep.label == CaseLabel::inconclusive)
        code = exit_inconclusive;
    return finish(opt, "uv", report, code);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schwarz function boundary laboratory"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--out", opt.out, "output directory for reports")->capture_default_str();
    app.add_option("--seed", opt.seed, "seed recorded in reports and used by randomized scans")
        ->capture_default_str();
    app.add_option("--samples", opt.samples, "sample count override (0 keeps defaults)");
    app.add_option("--tol", opt.tol, "tolerance override (0 keeps defaults)");
    std::string svg_flag = "on";
    app.add_option("--svg", svg_flag, "write SVG sketches (on/off)")
        ->check(CLI::IsMember({"on", "off"}));
    app.add_option("--fixture", opt.fixture, "built-in fixture name");
    app.add_option("--config", opt.config, "job config JSON path");

    struct Sub {
        const char* name;
        const char* desc;
        int (*run)(const Options&);
    };
    const Sub subs[] = {
        {"schwarz-verify", "check S(zeta) = conj(zeta) * factor on an arc", run_schwarz_verify},
        {"classify", "boundary case classification (arc or pencil mode)", run_classify},
        {"wprep", "split a bivariate function into pencil times cofactor", run_wprep},
        {"trace", "monodromy permutation of pencil roots along a loop", run_trace},
        {"inner", "inner function traces and inner-outer factorization", run_inner},
        {"ktheta", "model space membership by windowed spectral leak", run_ktheta},
        {"nevanlinna", "pullback residual for the multiplied projection", run_nevanlinna},
        {"uv", "harmonic ratio transplant on the cusp example", run_uv},
    };
    for (const Sub& s : subs) app.add_subcommand(s.name, s.desc)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : exit_input;
    }
    opt.svg_on = svg_flag == "on";
    if (opt.fixture.empty() == opt.config.empty()) {
        std::cerr << "input error: provide exactly one of --fixture or --config\n";
        return exit_input;
    }

    try {
        for (const Sub& s : subs)
            if (app.get_subcommand(s.name)->parsed()) return s.run(opt);
        std::cerr << "input error: no subcommand\n";
        return exit_input;
    } catch (const swz::input_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const swz::resolution_error& e) {
        std::cerr << "inconclusive: " << e.what() << '\n';
        return exit_inconclusive;
    } catch (const swz::error& e) {
        std::cerr << "rejected: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    }
}
