#include "schwarzlab/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "schwarzlab/errors.hpp"

namespace swz::io {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& name, const std::string& why) {
    throw input_error("field '" + name + "': " + why);
}

const json& need(const json& j, const char* name) {
    if (!j.is_object()) bad_field(name, "parent is not an object");
    auto it = j.find(name);
    if (it == j.end()) bad_field(name, "missing");
    return *it;
}

void check_version(const json& j) {
    const json& v = need(j, "format_version");
    if (!v.is_number_integer() || v.get<int>() != format_version)
        bad_field("format_version", "expected " + std::to_string(format_version));
}

cx complex_from(const json& j, const char* name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        bad_field(name, "expected [re, im]");
    return cx(j[0].get<double>(), j[1].get<double>());
}

json complex_to(cx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json arc_to_json(const BoundaryArc& arc) {
    json samples = json::array();
    for (const cx& z : arc.samples) samples.push_back(complex_to(z));
    return json{{"format_version", format_version},
                {"samples", std::move(samples)},
                {"base_index", arc.base_index},
                {"positively_oriented", arc.positively_oriented}};
}

BoundaryArc arc_from_json(const json& j) {
    check_version(j);
    const json& samples = need(j, "samples");
    if (!samples.is_array() || samples.empty()) bad_field("samples", "expected a nonempty array");
    std::vector<cx> pts;
    pts.reserve(samples.size());
    for (const json& s : samples) pts.push_back(complex_from(s, "samples"));
    const json& bi = need(j, "base_index");
    if (!bi.is_number_integer()) bad_field("base_index", "expected an integer");
    int base = bi.get<int>();
    if (base < 0 || base >= static_cast<int>(pts.size()))
        bad_field("base_index", "out of range");
    bool oriented = true;
    if (auto it = j.find("positively_oriented"); it != j.end()) {
        if (!it->is_boolean()) bad_field("positively_oriented", "expected a boolean");
        oriented = it->get<bool>();
    }
    return BoundaryArc::from_samples(std::move(pts), base, oriented);
}

json inner_spec_to_json(const InnerFunctionSpec& spec) {
    json zeros = json::array();
    for (const auto& z : spec.zeros)
        zeros.push_back(json::array({z.position.real(), z.position.imag(), z.multiplicity}));
    json atoms = json::array();
    for (const auto& a : spec.atoms)
        atoms.push_back(json::array({a.position.real(), a.position.imag(), a.mass}));
    return json{{"format_version", format_version},
                {"zeros", std::move(zeros)},
                {"atoms", std::move(atoms)}};
}

InnerFunctionSpec inner_spec_from_json(const json& j) {
    check_version(j);
    std::vector<InnerFunctionSpec::Zero> zeros;
    std::vector<InnerFunctionSpec::Atom> atoms;
    const json& jz = need(j, "zeros");
    if (!jz.is_array()) bad_field("zeros", "expected an array");
    for (const json& e : jz) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number() || !e[1].is_number())
            bad_field("zeros", "expected [re, im, mult]");
        if (!e[2].is_number_integer()) bad_field("zeros", "multiplicity must be an integer");
        zeros.push_back({cx(e[0].get<double>(), e[1].get<double>()), e[2].get<int>()});
    }
    const json& ja = need(j, "atoms");
    if (!ja.is_array()) bad_field("atoms", "expected an array");
    for (const json& e : ja) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number() || !e[1].is_number() ||
            !e[2].is_number())
            bad_field("atoms", "expected [re, im, mass]");
        atoms.push_back({cx(e[0].get<double>(), e[1].get<double>()), e[2].get<double>()});
    }
    try {
        return InnerFunctionSpec::make(std::move(zeros), std::move(atoms));
    } catch (const error& e) {
        bad_field("zeros/atoms", e.what());
    }
}

json pencil_to_json(const MonicPolyPencil& pencil) {
    json grid = json::array();
    for (const cx& z : pencil.grid()) grid.push_back(complex_to(z));
    json coeff = json::array();
    for (const auto& node : pencil.coefficient_samples()) {
        json row = json::array();
        for (const cx& c : node) row.push_back(complex_to(c));
        coeff.push_back(std::move(row));
    }
    return json{{"format_version", format_version},
                {"degree", pencil.degree()},
                {"rho", pencil.rho()},
                {"grid", std::move(grid)},
                {"coefficients", std::move(coeff)}};
}

MonicPolyPencil pencil_from_json(const json& j) {
    check_version(j);
    const json& jg = need(j, "grid");
    if (!jg.is_array() || jg.empty()) bad_field("grid", "expected a nonempty array");
    std::vector<cx> grid;
    for (const json& e : jg) grid.push_back(complex_from(e, "grid"));
    const json& jr = need(j, "rho");
    if (!jr.is_number()) bad_field("rho", "expected a number");
    const json& jd = need(j, "degree");
    if (!jd.is_number_integer()) bad_field("degree", "expected an integer");
    int degree = jd.get<int>();
    const json& jc = need(j, "coefficients");
    if (!jc.is_array() || jc.size() != grid.size())
        bad_field("coefficients", "expected one row per grid node");
    std::vector<std::vector<cx>> coeff;
    for (const json& row : jc) {
        if (!row.is_array() || static_cast<int>(row.size()) != degree)
            bad_field("coefficients", "expected one entry per degree");
        std::vector<cx> r;
        for (const json& e : row) r.push_back(complex_from(e, "coefficients"));
        coeff.push_back(std::move(r));
    }
    try {
        return MonicPolyPencil::from_nodes(std::move(grid), std::move(coeff),
                                           jr.get<double>());
    } catch (const error& e) {
        bad_field("grid/coefficients", e.what());
    }
}

json halfdisk_to_json(const HalfDiskHarmonic& u) {
    return json{{"format_version", format_version}, {"coefficients", u.coefficients()}};
}

HalfDiskHarmonic halfdisk_from_json(const json& j) {
    check_version(j);
    const json& jc = need(j, "coefficients");
    if (!jc.is_array() || jc.empty()) bad_field("coefficients", "expected a nonempty array");
    std::vector<double> c;
    for (const json& e : jc) {
        if (!e.is_number()) bad_field("coefficients", "expected numbers");
        c.push_back(e.get<double>());
    }
    try {
        return HalfDiskHarmonic::from_coefficients(std::move(c));
    } catch (const error& e) {
        bad_field("coefficients", e.what());
    }
}

void write_trace_csv(const std::filesystem::path& path, const CircleFunction& f) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open for writing: " + path.string());
    out << "t,re,im\n";
    char line[96];
    for (int k = 0; k < f.size(); ++k) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", f.angle(k), f[k].real(),
                      f[k].imag());
        out << line;
    }
}

CircleFunction read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,re,im", 0) != 0)
        throw input_error("trace CSV: missing 't,re,im' header in " + path.string());
    std::vector<cx> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t = 0.0, re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &t, &re, &im) != 3)
            throw input_error("trace CSV: malformed row '" + line + "'");
        samples.emplace_back(re, im);
    }
    try {
        return CircleFunction::from_samples(std::move(samples));
    } catch (const error& e) {
        throw input_error(std::string("trace CSV: ") + e.what());
    }
}

void write_match_csv(const std::filesystem::path& path, const MatchTable& table) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open for writing: " + path.string());
    out << "index,zeta_re,zeta_im,matched,residuals\n";
    char buf[96];
    for (size_t i = 0; i < table.zeta.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,", i, table.zeta[i].real(),
                      table.zeta[i].imag());
        out << buf;
        const auto& ids = table.matched[i];
        for (size_t k = 0; k < ids.size(); ++k)
            out << (k ? ";" : "") << ids[k];
        out << ',';
        for (size_t k = 0; k < ids.size(); ++k) {
            double r = std::abs(table.branch_values[i][ids[k]] - std::conj(table.zeta[i]));
            std::snprintf(buf, sizeof(buf), "%s%.6g", k ? ";" : "", r);
            out << buf;
        }
        out << '\n';
    }
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw input_error("malformed JSON in " + path.string());
    return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace swz::io
