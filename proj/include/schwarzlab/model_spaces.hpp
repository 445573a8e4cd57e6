#pragma once

#include "schwarzlab/schwarz.hpp"

#include <functional>
#include <string>
#include <vector>

namespace swz {

// finite Blaschke + finitely many point masses on the circle; enough data to
// evaluate theta = B * exp(-sum a_j (zeta_j + z)/(zeta_j - z)) anywhere off
// the atoms and the reflected Blaschke poles
struct InnerFunctionSpec {
    struct Zero {
        cx position{};
        int multiplicity = 1;
    };
    struct Atom {
        cx position{1.0, 0.0};  // on the unit circle
        double mass = 1.0;      // > 0
    };

    std::vector<Zero> zeros;
    std::vector<Atom> atoms;

    // validates |zero| < 1, |atom| = 1 (to 1e-12, then snapped), mass > 0
    static InnerFunctionSpec make(std::vector<Zero> zeros, std::vector<Atom> atoms);
};

// N equispaced unit-circle samples, N a power of two; the spectral side is the
// normalized DFT, so coefficient m of e^{imt} sits in bin (m mod N)
class CircleFunction {
public:
    static CircleFunction from_samples(std::vector<cx> samples);
    static CircleFunction constant(int n, cx value);
    static CircleFunction sample(int n, const std::function<cx(double)>& f);

    int size() const { return static_cast<int>(v_.size()); }
    double angle(int k) const { return 2.0 * pi * k / size(); }
    cx point(int k) const;  // e^{i t_k}
    const std::vector<cx>& samples() const { return v_; }
    cx& operator[](int k) { return v_[k]; }
    const cx& operator[](int k) const { return v_[k]; }

    // c_m = (1/N) sum_k f_k e^{-i m t_k}; inverse of from_spectrum
    std::vector<cx> spectrum() const;
    static CircleFunction from_spectrum(const std::vector<cx>& coeff);

private:
    explicit CircleFunction(std::vector<cx> v) : v_(std::move(v)) {}
    std::vector<cx> v_;
};

// signed frequency -> DFT bin
int spectrum_bin(int m, int n);

namespace mspace {

// theta(z); defined for any z away from atoms and reflected Blaschke poles,
// which makes the raw formula its own continuation across the circle
cx eval_inner(const InnerFunctionSpec& spec, cx z);

// f~(z) = conj(f(1/conj(z))); involution exchanging the disk and its exterior
std::function<cx(cx)> tilde(std::function<cx(cx)> f);

// grid trace of theta; exact atom hits get a unimodular placeholder and are
// listed in `masked` (a radial-limit 0 would poison log-modulus integrals)
struct InnerTrace {
    CircleFunction trace;
    std::vector<int> masked;
};
InnerTrace inner_trace(const InnerFunctionSpec& spec, int n, cx placeholder = cx(1.0, 0.0));

// Herglotz exponential of log-modulus; positive at 0, zero-free in the disk
AnalyticModel outer_from_modulus(const CircleFunction& mod);

struct FactorizationResult {
    CircleFunction inner_trace;
    AnalyticModel outer;
    std::vector<int> floored;  // samples whose modulus hit the 1e-12 floor
};
FactorizationResult inner_outer_factorize(const CircleFunction& trace);

// spectral membership of phi in K_theta = H^2 ∩ theta conj(H0^2).
// Both half-tests are run on a windowed trace: W = prod_j |1 - z conj(zeta_j)|^{2p}
// (p = 3 per atom) vanishes at the atoms and confines its own spectrum to
// [-pA, pA], so the aliased tail of theta's slowly decaying coefficients is
// annihilated instead of drowning true members. With no atoms W == 1 and the
// test reduces to the plain nonnegative-frequency mass.
struct MembershipReport {
    bool member = false;
    double leak = 0.0;             // max of the two windowed leaks below
    double model_side_leak = 0.0;  // mass of W conj(theta) phi at frequencies >= pA
    double hardy_side_leak = 0.0;  // mass of W phi at frequencies < -pA
    int window_order = 0;          // pA: top frequency of the window
    std::vector<cx> raw_spectrum;  // unwindowed spectrum of conj(theta) phi
    cx pairing_coefficient{};      // raw 0-frequency coefficient of theta conj(phi)
    cx raw_coefficient(int m) const;
};
MembershipReport ktheta_membership(const CircleFunction& phi, const InnerFunctionSpec& spec);

// phi(z) = (G(z) - G(alpha))/(z - alpha), |alpha| > 1, with the removable
// value G'(alpha) patched in
AnalyticModel phi_aggregate(const AnalyticModel& G, cx alpha, const InnerFunctionSpec& spec);

// scans alpha in (1,2) and returns the first aggregate certified univalent on
// the disk minus thin wedges at the atoms
struct AlphaScanResult {
    cx alpha{};
    int index = -1;
    UnivalenceEvidence certificate;
    AnalyticModel aggregate;
};
AlphaScanResult scan_alpha(const AnalyticModel& G, const InnerFunctionSpec& spec,
                           int n_grid = 64);

// H(z) = prod_j (1 - z/zeta_j)^N for an atoms-only spec; H and H theta stay
// Lipschitz on the closed disk for N >= 3
struct MultiplierReport {
    AnalyticModel H;
    double lipschitz_H = 0.0;
    double lipschitz_H_theta = 0.0;
    int grid = 0;
};
MultiplierReport shirokov_multiplier(const InnerFunctionSpec& spec, int taming_order,
                                     int grid = 4096);

// max_k |f1_k - conj(phi_k) f2_k|; `keep`, when given, masks samples out
double nevanlinna_certificate(const CircleFunction& f1, const CircleFunction& f2,
                              const CircleFunction& phi,
                              const std::vector<char>* keep = nullptr);

}  // namespace mspace
}  // namespace swz
