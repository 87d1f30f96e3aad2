#pragma once

#include "speclab/potentials.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace speclab {

enum class FamilyKind {
    DyadicU,          // U_0 = {e^-1 < |x| < e}, U_n = {e^{2^{n-1}} < |x| < e^{2^n}}, mirrored for n < 0
    ExponentialOmega, // Omega_n = {e^n < |x| < e^{n+1}}
    BoldOmega0,       // {|x| <= e}, single member n = 0
    LogIntervalI      // radial interval (e^n, e^{n+1})
};

struct AnnulusFamily {
    FamilyKind kind;
    std::pair<double, double> t_range(long n) const; // in t = ln r
    // Member containing radius e^t.
    long index_of(double t) const;
};

enum class SeqId {
    A,         // int_{U_0} V, int_{U_n} V |ln|x||
    BoldA,     // n >= 0: int_{|x|<=e} V |ln|x||, then A_n
    ScriptB,   // average B-norm on Omega_n
    BoldB,     // n >= 0: average B-norm on |x| <= e, then ScriptB
    Bp,        // (int_{Omega_n} V^p |x|^{2(p-1)})^{1/p}
    OmegaNorm, // n >= 1: plain B-norm on Omega_n
    D,         // int_{I_n} ||V(r,.)||_{B,S} r dr
    DN,        // D for V - V_R
    Lp,        // int_{I_n} (int_S V^p)^{1/p} r dr
    LpN,       // Lp for V - V_R
    G          // e^n int_S ||V(., th)||^{av}_{B,I_n} dth
};

std::string to_string(SeqId id);
SeqId seq_from_string(const std::string& s);
bool needs_p(SeqId id);
long first_index(SeqId id); // lowest admissible n (or a very negative number)

// Entries past the computed range behave like K rho^|n| |n|^beta (ln|n|)^gamma.
struct TailCertificate {
    enum class Trend { None, Zero, Vanishing, Constant, Growing, Infinite };
    Trend trend = Trend::None; // None: the sequence has no entries in this direction
    long from = 0;             // first index past the computed range (signed)
    double K = 0.0, rho = 1.0, beta = 0.0, gamma = 0.0;
    bool superexponential = false; // entries decay (or grow) faster than any rho^|n|
    std::string justification;

    bool summable() const;
    bool weak_l1_finite() const; // entries are O(1/|n|)
    double entry(long m) const;  // asymptotic value at |n| = m
};

struct AnnularProfile {
    SeqId id = SeqId::A;
    double p = 0.0;
    long n_low = 0, n_high = 0;
    std::map<long, Value> values;
    TailCertificate below, above;

    std::string to_csv() const;
};

// A_n of a log profile, A_0 = 2 pi int_{|t|<1} G, A_n = 2 pi int_{U_n} |t| G. Euler pieces and tails
// are integrated in closed form.
AnnularProfile profile_A(const LogProfile& G);

Value sequence_entry(const Potential& V, SeqId id, long n, std::optional<double> p = {});

// Range that covers the support of V, capped at `cap` members from the origin.
std::pair<long, long> default_range(const Potential& V, SeqId id, long cap = 12);

AnnularProfile profile(const Potential& V, SeqId id, std::optional<std::pair<long, long>> range = {},
                       std::optional<double> p = {});

// A verdict that does not depend on the threshold is robust.
struct Verdict {
    Value value;
    bool robust = true;
};

Value sequence_sum(const AnnularProfile& prof);
Value weak_l1(const AnnularProfile& prof);
Verdict thresholded_sum(const AnnularProfile& prof, double c, double power = 1.0);
Verdict thresholded_sqrt_sum(const AnnularProfile& prof, double c);
// Number of entries >= level (Infinite if infinitely many).
Value count_at_least(const AnnularProfile& prof, double level);

double weak_l1(const std::vector<double>& a);
double thresholded_sqrt_sum(const std::vector<double>& a, double c);
double thresholded_power_sum(const std::vector<double>& a, double c, double power);

// int_{I1} ||f(x1, .)||^{av}_{B,I2} dx1 for f constant on the cells of a grid; x and y are the
// cell edges, values(i, j) the value on [x_i, x_{i+1}] x [y_j, y_{j+1}], and the integral runs
// over the sub-rectangle [x_lo, x_hi] x [y_lo, y_hi] (edges must be grid lines).
double rect_mixed_norm(const std::vector<double>& x, const std::vector<double>& y,
                       const std::vector<std::vector<double>>& values, std::size_t x_lo, std::size_t x_hi,
                       std::size_t y_lo, std::size_t y_hi);

} // namespace speclab
