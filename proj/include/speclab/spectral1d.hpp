#pragma once

#include "speclab/potentials.hpp"
#include "speclab/value.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace speclab {

// Coupling constant alpha, optionally carried by its complement 1 - alpha so that
// alpha*(1+eta) - 1 keeps full precision when alpha is within rounding of 1.
struct Coupling {
    double alpha = 1.0;
    std::optional<double> complement;

    static Coupling of(double a) { return {a, std::nullopt}; }
    static Coupling from_complement(double c) { return {1.0 - c, c}; }
    double one_minus() const { return complement ? *complement : 1.0 - alpha; }
    // alpha*(1+eta) - 1
    double excess(double eta) const { return eta - one_minus() * (1.0 + eta); }
};

// -u'' - alpha*W u on [a, b].
struct SturmProblem {
    enum class BC { Dirichlet, Neumann };
    std::function<double(double)> W;
    double a = 0.0, b = 1.0;
    BC left = BC::Dirichlet, right = BC::Dirichlet;
};

struct EigencountResult {
    Value count;              // integer-valued, or Infinite, or Unknown when lower != upper
    long lower = 0, upper = 0;
    std::string method;       // closed_form, pruefer, mode_sum
    std::vector<double> cutoffs;
    int m_max = 0;
    struct Mode {
        int m;
        long lower, upper;
        bool infinite;
    };
    std::vector<Mode> modes;
    std::string justification;

    bool exact() const { return count.is_finite(); }
};

nlohmann::json to_json(const EigencountResult& r);

// Lemma-Dirichlet closed form for beta/t^2 on [a, b].
long dirichlet_count(double a, double b, double beta);

EigencountResult pruefer_count(const SturmProblem& p, double alpha);

// Mode-m problem on the line in t = ln r for a log profile:
// int |u'|^2 + m^2|u|^2 - alpha G|u|^2 dt. With s_cut the line is truncated at s = ln t = s_cut
// and the Dirichlet/Neumann counts there are returned as the bracket.
EigencountResult mode_count(const LogProfile& G, Coupling alpha, int m,
                            std::optional<double> s_cut = std::nullopt);

// N_0 + 2 sum_{m>=1} N_m, modes with m^2 >= alpha sup G dropped.
EigencountResult radial_eigencount(const LogProfile& G, Coupling alpha);
EigencountResult radial_eigencount(const Potential& V, double alpha);

// Zeros in (e^{s_a}, e^{s_b}) of the m = 0 solution vanishing at t = e^{s_a}.
long interval_zero_count(const LogProfile& G, Coupling alpha, double s_a, double s_b);

// |u(x)|^2/|x| <= C (int_a^b |u'|^2 + kappa int_a^b |u|^2/t^2), 0 < a < b.
struct SharpSobolev {
    double kappa, a, b;

    double C() const;                 // max over x, attained at x = a
    double C_at(double x) const;      // C(kappa; x)
    double extremizer(double x, double t) const;
    double extremizer_derivative(double x, double t) const;
    double rayleigh(double x) const;  // of the extremizer, by quadrature
};

// |u(x)|^2 <= C0 ((b-a) int |u'|^2 + kappa/(b-a) int |u|^2).
struct SharpSobolev0 {
    double kappa, a, b;

    double C0() const;                // coth(sqrt kappa)/sqrt kappa, at x = a and x = b
    double C0_at(double x) const;
    double extremizer(double x, double t) const;
    double extremizer_derivative(double x, double t) const;
    double rayleigh(double x) const;
};

// Discrete maximisation of the Rayleigh ratio over piecewise linear functions on n nodes.
// Returns the maximum and the node where it is attained.
struct GridMax {
    double value;
    double x;
};
GridMax grid_rayleigh_max(const SharpSobolev& s, int n);
GridMax grid_rayleigh_max(const SharpSobolev0& s, int n);

} // namespace speclab
