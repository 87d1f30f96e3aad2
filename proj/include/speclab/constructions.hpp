#pragma once

#include "speclab/bounds.hpp"
#include "speclab/potentials.hpp"
#include "speclab/spectral1d.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace speclab {

// Increasing coupling sequence alpha_k, k >= 0, held through the complements c_k = 1 - alpha_k.
//   pow:q    c_k = q^-k
//   gauss:q  c_k = q^-(k^2)
//   list:x0,x1,...  alpha_k given directly
struct AlphaSequence {
    std::string spec;
    std::function<double(long)> complement;
    long length = -1; // number of terms, -1 when infinite

    static AlphaSequence parse(const std::string& spec);
    double alpha(long k) const { return 1.0 - complement(k); }
};

struct ConstructionParams {
    int N = 3;                        // alpha1_i
    double a1 = 1.0;                  // first junction, in t = ln r
    int K = 10;                       // pieces kept for alpha1_ii / alpha1_iii
    std::string alpha_seq;            // default pow:2 for alpha1_ii, pow:4 for alpha1_iii
    std::optional<double> alpha0;     // alpha1_ii, default alpha_1 / 2
    std::vector<long> targets;        // alpha1_ii N_k, default N_k = k
    std::optional<long> k0;           // alpha1_iii, default the smallest admissible
    bool unchecked = false;           // alpha1_iii: build even if the k0 condition fails
    double coupling = 0.05;           // grig_radial
    std::string psi = "slog:0.5";     // llogl_sharpness: B, power:p or slog:q (s ln^q(1+s))
    int disks = 8;                    // llogl_sharpness
    double r0 = 1.0;                  // llogl_sharpness: W bounded on B(0, r0)
    double W_bound = 1.0;
    std::optional<double> p;          // exponent for the estimates that need one
};

enum class ClaimStatus { Pass, Fail, Inconclusive };
std::string to_string(ClaimStatus s);

struct ClaimResult {
    std::string name;
    ClaimStatus status = ClaimStatus::Inconclusive;
    std::string detail;
    nlohmann::json data = nlohmann::json::object();
};

struct VerifyBudget {
    int doublings = 12;    // cutoff doublings allowed for divergence evidence
    double below = 1e-3;   // alpha = 1 - below for counts just under the critical coupling
    double above = 0.05;   // alpha = 1 + above for divergence
};

struct Claim {
    std::string name;
    std::function<ClaimResult(const VerifyBudget&)> check;
};

struct NamedConstruction {
    std::string id;
    nlohmann::json params = nlohmann::json::object();
    std::optional<Potential> potential;  // absent when radii leave double range
    std::optional<LogProfile> profile;
    std::vector<double> log_junctions;   // ln a_k, k = 1, 2, ...
    nlohmann::json data = nlohmann::json::object();
    std::vector<Claim> claims;
    std::vector<std::string> warnings;
};

const std::vector<std::string>& construction_ids();

NamedConstruction build(const std::string& id, const ConstructionParams& params = {});

// alpha1_iii without the k0 check; the violated condition is recorded in warnings.
NamedConstruction build_alpha1_iii_unchecked(const ConstructionParams& params);

// sum_{k >= k0-1} c_{k+1}/(c_k - c_{k+1}); Infinite when the terms do not decay.
Value k0_sum(const AlphaSequence& seq, long k0);

// Potential of a construction by name, for builtin:NAME on the command line.
Potential builtin_potential(const std::string& name, const ConstructionParams& params = {});

// Config text of the generated potential (ConfigError when the construction has none).
std::string export_config(const NamedConstruction& c);

struct ClaimReport {
    std::string id;
    std::vector<ClaimResult> results;
    std::size_t passed() const;
    std::size_t failed() const;
};

ClaimReport verify_claims(const NamedConstruction& c, const VerifyBudget& budget = {});
nlohmann::json to_json(const ClaimReport& r);

} // namespace speclab
