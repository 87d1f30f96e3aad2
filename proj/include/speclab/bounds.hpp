#pragma once

#include "speclab/partition.hpp"
#include "speclab/potentials.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace speclab {

enum class EstimateId {
    clCLR,
    KMW_my,
    KMW,
    CKMW,
    MV,
    GrigTalk,
    Sol,
    GrigNad,
    LNS,
    LNS2,
    LNS3,
    LNS4,
    LNS5,
    Laptev,
    RadMain,
    Lower10pi
};

std::string to_string(EstimateId id);
EstimateId estimate_from_string(const std::string& s);
const std::vector<EstimateId>& all_estimates();
bool needs_p(EstimateId id);

struct BoundParams {
    double c_A = 0.25;  // threshold for the sqrt(A_n) sums
    double c = 0.046;   // threshold for the B/D/G/B_p sums
    std::optional<double> p;
};

struct ConstantEntry {
    std::string symbol;
    bool known = false;
    double value = 1.0; // display value for unknown constants
};

struct Ingredient {
    std::string name;
    Value value;
    bool robust = true;
};

struct BoundReport {
    EstimateId id = EstimateId::RadMain;
    Value value;        // with unknown constants set to 1
    bool robust = true; // finiteness does not depend on the thresholds
    std::vector<ConstantEntry> constants;
    std::vector<Ingredient> ingredients;
    BoundParams params;
    nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json to_json(const BoundReport& r);

BoundReport evaluate(const Potential& V, EstimateId id, const BoundParams& params = {});

// 1 + 4 sum_{A_n > 1/4} sqrt(A_n), and the variant 1 + 3.04 sum_{A_n > 0.29} sqrt(A_n).
Verdict rad_main_bound(const AnnularProfile& A);
Verdict rad_main_variant(const AnnularProfile& A);
Verdict rad_main_bound(const Potential& V);

struct LowerBound {
    Value count; // card{n : A_n >= 10 pi}
    Value bound; // count / 3
};
LowerBound lower_bound_10pi(const AnnularProfile& A);
LowerBound lower_bound_10pi(const Potential& V);

double phi_kappa(double kappa);
struct PhiMax {
    double kappa;
    double phi;
};
PhiMax maximize_phi();

// Direct implications X => Y: finiteness of the right-hand side of Y forces that of X.
const std::vector<std::pair<EstimateId, EstimateId>>& implication_edges();
bool implies(EstimateId stronger, EstimateId weaker);

struct Comparison {
    std::vector<BoundReport> reports;
    std::vector<std::string> inconsistencies;
};

// Throws InconsistentVerdict when a robust verdict contradicts the diagram and `strict` is set.
Comparison compare(const Potential& V, const std::vector<EstimateId>& ids, const BoundParams& params = {},
                   bool strict = true);

} // namespace speclab
