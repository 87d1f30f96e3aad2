#include "speclab/bounds.hpp"

#include "speclab/parallel.hpp"
#include "speclab/report.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace speclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::pair<EstimateId, std::string>>& names()
{
    static const std::vector<std::pair<EstimateId, std::string>> n{
        {EstimateId::clCLR, "clCLR"},     {EstimateId::KMW_my, "KMW_my"},   {EstimateId::KMW, "KMW"},
        {EstimateId::CKMW, "CKMW"},       {EstimateId::MV, "MV"},           {EstimateId::GrigTalk, "GrigTalk"},
        {EstimateId::Sol, "Sol"},         {EstimateId::GrigNad, "GrigNad"}, {EstimateId::LNS, "LNS"},
        {EstimateId::LNS2, "LNS2"},       {EstimateId::LNS3, "LNS3"},       {EstimateId::LNS4, "LNS4"},
        {EstimateId::LNS5, "LNS5"},       {EstimateId::Laptev, "Laptev"},   {EstimateId::RadMain, "RadMain"},
        {EstimateId::Lower10pi, "Lower10pi"}};
    return n;
}

// v ln v on {v >= 1}.
PointwiseMap vlogv_map()
{
    PointwiseMap m;
    m.fn = [](double v) { return v >= 1.0 ? v * std::log(v) : 0.0; };
    m.fn_log = [](LogReal v) {
        if (v.sign == 0 || v.lg <= 0.0)
            return LogReal{};
        return LogReal::exp_of(v.lg + std::log(v.lg));
    };
    m.klass = [](const Decay& f, EndKind where) -> std::optional<Decay> {
        int g = growth_sign(f, where);
        if (g < 0 || (g == 0 && f.K <= 1.0))
            return power(f, 2.0); // identically zero near the end; any integrable class will do
        if (g == 0)
            return Decay{f.K * std::log(f.K), 0.0, 0.0, 0.0};
        if (f.a != 0.0)
            return Decay{f.K * std::fabs(f.a), f.a, f.b + 1.0, f.c};
        if (f.b != 0.0)
            return Decay{f.K * std::fabs(f.b), 0.0, f.b, f.c + 1.0};
        return Decay{f.K, 0.0, 0.0, f.c + 1.0};
    };
    return m;
}

Value plain_integral(const Potential& V, Weight w)
{
    if (V.is_zero())
        return Value::finite(0.0);
    return weighted_integral(V, w);
}

Value b_norm_plane(const Potential& V)
{
    if (V.is_zero())
        return Value::finite(0.0);
    return orlicz_norm(AnnulusSample(V, -kInf, kInf), NFunction::B()).norm;
}

Value rearranged(const Potential& V)
{
    if (V.is_zero())
        return Value::finite(0.0);
    return rearranged_log_integral(V);
}

AnnularProfile seq(const Potential& V, SeqId id, std::optional<double> p = {})
{
    if (V.is_zero()) {
        AnnularProfile z;
        z.id = id;
        z.below.trend = z.above.trend = TailCertificate::Trend::Zero;
        return z;
    }
    return profile(V, id, std::nullopt, p);
}

// Sum of Values with unknown constants set to their display value.
struct Assembly {
    Value total = Value::finite(0.0);
    bool robust = true;
    std::vector<Ingredient> parts;

    void add(const std::string& name, Value v, double coeff = 1.0, bool robust_part = true)
    {
        parts.push_back({name, v, robust_part});
        robust = robust && robust_part;
        total = total + v.scaled(coeff);
    }
    void add(const std::string& name, const Verdict& v, double coeff = 1.0)
    {
        add(name, v.value, coeff, v.robust);
    }
};

ConstantEntry unknown(const std::string& s) { return {s, false, 1.0}; }

} // namespace

std::string to_string(EstimateId id)
{
    for (const auto& [k, s] : names())
        if (k == id)
            return s;
    return "?";
}

EstimateId estimate_from_string(const std::string& s)
{
    for (const auto& [k, n] : names())
        if (n == s)
            return k;
    throw ConfigError("unknown estimate id: " + s);
}

const std::vector<EstimateId>& all_estimates()
{
    static const std::vector<EstimateId> all = [] {
        std::vector<EstimateId> v;
        for (const auto& [k, s] : names())
            v.push_back(k);
        return v;
    }();
    return all;
}

bool needs_p(EstimateId id)
{
    return id == EstimateId::GrigNad || id == EstimateId::LNS3 || id == EstimateId::LNS4;
}

nlohmann::json to_json(const BoundReport& r)
{
    nlohmann::json j;
    j["estimate"] = to_string(r.id);
    put_value(j, "value", r.value);
    j["robust"] = r.robust;
    auto cs = nlohmann::json::array();
    for (const auto& c : r.constants) {
        if (c.known)
            cs.push_back({{"symbol", c.symbol}, {"status", "explicit"}, {"value", c.value}});
        else
            cs.push_back({{"symbol", c.symbol}, {"status", "unknown"}, {"display_value", c.value}});
    }
    j["constants"] = cs;
    auto ing = nlohmann::json::array();
    for (const auto& i : r.ingredients) {
        nlohmann::json e{{"name", i.name}, {"robust", i.robust}};
        put_value(e, "value", i.value);
        ing.push_back(e);
    }
    j["ingredients"] = ing;
    nlohmann::json pr{{"c_A", r.params.c_A}, {"c", r.params.c}};
    if (r.params.p)
        pr["p"] = *r.params.p;
    j["params"] = pr;
    if (!r.metadata.empty())
        j["metadata"] = r.metadata;
    return j;
}

Verdict rad_main_bound(const AnnularProfile& A)
{
    Verdict s = thresholded_sqrt_sum(A, 0.25);
    return {Value::finite(1.0) + s.value.scaled(4.0), s.robust};
}

Verdict rad_main_variant(const AnnularProfile& A)
{
    Verdict s = thresholded_sqrt_sum(A, 0.29);
    return {Value::finite(1.0) + s.value.scaled(3.04), s.robust};
}

Verdict rad_main_bound(const Potential& V) { return rad_main_bound(seq(V, SeqId::A)); }

LowerBound lower_bound_10pi(const AnnularProfile& A)
{
    Value k = count_at_least(A, 10.0 * kPi);
    return {k, k.scaled(1.0 / 3.0)};
}

LowerBound lower_bound_10pi(const Potential& V) { return lower_bound_10pi(seq(V, SeqId::A)); }

double phi_kappa(double kappa)
{
    double q = std::sqrt(4.0 * kappa + 1.0);
    double e = std::exp2(q);
    return kappa / (4.0 * kappa + 1.0) / (1.0 + q * (e + 1.0) / (e - 1.0));
}

PhiMax maximize_phi()
{
    auto r = boost::math::tools::brent_find_minima([](double k) { return -phi_kappa(k); }, 0.1, 20.0, 50);
    return {r.first, -r.second};
}

BoundReport evaluate(const Potential& V, EstimateId id, const BoundParams& params)
{
    if (needs_p(id) && (!params.p || !(*params.p > 1.0)))
        throw InvalidParameters(to_string(id) + " needs p > 1");
    BoundReport r;
    r.id = id;
    r.params = params;
    Assembly as;
    const double cA = params.c_A, c = params.c;
    auto A = [&] { return seq(V, SeqId::A); };
    auto sqrtA = [&](double thr) { return thresholded_sqrt_sum(A(), thr); };

    switch (id) {
    case EstimateId::clCLR:
        r.constants = {unknown("C")};
        as.add("B-norm of V on R^2", b_norm_plane(V));
        as.add("int V ln(1+|x|)", plain_integral(V, Weight::Log1p));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::MV:
        r.constants = {unknown("C")};
        as.add("int_{V>=1} V ln V",
               V.is_zero() ? Value::finite(0.0) : integrate_potential(V, vlogv_map(), Weight::One, -kInf, kInf));
        as.add("int V ln(2+|x|)", plain_integral(V, Weight::Log2p));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::KMW_my:
        r.constants = {unknown("C_6")};
        as.add("int V ln(2+|x|)", plain_integral(V, Weight::Log2p));
        as.add("int V_* ln_+(1/|x|)", rearranged(V));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::KMW:
        r.constants = {unknown("c_1"), unknown("c_2"), unknown("c_3")};
        as.add("int V_* ln_+(1/|x|)", rearranged(V));
        as.add("int V ln_+|x|", plain_integral(V, Weight::LogPlusAbs));
        as.add("int V", plain_integral(V, Weight::One));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::CKMW: {
        r.constants = {unknown("d_1"), unknown("d_2"), unknown("d_3")};
        Value pos = plain_integral(V, Weight::LogPlusAbs);
        Value neg = plain_integral(V, Weight::LogPlusInv);
        Value signed_log;
        if (pos.is_infinite() && neg.is_infinite())
            signed_log = Value::unknown("int V ln|x| is of the form inf - inf");
        else if (neg.is_infinite())
            signed_log = Value::finite(-kInf);
        else
            signed_log = pos + neg.scaled(-1.0);
        Value R = rearranged(V);
        as.add("int V_* ln_+(1/|x|)", R);
        as.parts.push_back({"int V ln|x| (signed)", signed_log, true});
        as.add("int V", plain_integral(V, Weight::One));
        if (signed_log.is_finite() && std::isinf(signed_log.value()))
            as.total = Value::unknown("second integral is -inf");
        else
            as.total = as.total + signed_log;
        as.total = as.total + Value::finite(1.0);
        double s3 = std::sqrt(3.0);
        r.metadata["conjectured"] = {{"2 pi d_1", 2.0}, {"2 pi d_2", 1.0}, {"2 pi d_3", 2.0 / s3}};
        if (R.is_finite() && signed_log.is_finite() && !std::isinf(signed_log.value())) {
            Value I = plain_integral(V, Weight::One);
            if (I.is_finite())
                r.metadata["conjectured_value"] =
                    1.0 + (2.0 * R.value() + signed_log.value() + 2.0 / s3 * I.value()) / (2.0 * kPi);
        }
        break;
    }
    case EstimateId::GrigTalk:
        r.constants = {unknown("C_7"), unknown("c")};
        as.add("4 sum_{A_n>c_A} sqrt(A_n)", sqrtA(cA), 4.0);
        as.add("sum_{scriptB_n>c} scriptB_n", thresholded_sum(seq(V, SeqId::ScriptB), c));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::Sol:
        r.constants = {unknown("C_8")};
        as.add("||boldA||_{1,inf}", weak_l1(seq(V, SeqId::BoldA)));
        as.add("sum boldB_n", sequence_sum(seq(V, SeqId::BoldB)));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::GrigNad:
        r.constants = {unknown("C_7"), unknown("c")};
        as.add("sum_{A_n>c_A} sqrt(A_n)", sqrtA(cA));
        as.add("sum_{B_n>c} B_n", thresholded_sum(seq(V, SeqId::Bp, params.p), c));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::LNS:
        r.constants = {unknown("C_9"), unknown("c")};
        as.add("4 sum_{A_n>c_A} sqrt(A_n)", sqrtA(cA), 4.0);
        as.add("sum_{D_n>c} D_n", thresholded_sum(seq(V, SeqId::D), c));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::LNS2:
        r.constants = {unknown("C_10")};
        as.add("||A||_{1,inf}", weak_l1(A()));
        as.add("sum D_n", sequence_sum(seq(V, SeqId::D)));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::LNS3:
        r.constants = {unknown("C_11")};
        as.add("||A||_{1,inf}", weak_l1(A()));
        as.add("int (int_S V^p)^{1/p} r dr", sequence_sum(seq(V, SeqId::Lp, params.p)));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::LNS4:
        r.constants = {unknown("C_12")};
        as.add("||A||_{1,inf}", weak_l1(A()));
        as.add("int (int_S |V_N|^p)^{1/p} r dr", sequence_sum(seq(V, SeqId::LpN, params.p)));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::LNS5:
        r.constants = {unknown("C_13")};
        as.add("||A||_{1,inf}", weak_l1(A()));
        as.add("sum D_n of V_N", sequence_sum(seq(V, SeqId::DN)));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::Laptev:
        r.constants = {unknown("C_23"), unknown("c")};
        as.add("4 sum_{A_n>c_A} sqrt(A_n)", sqrtA(cA), 4.0);
        as.add("sum_{G_n>c} G_n", thresholded_sum(seq(V, SeqId::G), c));
        as.total = as.total + Value::finite(1.0);
        break;
    case EstimateId::RadMain: {
        auto prof = A();
        Verdict m = rad_main_bound(prof);
        Verdict v = rad_main_variant(prof);
        as.parts.push_back({"1 + 4 sum_{A_n>1/4} sqrt(A_n)", m.value, m.robust});
        as.parts.push_back({"1 + 3.04 sum_{A_n>0.29} sqrt(A_n)", v.value, v.robust});
        as.total = m.value;
        r.constants = {{"4", true, 4.0}};
        break;
    }
    case EstimateId::Lower10pi: {
        LowerBound lb = lower_bound_10pi(A());
        as.parts.push_back({"card{n : A_n >= 10 pi}", lb.count, true});
        as.total = lb.bound;
        break;
    }
    }
    r.value = as.total;
    r.robust = as.robust;
    r.ingredients = std::move(as.parts);
    return r;
}

const std::vector<std::pair<EstimateId, EstimateId>>& implication_edges()
{
    using E = EstimateId;
    static const std::vector<std::pair<E, E>> edges{
        {E::LNS, E::LNS2},      {E::LNS2, E::LNS5},   {E::LNS5, E::LNS2},  {E::LNS2, E::LNS3},
        {E::LNS3, E::LNS4},     {E::LNS4, E::LNS3},   {E::LNS, E::GrigTalk}, {E::LNS2, E::Sol},
        {E::Laptev, E::GrigTalk}, {E::GrigTalk, E::Sol}, {E::Sol, E::clCLR}, {E::clCLR, E::KMW_my},
        {E::KMW_my, E::clCLR},  {E::KMW_my, E::KMW},  {E::KMW, E::KMW_my}, {E::GrigTalk, E::GrigNad}};
    return edges;
}

bool implies(EstimateId stronger, EstimateId weaker)
{
    if (stronger == weaker)
        return true;
    std::vector<EstimateId> stack{stronger};
    std::vector<EstimateId> seen{stronger};
    while (!stack.empty()) {
        EstimateId x = stack.back();
        stack.pop_back();
        for (const auto& [a, b] : implication_edges()) {
            if (a != x || std::find(seen.begin(), seen.end(), b) != seen.end())
                continue;
            if (b == weaker)
                return true;
            seen.push_back(b);
            stack.push_back(b);
        }
    }
    return false;
}

Comparison compare(const Potential& V, const std::vector<EstimateId>& ids, const BoundParams& params, bool strict)
{
    Comparison out;
    out.reports.resize(ids.size());
    parallel_for(ids.size(), [&](std::size_t i) { out.reports[i] = evaluate(V, ids[i], params); });
    for (const auto& x : out.reports) {
        for (const auto& y : out.reports) {
            if (x.id == y.id || !implies(x.id, y.id))
                continue;
            if (!x.robust || !y.robust)
                continue;
            if (x.value.is_infinite() && y.value.is_finite()) {
                out.inconsistencies.push_back(to_string(x.id) + " is infinite while the weaker " + to_string(y.id) +
                                              " is finite");
            }
        }
    }
    if (strict && !out.inconsistencies.empty())
        throw InconsistentVerdict(V.name() + ": " + out.inconsistencies.front());
    return out;
}

} // namespace speclab
