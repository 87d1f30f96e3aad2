#pragma once

#include "speclab/decay.hpp"
#include "speclab/logreal.hpp"
#include "speclab/quadrature.hpp"
#include "speclab/value.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace speclab {

// Even convex Young function. Power(p) is normalised as |s|^p / p so that its partner is
// Power(q), 1/p + 1/q = 1, exactly.
class NFunction {
public:
    enum class Kind { ExpA, LLogLB, Power, Custom };

    static NFunction A(); // e^|s| - 1 - |s|
    static NFunction B(); // (1+|s|) ln(1+|s|) - |s|
    static NFunction power(double p);
    static NFunction custom(std::string name, Fn eval);

    Kind kind() const { return kind_; }
    double exponent() const { return p_; }
    const std::string& name() const { return name_; }

    double operator()(double s) const;
    double derivative(double s) const; // right derivative at |s|
    NFunction complementary() const;

    // Class of Psi(k f) from the class of f. Empty when Psi(k f) blows up faster than any
    // power (then it is integrable nowhere near the endpoint).
    std::optional<Decay> compose(const Decay& f, double k, EndKind where) const;

    // Evenness, Psi(0) = 0, convexity and monotonicity on a grid.
    bool spot_check() const;

private:
    Kind kind_ = Kind::LLogLB;
    double p_ = 0.0;
    std::string name_;
    Fn custom_;
    std::shared_ptr<const NFunction> partner_; // Custom only, computed lazily
};

double ln_plus(double x);

// Pointwise map h applied to |f| together with its action on asymptotic classes.
struct PointwiseMap {
    std::function<double(double)> fn;
    std::function<LogReal(LogReal)> fn_log; // same map, safe for arguments near underflow
    std::function<std::optional<Decay>(const Decay&, EndKind)> klass;
};

PointwiseMap psi_map(const NFunction& psi, double k);
PointwiseMap power_map(double p);
PointwiseMap unit_map(); // h = 1, integrates the measure

// A finite-measure domain together with a nonnegative integrand f.
class Sample {
public:
    virtual ~Sample() = default;
    virtual double measure() const = 0;
    // int h(|f|) dmu, Infinite when the class test fails.
    virtual Value integrate(const PointwiseMap& h) const = 0;
};

// Piecewise-constant f: value v_i on a cell of measure m_i.
class CellSample final : public Sample {
public:
    CellSample(std::vector<double> values, std::vector<double> measures);
    double measure() const override;
    Value integrate(const PointwiseMap& h) const override;
    const std::vector<double>& values() const { return v_; }
    const std::vector<double>& measures() const { return m_; }

private:
    std::vector<double> v_, m_;
};

// Integration chart for one smooth piece. The physical variable rho (a radius or an angle)
// carries the measure scale * rho^jac d rho.
//   Linear: x = rho - rho0, the distance from rho0 (a singular lower end needs lo = 0).
//   Log:    x = ln rho (lo may be -inf for rho -> 0, hi may be +inf).
struct Chart1D {
    enum class Kind { Linear, Log };
    Kind kind = Kind::Linear;
    double lo = 0.0, hi = 1.0;
    double rho0 = 0.0;
    double jac = 0.0;
    double scale = 1.0;
};

// int g(x) dmu over the chart. lo_cls is the class of g at a singular lower end (Linear, in the
// distance) or as rho -> 0 (Log); hi_cls is its class as rho -> infinity. A Linear lower end is
// singular iff lo_cls is given.
Value integrate_chart(const Chart1D& c, const std::function<LogReal(double)>& g,
                      const std::optional<Decay>& lo_cls, const std::optional<Decay>& hi_cls);

// Nonnegative f on one chart, with the classes of f at the singular ends.
struct Piece {
    Chart1D chart;
    std::function<LogReal(double)> f;
    std::optional<Decay> lo_class;
    std::optional<Decay> hi_class;
};

class FunctionSample final : public Sample {
public:
    explicit FunctionSample(std::vector<Piece> pieces, std::optional<double> measure = {});
    double measure() const override;
    Value integrate(const PointwiseMap& h) const override;
    const std::vector<Piece>& pieces() const { return pieces_; }

private:
    std::vector<Piece> pieces_;
    double measure_;
};

Value integrate_piece(const Piece& p, const PointwiseMap& h);

struct NormResult {
    Value norm;
    double bracket_lo = 0.0, bracket_hi = 0.0; // Luxemburg bisection bracket, or dual minimiser k
};

// inf{kappa : int Psi(f/kappa) <= 1}
NormResult luxemburg_norm(const Sample& f, const NFunction& psi);
// inf_k (1/k)(1 + int Psi(k f))
NormResult orlicz_norm(const Sample& f, const NFunction& psi);
// inf_k (1/k)(mu + int Psi(k f))
NormResult average_norm(const Sample& f, const NFunction& psi);
// inf_k (1/k)(level + int Psi(k f)); orlicz and average are level = 1 and level = mu.
NormResult dual_norm(const Sample& f, const NFunction& psi, double level);

// Direct maximisation of sum m_i f_i g_i over g >= 0 with sum m_i Phi(g_i) <= level, Phi the
// complementary function, by a scan of the Lagrange multiplier.
double dual_norm_bruteforce(const CellSample& f, const NFunction& psi, double level);

struct EmbeddingConstant {
    double M = 0.0;  // m^{1/p}
    double t_p = 0.0;
    double m_p = 0.0;
    int local_maxima = 1;
};

// max_t B(t)/t^p.
EmbeddingConstant embedding_constant_M(double p);

} // namespace speclab
