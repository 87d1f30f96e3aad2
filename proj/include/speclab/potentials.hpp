#pragma once

#include "speclab/decay.hpp"
#include "speclab/formula.hpp"
#include "speclab/orlicz.hpp"
#include "speclab/value.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace speclab {

constexpr double kPi = 3.14159265358979323846;

// Class of the angular factor near th0, in |th - th0|.
struct AngularSingularity {
    double theta = 0.0;
    Decay cls;
};

// V = f(r) g(th) on r_lo < r < r_hi, th_lo < th < th_hi; zero elsewhere.
// The radial formula may use r, t = ln r and d = r - r_lo; the angular one uses th.
struct Region {
    double r_lo = 0.0;
    double r_hi = std::numeric_limits<double>::infinity();
    double th_lo = -kPi;
    double th_hi = kPi;
    Formula radial = Formula::constant(1.0);
    Formula angular = Formula::constant(1.0);
    std::optional<Decay> at_r_lo;    // class of f in d = r - r_lo (or in r when r_lo = 0)
    std::optional<Decay> at_infinity; // class of f as r -> infinity
    std::optional<AngularSingularity> angular_singularity;

    double t_lo() const;
    double t_hi() const;
    bool full_circle() const;
    bool angular_constant() const;
    bool radial_constant() const;

    LogReal f_at_t(double t) const;   // safe for any t in range
    LogReal f_at_d(double d) const;   // near r_lo
    double g(double th) const;
    double sector() const { return th_hi - th_lo; }
};

class Potential {
public:
    Potential() = default;
    Potential(std::string name, std::vector<Region> regions);
    static Potential zero();

    const std::string& name() const { return name_; }
    const std::vector<Region>& regions() const { return regions_; }
    bool is_zero() const { return regions_.empty(); }
    bool is_radial() const;
    Potential scaled(double c) const;

    double value(double r, double th) const;

    // Sampled checks: nonnegativity, disjointness and declared classes within a factor 2.
    void validate() const;

    std::string to_config() const;
    static Potential from_config(const std::string& text);

private:
    std::string name_ = "zero";
    std::vector<Region> regions_;
};

enum class Weight { One, Log1p, Log2p, LogPlusAbs, LogPlusInv, LogLog, AbsLog };

std::string to_string(Weight w);
Weight weight_from_string(const std::string& s);
double weight_at_t(Weight w, double t);

// int_{e^{t1} < |x| < e^{t2}} h(V(x)) w(|x|) |x|^extra dx.
Value integrate_potential(const Potential& V, const PointwiseMap& h, Weight w, double t1, double t2,
                          double extra = 0.0);

// int V(x) w(|x|) dx over the plane.
Value weighted_integral(const Potential& V, Weight w);

// V restricted to {e^{t1} < |x| < e^{t2}} as an Orlicz sample with measure r dr dth.
class AnnulusSample final : public Sample {
public:
    AnnulusSample(const Potential& V, double t1, double t2);
    double measure() const override { return measure_; }
    Value integrate(const PointwiseMap& h) const override;

private:
    const Potential* V_;
    double t1_, t2_, measure_;
};

// f of one region on (e^{t1}, e^{t2}) with measure r^jac dr, and the explicit total measure.
class RadialSample final : public Sample {
public:
    RadialSample(const Region& reg, double t1, double t2, double jac, double measure);
    double measure() const override { return measure_; }
    Value integrate(const PointwiseMap& h) const override;

private:
    Region reg_;
    double t1_, t2_, jac_, measure_;
};

// Function on the circle |sum_k c_k g_k 1_{S_k} - subtract| (measure dth, total 2 pi), built
// from the angular factors of regions with disjoint sectors and scale factors c_k.
class AngularSample final : public Sample {
public:
    explicit AngularSample(const Region& reg, double subtract = 0.0);
    AngularSample(std::vector<std::pair<Region, double>> parts, double subtract);
    double measure() const override { return 2.0 * kPi; }
    Value integrate(const PointwiseMap& h) const override;

private:
    std::vector<std::pair<Region, double>> parts_;
    double sub_;
};

// Pieces of c f(r) for one region on (e^{t1}, e^{t2}) with measure r^jac dr.
std::vector<Piece> radial_pieces(const Region& reg, double t1, double t2, double jac, double c = 1.0);

// Integral of g over the sector.
Value angular_integral(const Region& reg);

// ---- rearrangement ----

// lambda(s) = |{V > s}|.
class DistributionFunction {
public:
    explicit DistributionFunction(const Potential& V);
    double operator()(double s) const;
    double total_support() const { return support_; } // may be infinite
    double sup() const { return sup_; }                 // infinite when V is unbounded
    // Class of lambda(s) as s -> infinity (K s^a (ln s)^b (ln ln s)^c); empty when bounded.
    std::optional<Decay> large_s_class() const { return tail_; }

private:
    struct Level; // tabulated level structure per region
    std::vector<std::shared_ptr<const Level>> levels_;
    double support_ = 0.0;
    double sup_ = 0.0;
    std::optional<Decay> tail_;
};

struct RadialProfile {
    std::function<double(double)> value; // r -> V_*(r)
    bool nonincreasing = true;
    std::vector<double> breakpoints;
};

RadialProfile rearrange(const Potential& V);

// int V_*(|x|) ln_+(1/|x|) dx = int_0^inf H(lambda(s)) ds.
Value rearranged_log_integral(const Potential& V);

// ---- logarithmic reduction ----

// G(t) = e^{2t} (1/2pi) int V(e^t, th) dth on pieces of the t-line. Euler pieces are held in
// s = ln t as t^2 G = (1+eta)/4.
struct LogPiece {
    enum class Kind { Formula, Euler };
    Kind kind = Kind::Formula;
    double lo = 0.0, hi = 0.0; // t-range for Formula, s-range for Euler
    std::function<double(double)> G; // Formula: t -> G(t)
    double eta = 0.0;                // Euler
    std::optional<Decay> at_lo, at_hi; // classes of V behind unbounded ends (Formula)
};

struct LogProfile {
    std::vector<LogPiece> pieces;     // increasing, disjoint
    std::optional<double> tail_eta;   // Euler tail t^2 G = (1+eta)/4 past the last piece
    double sup_G = 0.0;               // sup of G, used for the mode cutoff

    double G(double t) const;         // zero between pieces
};

LogProfile log_reduce(const Potential& V);

} // namespace speclab
