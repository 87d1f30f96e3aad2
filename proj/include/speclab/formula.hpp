#pragma once

#include "speclab/logreal.hpp"

#include <memory>
#include <string>
#include <vector>

namespace speclab {

// Closed-form expression over the fixed grammar:
//   numbers, pi, e, variables r t d th, + - * / ^(constant),
//   exp(x), ln(x), lnln(x), abs(x), ind(x, lo, hi) = 1 on lo < x < hi.
// t = ln r, d = r - (lower radius of the enclosing region), th = polar angle.
class Formula {
public:
    enum class Var { R, T, D, Th };

    struct Env {
        LogReal r;
        double t = 0.0;
        double d = 0.0;
        double th = 0.0;
    };

    Formula();
    static Formula parse(const std::string& text);
    static Formula constant(double c);

    std::string str() const;
    bool is_constant() const;
    double constant_value() const; // valid when is_constant()
    bool uses(Var v) const;

    double eval(const Env& env) const;
    LogReal eval_log(const Env& env) const;

    // Convenience evaluators for one-variable use.
    double of_r(double r) const;
    double of_t(double t) const; // r = e^t evaluated without overflow
    double of_th(double th) const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
};

struct Formula::Node {
    enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Ln, LnLn, Abs, Ind };
    Op op = Op::Const;
    double value = 0.0; // Const value, Pow exponent
    double lo = 0.0, hi = 0.0;
    Var var = Var::R;
    std::vector<std::shared_ptr<const Node>> kids;
};

} // namespace speclab
