#include "speclab/formula.hpp"

#include "speclab/value.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace speclab {

using Node = Formula::Node;
using Op = Node::Op;
using NodeP = std::shared_ptr<const Node>;

namespace {

NodeP make(Op op, std::vector<NodeP> kids = {}, double value = 0.0)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->kids = std::move(kids);
    n->value = value;
    return n;
}

bool is_const(const NodeP& n)
{
    if (n->op == Op::Var)
        return false;
    for (auto& k : n->kids)
        if (!is_const(k))
            return false;
    return true;
}

double eval_d(const Node& n, const Formula::Env& env);

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodeP run()
    {
        NodeP n = expr();
        skip();
        if (pos_ != s_.size())
            fail("unexpected '" + s_.substr(pos_, 1) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what)
    {
        throw ConfigError("formula '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
    }
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    NodeP expr()
    {
        NodeP n = term();
        for (;;) {
            if (accept('+'))
                n = make(Op::Add, {n, term()});
            else if (accept('-'))
                n = make(Op::Sub, {n, term()});
            else
                return n;
        }
    }
    NodeP term()
    {
        NodeP n = unary();
        for (;;) {
            if (accept('*'))
                n = make(Op::Mul, {n, unary()});
            else if (accept('/'))
                n = make(Op::Div, {n, unary()});
            else
                return n;
        }
    }
    NodeP unary()
    {
        if (accept('-'))
            return make(Op::Neg, {unary()});
        return power();
    }
    NodeP power()
    {
        NodeP base = primary();
        if (accept('^')) {
            NodeP ex = unary();
            if (!is_const(ex))
                fail("exponent must be constant");
            double p = eval_d(*ex, {});
            return make(Op::Pow, {base}, p);
        }
        return base;
    }
    double const_arg()
    {
        skip();
        if (s_.compare(pos_, 4, "-inf") == 0) {
            pos_ += 4;
            return -std::numeric_limits<double>::infinity();
        }
        if (s_.compare(pos_, 3, "inf") == 0) {
            pos_ += 3;
            return std::numeric_limits<double>::infinity();
        }
        NodeP n = expr();
        if (!is_const(n))
            fail("indicator bounds must be constant");
        return eval_d(*n, {});
    }
    NodeP primary()
    {
        skip();
        if (pos_ >= s_.size())
            fail("unexpected end");
        char c = s_[pos_];
        if (accept('(')) {
            NodeP n = expr();
            expect(')');
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin)
                fail("bad number");
            pos_ += static_cast<size_t>(end - begin);
            return make(Op::Const, {}, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            if (id == "pi")
                return make(Op::Const, {}, std::numbers::pi);
            if (id == "e")
                return make(Op::Const, {}, std::numbers::e);
            auto var = [&](Formula::Var v) {
                auto n = std::make_shared<Node>();
                n->op = Op::Var;
                n->var = v;
                return NodeP(n);
            };
            if (id == "r")
                return var(Formula::Var::R);
            if (id == "t")
                return var(Formula::Var::T);
            if (id == "d")
                return var(Formula::Var::D);
            if (id == "th")
                return var(Formula::Var::Th);
            Op op;
            if (id == "exp")
                op = Op::Exp;
            else if (id == "ln")
                op = Op::Ln;
            else if (id == "lnln")
                op = Op::LnLn;
            else if (id == "abs")
                op = Op::Abs;
            else if (id == "ind")
                op = Op::Ind;
            else
                fail("unknown identifier '" + id + "'");
            expect('(');
            NodeP arg = expr();
            if (op == Op::Ind) {
                expect(',');
                double lo = const_arg();
                expect(',');
                double hi = const_arg();
                expect(')');
                auto n = std::make_shared<Node>();
                n->op = Op::Ind;
                n->kids = {arg};
                n->lo = lo;
                n->hi = hi;
                return n;
            }
            expect(')');
            return make(op, {arg});
        }
        fail(std::string("unexpected '") + c + "'");
    }

    const std::string& s_;
    size_t pos_ = 0;
};

std::string num(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (v == std::numbers::pi)
        return "pi";
    if (v == std::numbers::e)
        return "e";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    // Shortest form that reparses exactly.
    for (int prec = 1; prec < 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) {
            s = buf;
            break;
        }
    }
    return s;
}

int prec(Op op)
{
    switch (op) {
    case Op::Add:
    case Op::Sub:
        return 1;
    case Op::Mul:
    case Op::Div:
        return 2;
    case Op::Neg:
        return 3;
    case Op::Pow:
        return 4;
    default:
        return 5;
    }
}

std::string print(const Node& n)
{
    auto wrap = [](const Node& k, int need) {
        std::string s = print(k);
        return prec(k.op) < need ? "(" + s + ")" : s;
    };
    switch (n.op) {
    case Op::Const:
        return n.value < 0 ? "(" + num(n.value) + ")" : num(n.value);
    case Op::Var:
        switch (n.var) {
        case Formula::Var::R:
            return "r";
        case Formula::Var::T:
            return "t";
        case Formula::Var::D:
            return "d";
        case Formula::Var::Th:
            return "th";
        }
        return "?";
    case Op::Add:
        return wrap(*n.kids[0], 1) + " + " + wrap(*n.kids[1], 2);
    case Op::Sub:
        return wrap(*n.kids[0], 1) + " - " + wrap(*n.kids[1], 2);
    case Op::Mul:
        return wrap(*n.kids[0], 2) + "*" + wrap(*n.kids[1], 3);
    case Op::Div:
        return wrap(*n.kids[0], 2) + "/" + wrap(*n.kids[1], 3);
    case Op::Neg:
        return "-" + wrap(*n.kids[0], 3);
    case Op::Pow: {
        std::string e = num(n.value);
        if (n.value < 0)
            e = "(" + e + ")";
        return wrap(*n.kids[0], 5) + "^" + e;
    }
    case Op::Exp:
        return "exp(" + print(*n.kids[0]) + ")";
    case Op::Ln:
        return "ln(" + print(*n.kids[0]) + ")";
    case Op::LnLn:
        return "lnln(" + print(*n.kids[0]) + ")";
    case Op::Abs:
        return "abs(" + print(*n.kids[0]) + ")";
    case Op::Ind:
        return "ind(" + print(*n.kids[0]) + ", " + num(n.lo) + ", " + num(n.hi) + ")";
    }
    return "?";
}

double eval_d(const Node& n, const Formula::Env& env)
{
    switch (n.op) {
    case Op::Const:
        return n.value;
    case Op::Var:
        switch (n.var) {
        case Formula::Var::R:
            return env.r.to_double();
        case Formula::Var::T:
            return env.t;
        case Formula::Var::D:
            return env.d;
        case Formula::Var::Th:
            return env.th;
        }
        return 0.0;
    case Op::Add:
        return eval_d(*n.kids[0], env) + eval_d(*n.kids[1], env);
    case Op::Sub:
        return eval_d(*n.kids[0], env) - eval_d(*n.kids[1], env);
    case Op::Mul:
        return eval_d(*n.kids[0], env) * eval_d(*n.kids[1], env);
    case Op::Div:
        return eval_d(*n.kids[0], env) / eval_d(*n.kids[1], env);
    case Op::Neg:
        return -eval_d(*n.kids[0], env);
    case Op::Pow:
        return std::pow(eval_d(*n.kids[0], env), n.value);
    case Op::Exp:
        return std::exp(eval_d(*n.kids[0], env));
    case Op::Ln:
        return std::log(eval_d(*n.kids[0], env));
    case Op::LnLn:
        return std::log(std::log(eval_d(*n.kids[0], env)));
    case Op::Abs:
        return std::fabs(eval_d(*n.kids[0], env));
    case Op::Ind: {
        double x = eval_d(*n.kids[0], env);
        return (x > n.lo && x < n.hi) ? 1.0 : 0.0;
    }
    }
    return 0.0;
}

LogReal nan_log() { return {1, std::numeric_limits<double>::quiet_NaN()}; }

LogReal eval_l(const Node& n, const Formula::Env& env)
{
    switch (n.op) {
    case Op::Const:
        return LogReal::from_double(n.value);
    case Op::Var:
        switch (n.var) {
        case Formula::Var::R:
            return env.r;
        case Formula::Var::T:
            return LogReal::from_double(env.t);
        case Formula::Var::D:
            return LogReal::from_double(env.d);
        case Formula::Var::Th:
            return LogReal::from_double(env.th);
        }
        return {};
    case Op::Add:
        return eval_l(*n.kids[0], env) + eval_l(*n.kids[1], env);
    case Op::Sub:
        return eval_l(*n.kids[0], env) - eval_l(*n.kids[1], env);
    case Op::Mul:
        return eval_l(*n.kids[0], env) * eval_l(*n.kids[1], env);
    case Op::Div:
        return eval_l(*n.kids[0], env) / eval_l(*n.kids[1], env);
    case Op::Neg:
        return -eval_l(*n.kids[0], env);
    case Op::Pow: {
        LogReal x = eval_l(*n.kids[0], env);
        double p = n.value;
        if (x.sign == 0)
            return p > 0 ? LogReal{} : LogReal{1, std::numeric_limits<double>::infinity()};
        if (x.sign < 0) {
            if (p != std::floor(p))
                return nan_log();
            int s = (static_cast<long long>(p) % 2 == 0) ? 1 : -1;
            return {s, p * x.lg};
        }
        return {1, p * x.lg};
    }
    case Op::Exp:
        return LogReal::exp_of(eval_l(*n.kids[0], env).to_double());
    case Op::Ln: {
        LogReal x = eval_l(*n.kids[0], env);
        if (x.sign <= 0)
            return x.sign == 0 ? LogReal{-1, std::numeric_limits<double>::infinity()} : nan_log();
        return LogReal::from_double(x.lg);
    }
    case Op::LnLn: {
        LogReal x = eval_l(*n.kids[0], env);
        if (x.sign <= 0 || x.lg <= 0.0)
            return x.sign > 0 && x.lg == 0.0 ? LogReal{-1, std::numeric_limits<double>::infinity()}
                                             : nan_log();
        return LogReal::from_double(std::log(x.lg));
    }
    case Op::Abs: {
        LogReal x = eval_l(*n.kids[0], env);
        return {x.sign == 0 ? 0 : 1, x.lg};
    }
    case Op::Ind: {
        double x = eval_l(*n.kids[0], env).to_double();
        return LogReal::from_double((x > n.lo && x < n.hi) ? 1.0 : 0.0);
    }
    }
    return {};
}

bool uses_var(const Node& n, Formula::Var v)
{
    if (n.op == Op::Var)
        return n.var == v;
    for (auto& k : n.kids)
        if (uses_var(*k, v))
            return true;
    return false;
}

} // namespace

Formula::Formula() : root_(make(Op::Const, {}, 0.0)) {}

Formula Formula::parse(const std::string& text)
{
    Formula f;
    f.root_ = Parser(text).run();
    return f;
}

Formula Formula::constant(double c)
{
    Formula f;
    f.root_ = make(Op::Const, {}, c);
    return f;
}

std::string Formula::str() const { return print(*root_); }
bool Formula::is_constant() const { return is_const(root_); }
double Formula::constant_value() const { return eval_d(*root_, {}); }
bool Formula::uses(Var v) const { return uses_var(*root_, v); }
double Formula::eval(const Env& env) const { return eval_d(*root_, env); }
LogReal Formula::eval_log(const Env& env) const { return eval_l(*root_, env); }

double Formula::of_r(double r) const
{
    Env env;
    env.r = LogReal::from_double(r);
    env.t = std::log(r);
    env.d = r;
    return eval(env);
}

double Formula::of_t(double t) const
{
    Env env;
    env.r = LogReal::exp_of(t);
    env.t = t;
    return eval_log(env).to_double();
}

double Formula::of_th(double th) const
{
    Env env;
    env.th = th;
    env.r = LogReal::from_double(1.0);
    return eval(env);
}

} // namespace speclab
