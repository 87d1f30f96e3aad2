#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace speclab {

// A quantity that may be finite, certified infinite, or undecided.
class Value {
public:
    enum class Kind { Finite, Infinite, Unknown };

    Value() = default;
    static Value finite(double v) { return Value(Kind::Finite, v, {}); }
    static Value infinite(std::string reason) { return Value(Kind::Infinite, 0.0, std::move(reason)); }
    static Value unknown(std::string reason, double partial = 0.0)
    {
        return Value(Kind::Unknown, partial, std::move(reason));
    }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_infinite() const { return kind_ == Kind::Infinite; }
    bool is_unknown() const { return kind_ == Kind::Unknown; }
    // Finite value, or the partial sum carried by an Unknown.
    double value() const { return v_; }
    const std::string& reason() const { return reason_; }

    Value operator+(const Value& o) const;
    Value scaled(double c) const;
    std::string str() const;

private:
    Value(Kind k, double v, std::string r) : kind_(k), v_(v), reason_(std::move(r)) {}
    Kind kind_ = Kind::Finite;
    double v_ = 0.0;
    std::string reason_;
};

struct NonIntegrable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidDomain : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidParameters : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingDecayClass : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnboundedLevelSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InconsistentVerdict : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Value Value::operator+(const Value& o) const
{
    if (is_infinite())
        return *this;
    if (o.is_infinite())
        return o;
    if (is_unknown())
        return Value::unknown(reason_, v_ + o.v_);
    if (o.is_unknown())
        return Value::unknown(o.reason_, v_ + o.v_);
    return Value::finite(v_ + o.v_);
}

inline Value Value::scaled(double c) const
{
    Value r = *this;
    if (c == 0.0 && !is_infinite())
        r.v_ = 0.0;
    else
        r.v_ *= c;
    return r;
}

inline std::string Value::str() const
{
    if (is_infinite())
        return "inf (" + reason_ + ")";
    if (is_unknown())
        return "unknown (" + reason_ + ")";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v_);
    return buf;
}

} // namespace speclab
