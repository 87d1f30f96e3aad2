#pragma once

#include "speclab/value.hpp"

#include <json.hpp>

#include <string>

namespace speclab {

// Writes v under `key`: a number, or "inf"/"unknown" with the reason under key_reason.
inline void put_value(nlohmann::json& obj, const std::string& key, const Value& v)
{
    if (v.is_finite()) {
        obj[key] = v.value();
        return;
    }
    obj[key] = v.is_infinite() ? "inf" : "unknown";
    obj[key + "_reason"] = v.reason();
    if (v.is_unknown())
        obj[key + "_partial"] = v.value();
}

} // namespace speclab
