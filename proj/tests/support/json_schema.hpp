#pragma once

// Minimal JSON-schema checker covering the subset used by
// schemas/report.schema.json: type (string or list), enum, required,
// properties, additionalProperties (bool), items (single schema).

#include <string>
#include <vector>

#include <json.hpp>

namespace schema_check {

using nlohmann::json;

inline bool type_matches(const std::string& type, const json& value) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "boolean") return value.is_boolean();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "number") return value.is_number();
    if (type == "null") return value.is_null();
    return false;
}

inline void validate(const json& schema, const json& value, const std::string& path,
                     std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const json& t = schema["type"];
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(t.get<std::string>(), value);
        } else {
            for (const auto& alt : t)
                if (type_matches(alt.get<std::string>(), value)) ok = true;
        }
        if (!ok) {
            errors.push_back(path + ": type mismatch (got " + std::string(value.type_name()) + ")");
            return;
        }
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& e : schema["enum"])
            if (e == value) ok = true;
        if (!ok) errors.push_back(path + ": value not in enum");
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& req : schema["required"])
                if (!value.contains(req.get<std::string>()))
                    errors.push_back(path + ": missing required key '" + req.get<std::string>() + "'");
        const json props = schema.value("properties", json::object());
        const bool extra_ok = schema.value("additionalProperties", true);
        for (const auto& [key, sub] : value.items()) {
            if (props.contains(key))
                validate(props[key], sub, path + "/" + key, errors);
            else if (!extra_ok)
                errors.push_back(path + ": unexpected key '" + key + "'");
        }
    }
    if (value.is_array() && schema.contains("items")) {
        std::size_t i = 0;
        for (const auto& item : value) {
            validate(schema["items"], item, path + "[" + std::to_string(i) + "]", errors);
            ++i;
        }
    }
}

inline std::vector<std::string> validate(const json& schema, const json& value) {
    std::vector<std::string> errors;
    validate(schema, value, "$", errors);
    return errors;
}

}  // namespace schema_check
