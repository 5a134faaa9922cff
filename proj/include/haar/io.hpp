#pragma once

// JSON serialization. Numbers go out with 17 significant digits so that every
// double round-trips; objects keep insertion order so output is reproducible.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "haar/errors.hpp"
#include "haar/group.hpp"
#include "haar/tensor.hpp"

namespace haar::io {

using Json = nlohmann::ordered_json;

inline std::string format_number(double x, int digits = 17) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

namespace detail {
inline void write(std::ostream& out, const Json& j) {
    switch (j.type()) {
    case Json::value_t::object: {
        out << '{';
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out << ", ";
            first = false;
            out << Json(key).dump() << ": ";
            write(out, value);
        }
        out << '}';
        break;
    }
    case Json::value_t::array: {
        out << '[';
        bool first = true;
        for (const auto& value : j) {
            if (!first) out << ", ";
            first = false;
            write(out, value);
        }
        out << ']';
        break;
    }
    case Json::value_t::number_float: out << format_number(j.get<double>()); break;
    default: out << j.dump(); break;
    }
}
} // namespace detail

/// Single-line JSON with %.17g floats.
inline std::string to_string(const Json& j) {
    std::ostringstream out;
    detail::write(out, j);
    return out.str();
}

inline Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// {"dim": D, "order": n, "entries": [...]}, entries flat and row-major.
inline Json tensor_to_json(const Tensor& t) {
    Json j;
    j["dim"] = t.dim();
    j["order"] = t.order();
    Json entries = Json::array();
    for (double x : t.entries()) entries.push_back(x);
    j["entries"] = std::move(entries);
    return j;
}

inline Tensor tensor_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidArgument("tensor JSON must be an object");
    for (const char* key : {"dim", "order", "entries"})
        if (!j.contains(key)) throw InvalidArgument(std::string("tensor JSON lacks \"") + key + "\"");
    if (!j["dim"].is_number_integer() || !j["order"].is_number_integer())
        throw InvalidArgument("tensor JSON \"dim\" and \"order\" must be integers");
    if (!j["entries"].is_array()) throw InvalidArgument("tensor JSON \"entries\" must be an array");
    std::vector<double> entries;
    for (const auto& e : j["entries"]) {
        if (!e.is_number()) throw InvalidArgument("tensor JSON entries must be numbers");
        entries.push_back(e.get<double>());
    }
    return Tensor(j["dim"].get<int>(), j["order"].get<int>(), std::move(entries));
}

inline Json parse_json(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(origin + ": malformed JSON: " + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline Tensor read_tensor_file(const std::string& path) {
    try {
        return tensor_from_json(parse_json(read_file(path), path));
    } catch (const DimensionError& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

} // namespace haar::io
