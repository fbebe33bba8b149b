#pragma once

// JSON state files: {"n_qubits": N, "a": [...], "b": [...], "z": [[re, im], ...]}
// Parsing is strict: unknown keys, wrong lengths and non-finite numbers are
// rejected with the offending field named.

#include <json.hpp>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xmems/core.hpp"
#include "xmems/measures.hpp"
#include "xmems/mems.hpp"
#include "xmems/oracle.hpp"

namespace xmems::io {

using nlohmann::json;

class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double finite_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw FormatError(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw FormatError(where + ": non-finite value");
    return x;
}

inline std::vector<double> real_vector(const json& doc, const char* key, std::size_t expected) {
    const auto& v = doc.at(key);
    if (!v.is_array()) throw FormatError(std::string("field '") + key + "': expected an array");
    if (v.size() != expected) {
        throw FormatError(std::string("field '") + key + "': expected length " + std::to_string(expected) +
                          ", got " + std::to_string(v.size()));
    }
    std::vector<double> out;
    out.reserve(expected);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(finite_number(v[i], std::string("field '") + key + "[" + std::to_string(i) + "]'"));
    }
    return out;
}

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace detail

inline XState state_from_json(const json& doc) {
    if (!doc.is_object()) throw FormatError("top level: expected an object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "n_qubits" && key != "a" && key != "b" && key != "z") {
            throw FormatError("unknown field '" + key + "'");
        }
    }
    for (const char* key : {"n_qubits", "a", "b", "z"}) {
        if (!doc.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    }
    const auto& nq = doc.at("n_qubits");
    if (!nq.is_number_integer()) throw FormatError("field 'n_qubits': expected an integer");
    const auto n_qubits = nq.get<long long>();
    if (n_qubits < kMinQubits || n_qubits > kMaxCompactQubits) {
        throw FormatError("field 'n_qubits': must lie in [2, 24], got " + std::to_string(n_qubits));
    }
    const std::size_t n = block_count(static_cast<int>(n_qubits));

    auto a = detail::real_vector(doc, "a", n);
    auto b = detail::real_vector(doc, "b", n);

    const auto& zj = doc.at("z");
    if (!zj.is_array()) throw FormatError("field 'z': expected an array");
    if (zj.size() != n) {
        throw FormatError("field 'z': expected length " + std::to_string(n) + ", got " +
                          std::to_string(zj.size()));
    }
    std::vector<complex> z;
    z.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string where = "field 'z[" + std::to_string(i) + "]'";
        if (!zj[i].is_array() || zj[i].size() != 2) throw FormatError(where + ": expected [re, im]");
        z.emplace_back(detail::finite_number(zj[i][0], where), detail::finite_number(zj[i][1], where));
    }
    return {static_cast<int>(n_qubits), std::move(a), std::move(b), std::move(z)};
}

/// Parses text, reporting syntax errors with line and column.
inline XState parse_state(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw FormatError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": " + e.what());
    } catch (const json::out_of_range& e) {
        throw FormatError(std::string("non-finite number: ") + e.what());
    }
    return state_from_json(doc);
}

inline json state_to_json(const XState& s) {
    json z = json::array();
    for (const auto& c : s.z()) z.push_back({c.real(), c.imag()});
    return {{"n_qubits", s.n_qubits()},
            {"a", std::vector<double>(s.a().begin(), s.a().end())},
            {"b", std::vector<double>(s.b().begin(), s.b().end())},
            {"z", std::move(z)}};
}

inline json to_json(const ValidationReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) {
        v.push_back({{"condition", to_string(x.kind)}, {"index", x.index}, {"magnitude", x.magnitude}});
    }
    return v;
}

inline json to_json(const oracle::OracleReport& r) {
    return {{"check", r.check_name},     {"analytic", r.analytic_value}, {"oracle", r.oracle_value},
            {"abs_diff", r.abs_diff},    {"tolerance", r.tolerance},     {"passed", r.passed}};
}

inline json to_json(const MemsPoint& p) {
    return {{"n_qubits", p.n_qubits},
            {"gamma", {p.gamma.real(), p.gamma.imag()}},
            {"f", p.f_value},
            {"g", p.g_value},
            {"concurrence", p.concurrence},
            {"entropy", p.entropy}};
}

}  // namespace xmems::io
