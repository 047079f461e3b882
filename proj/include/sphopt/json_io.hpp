#pragma once

// Polynomial file format and a JSON writer that prints every float with 17
// significant digits so values survive a text round trip bit-exactly.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sphopt/polyhom.hpp"

namespace sphopt {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Keep the token a JSON float so readers do not narrow it to an integer.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void dump_string(std::string& out, const std::string& s) {
  out += json(s).dump();
}

inline void dump17(std::string& out, const json& j, int indent, int depth) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_string(out, it.key());
        out += indent < 0 ? ":" : ": ";
        dump17(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; they are mostly vectors.
      const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) {
          out += ',';
          if (flat && indent >= 0) out += ' ';
        }
        first = false;
        if (!flat) newline(depth + 1);
        dump17(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Serialize with floats at 17 significant digits. indent < 0 gives one line.
inline std::string dump_json(const json& j, int indent = 2) {
  std::string out;
  detail::dump17(out, j, indent, 0);
  return out;
}

inline json polynomial_to_json(const HomogeneousPolynomial& f) {
  json terms = json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back({{"exp", e}, {"coef", c}});
  return {{"n", f.num_vars()}, {"d", f.degree()}, {"terms", terms}};
}

inline std::string serialize_polynomial(const HomogeneousPolynomial& f) {
  return dump_json(polynomial_to_json(f)) + "\n";
}

inline HomogeneousPolynomial polynomial_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("polynomial file must hold a JSON object");
  for (const char* key : {"n", "d", "terms"}) {
    if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  }
  if (!j["n"].is_number_integer() || !j["d"].is_number_integer()) {
    throw ParseError("fields \"n\" and \"d\" must be integers");
  }
  const int n = j["n"].get<int>();
  const int d = j["d"].get<int>();
  if (n < 1 || d < 1) throw ParseError("need n >= 1 and d >= 1");
  if (!j["terms"].is_array()) throw ParseError("field \"terms\" must be an array");
  std::vector<std::pair<Exponents, double>> terms;
  std::size_t idx = 0;
  for (const auto& t : j["terms"]) {
    const std::string where = "term #" + std::to_string(idx++);
    if (!t.is_object() || !t.contains("exp") || !t.contains("coef")) {
      throw ParseError(where + ": expected {\"exp\": [...], \"coef\": number}");
    }
    if (!t["exp"].is_array() || !t["coef"].is_number()) {
      throw ParseError(where + ": \"exp\" must be an array and \"coef\" a number");
    }
    Exponents e;
    for (const auto& k : t["exp"]) {
      if (!k.is_number_integer()) throw ParseError(where + ": exponents must be integers");
      e.push_back(k.get<int>());
    }
    terms.emplace_back(std::move(e), t["coef"].get<double>());
  }
  return HomogeneousPolynomial::from_terms(n, d, terms);
}

inline HomogeneousPolynomial parse_polynomial(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return polynomial_from_json(j);
}

inline HomogeneousPolynomial read_polynomial_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_polynomial(ss.str());
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

}  // namespace sphopt
