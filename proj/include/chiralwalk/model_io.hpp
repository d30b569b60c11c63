#pragma once

// Model-file ingestion and report emission. Models arrive as JSON (either a
// split-step parameter pair or a raw strictly local coefficient table);
// reports leave as JSON/CSV with a fixed deterministic serialization:
// object keys sorted, floats printed with 17 significant digits, no
// timestamps. Matrices are serialized row-major as nested arrays of
// [re, im] pairs.

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chiralwalk/lattice.hpp"
#include "chiralwalk/spectra.hpp"
#include "chiralwalk/splitstep.hpp"
#include "chiralwalk/version.hpp"

namespace chiralwalk {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Deterministic serialization

inline std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // collapse -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline void escape_json_string(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

inline void write_json_value(const json& j, std::string& out, int depth) {
  const std::string pad(static_cast<size_t>(2 * depth), ' ');
  const std::string pad_in(static_cast<size_t>(2 * (depth + 1)), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        escape_json_string(it.key(), out);
        out += ": ";
        write_json_value(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        write_json_value(v, out, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::string:
      escape_json_string(j.get<std::string>(), out);
      return;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case json::value_t::number_integer: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%" PRId64, j.get<std::int64_t>());
      out += buf;
      return;
    }
    case json::value_t::number_unsigned: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%" PRIu64, j.get<std::uint64_t>());
      out += buf;
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case json::value_t::null:
    default:
      out += "null";
      return;
  }
}

}  // namespace detail

inline std::string serialize_report(const json& j) {
  std::string out;
  detail::write_json_value(j, out, 0);
  out += "\n";
  return out;
}

// FNV-1a 64-bit over the canonical serialization.
inline std::string digest_hex(const std::string& payload) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

// ---------------------------------------------------------------------------
// Model files

struct ParsedModel {
  enum class Kind { SplitStep, StrictlyLocal } kind = Kind::SplitStep;
  std::optional<SplitStepModel> split_step;
  std::optional<StrictlyLocalOperatorSpec> strictly_local;
  bool expect_unitary = false;  // strictly_local files may declare this
  std::string digest;
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& path,
                                      const std::string& what) {
  throw Error(ErrorCode::SchemaError, path + ": " + what);
}

[[noreturn]] inline void range_error(const std::string& path,
                                     const std::string& what) {
  throw Error(ErrorCode::RangeError, path + ": " + what);
}

inline const json& require_field(const json& j, const char* key,
                                 const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    schema_error(path, std::string("missing required field \"") + key + "\"");
  return j.at(key);
}

inline double parse_finite_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) range_error(path, "value must be finite");
  return v;
}

inline std::vector<double> parse_real_array(const json& j,
                                            const std::string& path,
                                            bool bounded) {
  if (!j.is_array() || j.empty())
    schema_error(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const double v = parse_finite_number(j[i], p);
    if (bounded && std::abs(v) > 1.0)
      range_error(p, "value must lie in [-1, 1]");
    out.push_back(v);
  }
  return out;
}

inline ScalarSequence parse_scalar_sequence(const json& j,
                                            const std::string& path,
                                            bool bounded) {
  if (!j.is_object()) schema_error(path, "expected an object");
  auto left = parse_real_array(require_field(j, "left_period", path),
                               path + ".left_period", bounded);
  auto right = parse_real_array(require_field(j, "right_period", path),
                                path + ".right_period", bounded);
  std::int64_t core_start = 0;
  std::vector<double> core;
  if (j.contains("core")) {
    const json& c = j.at("core");
    if (!c.is_object()) schema_error(path + ".core", "expected an object");
    const json& st = require_field(c, "start", path + ".core");
    if (!st.is_number_integer() && !st.is_number_unsigned())
      schema_error(path + ".core.start", "expected an integer");
    core_start = st.get<std::int64_t>();
    core = parse_real_array(require_field(c, "values", path + ".core"),
                            path + ".core.values", bounded);
  }
  return ScalarSequence(std::move(left), std::move(right), core_start,
                        std::move(core));
}

inline ComplexMatrix parse_matrix(const json& j, const std::string& path,
                                  int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    schema_error(path, "expected " + std::to_string(n) + " matrix rows");
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      schema_error(rp, "expected " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      const json& e = row[static_cast<size_t>(c)];
      const std::string ep = rp + "[" + std::to_string(c) + "]";
      if (!e.is_array() || e.size() != 2)
        schema_error(ep, "expected an [re, im] pair");
      m(r, c) = Complex(parse_finite_number(e[0], ep + "[0]"),
                        parse_finite_number(e[1], ep + "[1]"));
    }
  }
  return m;
}

inline std::vector<ComplexMatrix> parse_matrix_array(const json& j,
                                                     const std::string& path,
                                                     int n) {
  if (!j.is_array() || j.empty())
    schema_error(path, "expected a non-empty array of matrices");
  std::vector<ComplexMatrix> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_matrix(j[i], path + "[" + std::to_string(i) + "]", n));
  return out;
}

inline MatrixSequence parse_matrix_sequence(const json& j,
                                            const std::string& path, int n) {
  if (!j.is_object()) schema_error(path, "expected an object");
  auto left = parse_matrix_array(require_field(j, "left_period", path),
                                 path + ".left_period", n);
  auto right = parse_matrix_array(require_field(j, "right_period", path),
                                  path + ".right_period", n);
  std::int64_t core_start = 0;
  std::vector<ComplexMatrix> core;
  if (j.contains("core")) {
    const json& c = j.at("core");
    const json& st = require_field(c, "start", path + ".core");
    if (!st.is_number_integer() && !st.is_number_unsigned())
      schema_error(path + ".core.start", "expected an integer");
    core_start = st.get<std::int64_t>();
    core = parse_matrix_array(require_field(c, "values", path + ".core"),
                              path + ".core.values", n);
  }
  return MatrixSequence(std::move(left), std::move(right), core_start,
                        std::move(core));
}

}  // namespace detail

inline ParsedModel parse_model_json(const json& j) {
  ParsedModel out;
  if (!j.is_object()) detail::schema_error("$", "model file must be an object");
  const json& kind = detail::require_field(j, "kind", "$");
  if (!kind.is_string()) detail::schema_error("$.kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "splitstep") {
    out.kind = ParsedModel::Kind::SplitStep;
    ScalarSequence p = detail::parse_scalar_sequence(
        detail::require_field(j, "p", "$"), "$.p", true);
    ScalarSequence a = detail::parse_scalar_sequence(
        detail::require_field(j, "a", "$"), "$.a", true);
    out.split_step.emplace(std::move(p), std::move(a));
  } else if (k == "strictly_local") {
    out.kind = ParsedModel::Kind::StrictlyLocal;
    const json& nj = detail::require_field(j, "n", "$");
    const json& kj = detail::require_field(j, "k0", "$");
    if (!nj.is_number_integer() && !nj.is_number_unsigned())
      detail::schema_error("$.n", "expected an integer");
    if (!kj.is_number_integer() && !kj.is_number_unsigned())
      detail::schema_error("$.k0", "expected an integer");
    const int n = nj.get<int>();
    const int k0 = kj.get<int>();
    if (n < 1) detail::range_error("$.n", "internal dimension must be >= 1");
    if (k0 < 0 || k0 > 16)
      detail::range_error("$.k0", "bandwidth must lie in [0, 16]");
    const json& coeffs = detail::require_field(j, "coeffs", "$");
    if (!coeffs.is_object())
      detail::schema_error("$.coeffs", "expected an object keyed by k");
    const ComplexMatrix zero = ComplexMatrix::Zero(n, n);
    std::vector<MatrixSequence> seqs;
    for (int kk = -k0; kk <= k0; ++kk) {
      const std::string key = std::to_string(kk);
      if (coeffs.contains(key))
        seqs.push_back(detail::parse_matrix_sequence(
            coeffs.at(key), "$.coeffs." + key, n));
      else
        seqs.push_back(MatrixSequence::constant(zero));
    }
    for (auto it = coeffs.begin(); it != coeffs.end(); ++it) {
      int kk = 0;
      try {
        kk = std::stoi(it.key());
      } catch (...) {
        detail::schema_error("$.coeffs." + it.key(), "key must be an integer");
      }
      if (kk < -k0 || kk > k0)
        detail::range_error("$.coeffs." + it.key(),
                            "coefficient outside the band [-k0, k0]");
    }
    out.strictly_local.emplace(n, k0, std::move(seqs));
    if (j.contains("unitary")) {
      if (!j.at("unitary").is_boolean())
        detail::schema_error("$.unitary", "expected a boolean");
      out.expect_unitary = j.at("unitary").get<bool>();
    }
  } else {
    detail::schema_error("$.kind",
                         "unknown kind \"" + k +
                             "\" (expected \"splitstep\" or "
                             "\"strictly_local\")");
  }
  out.digest = digest_hex(serialize_report(j));
  return out;
}

inline ParsedModel parse_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError,
                std::string("model file is not valid JSON: ") + e.what());
  }
  return parse_model_json(j);
}

// ---------------------------------------------------------------------------
// Report envelope

inline json report_envelope(const std::string& command,
                            const std::string& model_digest, json parameters,
                            json results,
                            const std::vector<std::string>& warnings) {
  json env;
  env["command"] = command;
  env["model_digest"] = model_digest;
  env["parameters"] = std::move(parameters);
  env["results"] = std::move(results);
  env["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  env["warnings"] = warnings;
  return env;
}

inline json intervals_json(const std::vector<Interval>& intervals) {
  json out = json::array();
  for (const auto& iv : intervals) out.push_back({iv.lo, iv.hi});
  return out;
}

inline json arcs_json(const std::vector<Arc>& arcs) {
  json out = json::array();
  for (const auto& a : arcs) out.push_back({a.lo, a.hi});
  return out;
}

// ---------------------------------------------------------------------------
// CSV emission (17 significant digits, fixed section headers)

inline std::string spectrum_csv(const SpectralBands& bands) {
  std::string out = "band_lo,band_hi\n";
  for (const auto& iv : bands.intervals)
    out += format_double(iv.lo) + "," + format_double(iv.hi) + "\n";
  out += "arc_theta_lo,arc_theta_hi\n";
  for (const auto& a : bands.arcs)
    out += format_double(a.lo) + "," + format_double(a.hi) + "\n";
  return out;
}

// Parse the spectrum CSV back; used by round-trip checks.
inline SpectralBands parse_spectrum_csv(const std::string& text) {
  SpectralBands bands;
  std::istringstream in(text);
  std::string line;
  int section = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "band_lo,band_hi") {
      section = 1;
      continue;
    }
    if (line == "arc_theta_lo,arc_theta_hi") {
      section = 2;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorCode::SchemaError, "malformed CSV row: " + line);
    const double lo = std::strtod(line.c_str(), nullptr);
    const double hi = std::strtod(line.c_str() + comma + 1, nullptr);
    if (section == 1)
      bands.intervals.push_back({lo, hi});
    else if (section == 2)
      bands.arcs.push_back({lo, hi});
    else
      throw Error(ErrorCode::SchemaError, "CSV row before a section header");
  }
  return bands;
}

// ---------------------------------------------------------------------------
// Static SVG figure: unit circle with the essential-spectrum arcs stroked.

inline std::string spectrum_svg(const std::vector<Arc>& arcs) {
  std::string out;
  out +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.3 -1.3 2.6 "
      "2.6\" width=\"480\" height=\"480\">\n";
  out +=
      "  <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#cccccc\" "
      "stroke-width=\"0.015\"/>\n";
  const double full = 2.0 * std::numbers::pi;
  for (const Arc& a : arcs) {
    const double span = a.hi - a.lo;
    if (span >= full - 1e-12) {
      out +=
          "  <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" "
          "stroke=\"#c0392b\" stroke-width=\"0.05\"/>\n";
      continue;
    }
    const double x0 = std::cos(a.lo), y0 = -std::sin(a.lo);
    const double x1 = std::cos(a.hi), y1 = -std::sin(a.hi);
    if (span < 1e-9) {
      // Degenerate arc: a spectral point.
      out += "  <circle cx=\"" + format_double(x0) + "\" cy=\"" +
             format_double(y0) + "\" r=\"0.035\" fill=\"#c0392b\"/>\n";
      continue;
    }
    const char* large = span > std::numbers::pi ? "1" : "0";
    out += "  <path d=\"M " + format_double(x0) + " " + format_double(y0) +
           " A 1 1 0 " + large + " 0 " + format_double(x1) + " " +
           format_double(y1) +
           "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.05\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace chiralwalk
