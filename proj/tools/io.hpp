#pragma once

// JSON documents for signals, ACFs, verdicts and magnitude grids.
//
//   signal  {"dim": D, "scalar": "exact"|"float", "spikes": [{"pos": [..], "coef": v}]}
//   acf     {"dim": D, "scalar": .., "half": bool, "deltas": [{"lag": [..], "coef": v}]}
//   verdict {"verdict": "unique"|"ambiguous"|"not_covered", "reason": str?, "signals": [signal..]}
//   grid    {"dims": [..], "values": [row-major floats]}
//
// Exact scalars are written as "p/q" strings and read from strings or JSON
// integers. A document without "scalar" is exact when every number in it is
// an integer or a "p/q" string.

#include <string>
#include <vector>

#include <json.hpp>

#include "sparsepr/core.hpp"
#include "sparsepr/error.hpp"
#include "sparsepr/ingest.hpp"
#include "sparsepr/projection.hpp"
#include "sparsepr/scalar.hpp"
#include "sparsepr/types.hpp"
#include "sparsepr/verdict.hpp"

namespace sparsepr::io {

using json = nlohmann::json;

enum class ScalarMode { Exact, Float };

inline const char* mode_name(ScalarMode m) { return m == ScalarMode::Exact ? "exact" : "float"; }

inline ScalarMode parse_mode(const std::string& s) {
  if (s == "exact") return ScalarMode::Exact;
  if (s == "float") return ScalarMode::Float;
  throw Error(ErrorKind::ParseError, "unknown scalar mode '" + s + "'");
}

template <Scalar T>
constexpr ScalarMode mode_of() {
  return is_exact_v<T> ? ScalarMode::Exact : ScalarMode::Float;
}

template <Scalar T>
json scalar_to_json(const T& v) {
  if constexpr (is_exact_v<T>) return format_rational(v);
  else return v;
}

template <Scalar T>
T scalar_from_json(const json& j) {
  if constexpr (is_exact_v<T>) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw Error(ErrorKind::ParseError, "exact scalar must be an integer or a \"p/q\" string, got " + j.dump());
  } else {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
    throw Error(ErrorKind::ParseError, "scalar must be a number, got " + j.dump());
  }
}

template <Scalar T>
std::vector<T> vector_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected an array, got " + j.dump());
  std::vector<T> out;
  for (const auto& v : j) out.push_back(scalar_from_json<T>(v));
  return out;
}

template <Scalar T>
json vector_to_json(const std::vector<T>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(scalar_to_json(x));
  return out;
}

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::size_t dim_from_json(const json& j) {
  const auto& d = require(j, "dim");
  if (!d.is_number_integer() || d.get<long long>() <= 0) throw Error(ErrorKind::ParseError, "\"dim\" must be a positive integer");
  return d.get<std::size_t>();
}

namespace detail {

inline bool all_exact_numbers(const json& j) {
  if (j.is_number_float()) return false;
  if (j.is_array() || j.is_object()) {
    for (const auto& v : j) {
      if (!all_exact_numbers(v)) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Scalar mode declared by a document, or inferred from its numbers.
inline ScalarMode infer_mode(const json& doc) {
  if (doc.is_object() && doc.contains("scalar")) {
    if (!doc["scalar"].is_string()) throw Error(ErrorKind::ParseError, "\"scalar\" must be a string");
    return parse_mode(doc["scalar"].get<std::string>());
  }
  return detail::all_exact_numbers(doc) ? ScalarMode::Exact : ScalarMode::Float;
}

template <Scalar T>
json signal_to_json(const SpikeSignal<T>& f) {
  json spikes = json::array();
  for (const auto& s : f.spikes()) spikes.push_back({{"pos", vector_to_json(s.position)}, {"coef", scalar_to_json(s.coefficient)}});
  return {{"dim", f.dim()}, {"scalar", mode_name(mode_of<T>())}, {"spikes", spikes}};
}

template <Scalar T>
SpikeSignal<T> signal_from_json(const json& j, const Tolerance& tol = {}) {
  const auto dim = dim_from_json(j);
  const auto& arr = require(j, "spikes");
  if (!arr.is_array()) throw Error(ErrorKind::ParseError, "\"spikes\" must be an array");
  std::vector<Spike<T>> spikes;
  for (const auto& s : arr) spikes.push_back({vector_from_json<T>(require(s, "pos")), scalar_from_json<T>(require(s, "coef"))});
  return SpikeSignal<T>(dim, std::move(spikes), tol);
}

template <Scalar T>
json acf_to_json(const DeltaAcf<T>& acf) {
  json deltas = json::array();
  for (const auto& d : acf.deltas()) deltas.push_back({{"lag", vector_to_json(d.lag)}, {"coef", scalar_to_json(d.coefficient)}});
  return {{"dim", acf.dim()}, {"scalar", mode_name(mode_of<T>())}, {"half", acf.half()}, {"deltas", deltas}};
}

template <Scalar T>
DeltaAcf<T> acf_from_json(const json& j, const Tolerance& tol = {}) {
  const auto dim = dim_from_json(j);
  const auto& arr = require(j, "deltas");
  if (!arr.is_array()) throw Error(ErrorKind::ParseError, "\"deltas\" must be an array");
  bool half = false;
  if (j.contains("half")) {
    if (!j["half"].is_boolean()) throw Error(ErrorKind::ParseError, "\"half\" must be a boolean");
    half = j["half"].get<bool>();
  }
  std::vector<Delta<T>> deltas;
  for (const auto& d : arr) deltas.push_back({vector_from_json<T>(require(d, "lag")), scalar_from_json<T>(require(d, "coef"))});
  return DeltaAcf<T>(dim, std::move(deltas), half, tol);
}

template <Scalar T>
json verdict_to_json(const UniquenessVerdict<T>& v) {
  json out{{"verdict", verdict_name<T>(v.kind)}};
  if (!v.reason.empty()) out["reason"] = v.reason;
  json signals = json::array();
  for (const auto& s : v.signals) signals.push_back(signal_to_json(s));
  out["signals"] = signals;
  return out;
}

template <Scalar T>
json visibility_to_json(const VisibilityReport<T>& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back({{"lag", vector_to_json(e.lag)}, {"visible", e.visible}});
  return {{"all_visible", r.all_visible}, {"entries", entries}};
}

inline json grid_to_json(const MagnitudeGrid& g) { return {{"dims", g.dims}, {"values", g.values}}; }

inline MagnitudeGrid grid_from_json(const json& j) {
  const auto& dims = require(j, "dims");
  const auto& values = require(j, "values");
  if (!dims.is_array() || !values.is_array()) throw Error(ErrorKind::ParseError, "grid \"dims\" and \"values\" must be arrays");
  MagnitudeGrid g;
  for (const auto& d : dims) {
    if (!d.is_number_integer() || d.get<long long>() <= 0) throw Error(ErrorKind::ParseError, "grid dims must be positive integers");
    g.dims.push_back(d.get<std::size_t>());
  }
  for (const auto& v : values) {
    if (!v.is_number()) throw Error(ErrorKind::ParseError, "grid values must be numbers");
    g.values.push_back(v.get<double>());
  }
  if (g.values.size() != g.size()) throw Error(ErrorKind::ParseError, "grid values do not match dims");
  return g;
}

}  // namespace sparsepr::io
