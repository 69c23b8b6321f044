#pragma once

#include <chspec/direct.hpp>
#include <chspec/error.hpp>
#include <chspec/inverse.hpp>
#include <chspec/phase_space.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace chspec::io {

/// 17 significant digits.
inline std::string fmt(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "cannot serialise a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_array(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v[i]);
  }
  return s + "]";
}

namespace detail {

inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed JSON: ") + e.what());
  }
}

inline double number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::parse_error, std::string(what) + " must be a number");
  return j.get<double>();
}

inline std::vector<double> numbers(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) throw Error(ErrorCode::parse_error, std::string("missing field \"") + key + "\"");
  const auto& arr = obj.at(key);
  if (!arr.is_array()) throw Error(ErrorCode::parse_error, std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& v : arr) out.push_back(number(v, key));
  return out;
}

}  // namespace detail

/// {"peaks":[{"x":..,"p":..,"h":..},...]}, sorted by x, h >= 0 (h optional).
inline PeakonPair parse_pair(const std::string& text) {
  auto j = detail::parse_json(text);
  if (!j.is_object() || !j.contains("peaks") || !j.at("peaks").is_array()) {
    throw Error(ErrorCode::parse_error, "pair JSON needs a \"peaks\" array");
  }
  std::vector<Peak> peaks;
  for (const auto& pk : j.at("peaks")) {
    if (!pk.is_object() || !pk.contains("x") || !pk.contains("p")) {
      throw Error(ErrorCode::parse_error, "each peak needs \"x\" and \"p\"");
    }
    Peak p;
    p.x = detail::number(pk.at("x"), "x");
    p.p = detail::number(pk.at("p"), "p");
    p.h = pk.contains("h") ? detail::number(pk.at("h"), "h") : 0.0;
    peaks.push_back(p);
  }
  try {
    return PeakonPair(peaks);
  } catch (const Error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

inline std::string write_pair(const PeakonPair& pair) {
  std::string s = "{\"peaks\": [";
  for (std::size_t i = 0; i < pair.size(); ++i) {
    if (i) s += ", ";
    s += "{\"x\": " + fmt(pair.sites()[i]) + ", \"p\": " + fmt(pair.weights()[i]) + ", \"h\": " +
         fmt(pair.atoms()[i]) + "}";
  }
  return s + "]}\n";
}

inline std::string write_spectral(const SpectralData& d) {
  std::string s = "{\"eigenvalues\": " + fmt_array(d.eigenvalues);
  s += ", \"kappa\": " + fmt_array(d.kappa);
  s += ", \"coupling\": " + fmt_array(d.coupling);
  s += ", \"norming_right\": " + fmt_array(d.norming_right);
  s += ", \"norming_left\": " + fmt_array(d.norming_left);
  s += ", \"wronskian\": " + fmt_array(d.wronskian.is_zero() ? std::vector<double>{0.0} : d.wronskian.coefficients());
  return s + "}\n";
}

/// Input of the inverse problem: either kappa or norming constants on one side.
struct SpectralInput {
  std::vector<double> eigenvalues;
  std::optional<std::vector<double>> kappa;
  std::optional<std::vector<double>> norming;
  Side side = Side::minus;  ///< side of the norming constants
};

/// Spectral JSON with "kappa", or with "norming" and "side" ("left" or
/// "right"). Validation failures are reported as ParseError.
inline SpectralInput parse_spectral(const std::string& text) {
  auto j = detail::parse_json(text);
  if (!j.is_object()) throw Error(ErrorCode::parse_error, "spectral JSON must be an object");
  SpectralInput in;
  in.eigenvalues = detail::numbers(j, "eigenvalues");
  if (j.contains("kappa")) {
    in.kappa = detail::numbers(j, "kappa");
  } else if (j.contains("norming")) {
    in.norming = detail::numbers(j, "norming");
    if (!j.contains("side") || !j.at("side").is_string()) {
      throw Error(ErrorCode::parse_error, "norming constants need \"side\": \"left\" or \"right\"");
    }
    const std::string side = j.at("side").get<std::string>();
    if (side == "left") {
      in.side = Side::minus;
    } else if (side == "right") {
      in.side = Side::plus;
    } else {
      throw Error(ErrorCode::parse_error, "\"side\" must be \"left\" or \"right\"");
    }
  } else {
    throw Error(ErrorCode::parse_error, "spectral JSON needs \"kappa\" or \"norming\"");
  }
  const auto& second = in.kappa ? *in.kappa : *in.norming;
  if (second.size() != in.eigenvalues.size()) {
    throw Error(ErrorCode::parse_error, "eigenvalues and their data differ in length");
  }
  try {
    IsospectralCoordinates{in.eigenvalues, std::vector<double>(in.eigenvalues.size(), 0.0)}.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  return in;
}

/// Rows t,x,u for every time and grid point.
inline void write_snapshots_csv(std::ostream& os, const std::vector<double>& times,
                                const std::vector<PeakonPair>& snapshots, const std::vector<double>& xs) {
  os << "t,x,u\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (double x : xs) os << fmt(times[i]) << ',' << fmt(x) << ',' << fmt(eval_u(snapshots[i], x)) << '\n';
  }
}

/// [{"t":..,"atoms":[{"x":..,"h":..}]}, ...] with only nonzero atoms listed.
inline void write_atoms_json(std::ostream& os, const std::vector<double>& times,
                             const std::vector<PeakonPair>& snapshots) {
  os << "[";
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << (i ? ",\n " : "\n ") << "{\"t\": " << fmt(times[i]) << ", \"atoms\": [";
    bool first = true;
    const auto& s = snapshots[i];
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s.atoms()[j] == 0) continue;
      os << (first ? "" : ", ") << "{\"x\": " << fmt(s.sites()[j]) << ", \"h\": " << fmt(s.atoms()[j]) << "}";
      first = false;
    }
    os << "]}";
  }
  os << "\n]\n";
}

}  // namespace chspec::io
