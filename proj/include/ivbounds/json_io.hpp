#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ivbounds/errors.hpp"
#include "ivbounds/model.hpp"
#include "ivbounds/rational.hpp"

namespace ivb {

using Json = nlohmann::ordered_json;

// On-disk law document.  Probabilities arrive arm-major as probs[z][d][y];
// values are decimal (or fraction) strings so that exactness survives the
// round trip.  The core's (y, d, z) transpose happens here and only here.
struct InputDocument {
  std::vector<std::string> gammas;
  std::size_t ell = 0;
  std::vector<std::vector<std::vector<std::string>>> probs;  // [z][d][y]
  Json meta;  // free-form, preserved verbatim

  friend bool operator==(const InputDocument& a, const InputDocument& b) {
    return a.gammas == b.gammas && a.ell == b.ell && a.probs == b.probs && a.meta == b.meta;
  }
};

namespace detail {

inline std::string json_rational_string(const Json& v, const char* what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ShapeMismatch(std::string(what) +
                      " must be a decimal string (floats lose exactness) or an integer");
}

}  // namespace detail

inline InputDocument parse_input_document(const Json& j) {
  if (!j.is_object()) throw ShapeMismatch("input document must be a JSON object");
  InputDocument doc;
  if (!j.contains("gammas") || !j["gammas"].is_array() || j["gammas"].size() < 2)
    throw ShapeMismatch("'gammas' must be an array of at least two values");
  for (const auto& g : j["gammas"])
    doc.gammas.push_back(detail::json_rational_string(g, "gamma"));
  if (!j.contains("ell") || !j["ell"].is_number_integer() || j["ell"].get<long long>() < 2)
    throw ShapeMismatch("'ell' must be an integer >= 2");
  doc.ell = j["ell"].get<std::size_t>();
  const std::size_t n = doc.gammas.size();
  if (!j.contains("probs") || !j["probs"].is_array() || j["probs"].size() != doc.ell)
    throw ShapeMismatch("'probs' must be an array with one entry per arm");
  for (const auto& arm : j["probs"]) {
    if (!arm.is_array() || arm.size() != 2)
      throw ShapeMismatch("each arm must hold two rows, d=0 and d=1");
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : arm) {
      if (!row.is_array() || row.size() != n)
        throw ShapeMismatch("each treatment row must list one value per outcome");
      std::vector<std::string> cells;
      for (const auto& c : row) cells.push_back(detail::json_rational_string(c, "probability"));
      rows.push_back(std::move(cells));
    }
    doc.probs.push_back(std::move(rows));
  }
  if (j.contains("meta")) doc.meta = j["meta"];
  return doc;
}

inline Json to_json(const InputDocument& doc) {
  Json j;
  j["gammas"] = doc.gammas;
  j["ell"] = doc.ell;
  j["probs"] = doc.probs;
  if (!doc.meta.is_null()) j["meta"] = doc.meta;
  return j;
}

inline ObservedLaw to_observed_law(const InputDocument& doc) {
  std::vector<Rational> g;
  for (const auto& s : doc.gammas) g.push_back(parse_rational(s));
  OutcomeSupport support(std::move(g));
  const std::size_t n = support.size();
  std::vector<Rational> p(n * 2 * doc.ell);
  for (std::size_t z = 0; z < doc.ell; ++z)
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t y = 0; y < n; ++y)
        p[ydz_index(y, d, z, doc.ell)] = parse_rational(doc.probs[z][d][y]);
  return ObservedLaw(std::move(support), doc.ell, std::move(p));
}

inline InputDocument from_observed_law(const ObservedLaw& law) {
  InputDocument doc;
  for (const Rational& g : law.support().gammas()) doc.gammas.push_back(to_decimal_string(g));
  doc.ell = law.ell();
  doc.probs.resize(law.ell());
  for (std::size_t z = 0; z < law.ell(); ++z) {
    doc.probs[z].resize(2);
    for (std::size_t d = 0; d < 2; ++d) {
      doc.probs[z][d].resize(law.n());
      for (std::size_t y = 0; y < law.n(); ++y)
        doc.probs[z][d][y] = to_decimal_string(law.p(y, d, z));
    }
  }
  return doc;
}

inline InputDocument load_input_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ShapeMismatch("cannot open input file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ShapeMismatch("invalid JSON in " + path + ": " + e.what());
  }
  return parse_input_document(j);
}

inline void save_input_document(const InputDocument& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ShapeMismatch("cannot write output file: " + path);
  out << to_json(doc).dump(2) << "\n";
}

}  // namespace ivb
