#pragma once

#include <string>
#include <vector>

#include "ivbounds/json_io.hpp"
#include "ivbounds/linear_expr.hpp"
#include "ivbounds/rational.hpp"

namespace ivb {

enum class ExprStyle { text, latex };

// Renders terms in column order (z outermost, then d, then y), matching the
// printed listings, e.g. "-p_{10,0}-p_{01,0}+p_{11,0}-p_{10,1}-p_{11,1}".
inline std::string format_linear_expr(const LinearExpr& e, ExprStyle style) {
  std::string out;
  auto cell_name = [&](std::size_t y, std::size_t d, std::size_t z) {
    std::string yd = e.n <= 9 ? std::to_string(y) : "(" + std::to_string(y) + ")";
    std::string body = yd + std::to_string(d) + "," + std::to_string(z);
    return "p_{" + body + "}";
  };
  auto append_term = [&](const Rational& c, const std::string& name) {
    const bool neg = c < 0;
    Rational mag = neg ? Rational(-c) : c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (mag != 1 || name.empty()) {
      out += to_fraction_string(mag);
      if (!name.empty()) out += style == ExprStyle::latex ? " " : "*";
    }
    out += name;
  };
  for (std::size_t z = 0; z < e.ell; ++z)
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t y = 0; y < e.n; ++y) {
        const Rational& c = e.at(y, d, z);
        if (c != 0) append_term(c, cell_name(y, d, z));
      }
  if (e.constant != 0 || out.empty()) append_term(e.constant, "");
  return out;
}

inline Json linear_expr_to_json(const LinearExpr& e) {
  Json terms = Json::array();
  for (std::size_t z = 0; z < e.ell; ++z)
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t y = 0; y < e.n; ++y) {
        const Rational& c = e.at(y, d, z);
        if (c == 0) continue;
        terms.push_back({{"y", y}, {"d", d}, {"z", z}, {"coeff", to_fraction_string(c)}});
      }
  Json j;
  j["terms"] = terms;
  j["constant"] = to_fraction_string(e.constant);
  return j;
}

// LaTeX block reproducing the max{...} <= ATE <= min{...} layout.
inline std::string format_bounds_latex(const std::vector<LinearExpr>& lower,
                                       const std::vector<LinearExpr>& upper) {
  std::string s = "\\max\\left\\{\n\\begin{aligned}\n";
  for (std::size_t i = 0; i < lower.size(); ++i) {
    s += "&" + format_linear_expr(lower[i], ExprStyle::latex);
    s += i + 1 < lower.size() ? ",\\\\\n" : "\n";
  }
  s += "\\end{aligned}\n\\right\\}\n\\le \\mathrm{ATE} \\le\n\\min\\left\\{\n\\begin{aligned}\n";
  for (std::size_t i = 0; i < upper.size(); ++i) {
    s += "&" + format_linear_expr(upper[i], ExprStyle::latex);
    s += i + 1 < upper.size() ? ",\\\\\n" : "\n";
  }
  s += "\\end{aligned}\n\\right\\}\n";
  return s;
}

}  // namespace ivb
