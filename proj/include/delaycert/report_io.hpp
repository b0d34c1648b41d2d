#pragma once

#include <cmath>
#include <string>

#include "delaycert/admissibility.hpp"
#include "delaycert/ddesim.hpp"
#include "delaycert/textio.hpp"

namespace delaycert {

namespace detail {

/// Non-finite report quantities (undefined tail, infinite ratio) become null.
[[nodiscard]] inline std::string json_number(double x) {
  return std::isfinite(x) ? format_g17(x) : std::string("null");
}

[[nodiscard]] inline std::string json_complex(Complex z) {
  return "[" + format_g17(z.real()) + ", " + format_g17(z.imag()) + "]";
}

}  // namespace detail

/// Deterministic JSON rendering of a certification report. paranoid_checked
/// >= 0 appends the count of certificates re-verified by quadrature.
[[nodiscard]] inline std::string to_json(const SystemReport& rep, int paranoid_checked = -1) {
  std::string out = "{\n";
  out += "  \"N\": " + std::to_string(rep.N) + ",\n";
  out += "  \"K\": " + std::to_string(rep.K) + ",\n";
  out += "  \"q_cap\": " + format_g17(rep.q_cap) + ",\n";
  out += "  \"verdict\": \"" + std::string(verdict_name(rep.verdict)) + "\",\n";
  out += "  \"violating_k\": ";
  out += (rep.verdict == Verdict::hypothesis_violated ? std::to_string(rep.violating_k)
                                                      : std::string("null"));
  out += ",\n";
  out += "  \"partial_sum\": " + detail::json_number(rep.partial_sum) + ",\n";
  out += "  \"empirical_ratio\": " + detail::json_number(rep.empirical_ratio) + ",\n";
  out += "  \"tail_bound\": " + detail::json_number(rep.tail_bound) + ",\n";
  out += "  \"global_bound\": " + detail::json_number(rep.global_bound) + ",\n";
  if (paranoid_checked >= 0)
    out += "  \"paranoid_checked\": " + std::to_string(paranoid_checked) + ",\n";
  out += "  \"certificates\": [";
  for (std::size_t i = 0; i < rep.certificates.size(); ++i) {
    const auto& c = rep.certificates[i];
    out += (i ? ",\n    {" : "\n    {");
    out += "\"k\": " + std::to_string(c.k);
    out += ", \"lambda\": " + detail::json_complex(c.lambda);
    out += ", \"gamma\": " + detail::json_complex(c.gamma);
    out += ", \"b\": " + detail::json_complex(c.b);
    out += ", \"member\": ";
    out += (c.member ? "true" : "false");
    out += ", \"hypothesis_boundary\": ";
    out += (c.hypothesis_boundary ? "true" : "false");
    out += ", \"J\": " + detail::json_number(c.J);
    out += ", \"C\": " + detail::json_number(c.C);
    out += ", \"bound\": " + detail::json_number(c.bound);
    out += "}";
  }
  out += "\n  ]\n}\n";
  return out;
}

[[nodiscard]] inline std::string to_json(const BoundCheckReport& rep) {
  std::string out = "{\n";
  out += "  \"sup_ratio\": " + detail::json_number(rep.sup_ratio) + ",\n";
  out += "  \"t_at_max\": " + detail::json_number(rep.t_at_max) + ",\n";
  out += "  \"J_used\": " + detail::json_number(rep.J_used) + ",\n";
  out += "  \"passed\": ";
  out += (rep.passed ? "true" : "false");
  out += "\n}\n";
  return out;
}

}  // namespace delaycert
