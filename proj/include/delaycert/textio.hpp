#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "delaycert/errors.hpp"
#include "delaycert/model.hpp"

namespace delaycert {

/// Shortest-faithful decimal rendering used by every CSV/JSON writer.
/// %.17g round-trips IEEE doubles exactly, keeping output byte-deterministic.
[[nodiscard]] inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Renders a complex scalar in the CLI's "a+bi" form.
[[nodiscard]] inline std::string format_complex(Complex z) {
  std::string out = format_g17(z.real());
  if (z.imag() >= 0.0 || std::isnan(z.imag())) out += "+";
  out += format_g17(z.imag());
  out += "i";
  return out;
}

namespace detail {

[[nodiscard]] inline double parse_double_token(const std::string& tok, const std::string& whole) {
  if (tok.empty()) raise(Errc::parse_error, "empty number in complex literal '" + whole + "'");
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.size())
    raise(Errc::parse_error, "bad number '" + tok + "' in complex literal '" + whole + "'");
  return v;
}

}  // namespace detail

/// Parses "a", "bi", "a+bi", "a-bi" (also bare "i", "-i", "+i"); the exponent
/// sign in forms like "1e-3+2e+4i" is handled. Whitespace is ignored.
[[nodiscard]] inline Complex parse_complex(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) raise(Errc::parse_error, "empty complex literal");

  const bool has_i = (s.back() == 'i' || s.back() == 'I');
  if (!has_i) return {detail::parse_double_token(s, text), 0.0};

  s.pop_back();  // drop the trailing i
  // Split before the sign of the imaginary part: the last '+'/'-' that is not
  // an exponent sign and not the leading sign.
  std::size_t split = std::string::npos;
  for (std::size_t pos = s.size(); pos-- > 1;) {
    const char c = s[pos];
    if ((c == '+' || c == '-') && s[pos - 1] != 'e' && s[pos - 1] != 'E') {
      split = pos;
      break;
    }
  }

  std::string re_tok, im_tok;
  if (split == std::string::npos) {
    im_tok = s;  // pure imaginary
  } else {
    re_tok = s.substr(0, split);
    im_tok = s.substr(split);
  }
  if (im_tok.empty() || im_tok == "+") im_tok = "1";
  if (im_tok == "-") im_tok = "-1";
  const double im = detail::parse_double_token(im_tok, text);
  const double re = re_tok.empty() ? 0.0 : detail::parse_double_token(re_tok, text);
  return {re, im};
}

}  // namespace delaycert
