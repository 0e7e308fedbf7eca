#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qpsurf {

using Rational = mpq_class;

// Accepts "7", "-3", "2/5", "-4/6" (normalized on read).
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  s = s.substr(b);
  if (!s.empty() && s[0] == '+') s = s.substr(1);
  bool ok = !s.empty();
  int slashes = 0;
  for (std::size_t i = 0; i < s.size() && ok; ++i) {
    char c = s[i];
    if (c == '/') {
      ok = ++slashes == 1 && i > 0 && i + 1 < s.size();
    } else if (c == '-') {
      ok = i == 0 && s.size() > 1;
    } else {
      ok = std::isdigit(static_cast<unsigned char>(c)) != 0;
    }
  }
  if (!ok) throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  Rational q(s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational rational_pow(const Rational& base, unsigned exponent) {
  Rational r = 1;
  for (unsigned i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace qpsurf
