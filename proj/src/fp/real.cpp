#include "stabilis/real.hpp"

#include "stabilis/errors.hpp"

#include <charconv>
#include <cmath>
#include <regex>

namespace stabilis {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Rational parse_rational(const std::string& text) {
  static const std::regex fraction(R"(\s*([+-]?\d+)\s*/\s*(\d+)\s*)");
  static const std::regex decimal(R"(\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*)");
  std::smatch m;
  if (std::regex_match(text, m, fraction)) {
    const Integer den(m[2].str());
    if (den == 0) throw InvalidArgument("zero denominator in '" + text + "'");
    Rational q(Integer(m[1].str()), den);
    q.canonicalize();
    return q;
  }
  if (std::regex_match(text, m, decimal) && (m[2].length() > 0 || m[3].length() > 0)) {
    const std::string digits = m[2].str() + m[3].str();
    Rational q(Integer(digits.empty() ? "0" : digits));
    long exp10 = -static_cast<long>(m[3].length());
    if (m[4].matched) exp10 += std::stol(m[4].str());
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    if (exp10 >= 0) {
      q *= scale;
    } else {
      q /= scale;
    }
    q.canonicalize();
    return m[1].str() == "-" ? Rational(-q) : q;
  }
  throw InvalidArgument("not a number: '" + text + "'");
}

}  // namespace stabilis
