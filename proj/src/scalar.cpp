#include "partlab/scalar.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <string>

#include "partlab/error.hpp"

namespace partlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedPartition: return "malformed partition";
    case ErrorKind::InvalidParams: return "invalid parameters";
    case ErrorKind::OutOfRange: return "out of range";
    case ErrorKind::UnsupportedKernel: return "unsupported deletion kernel";
    case ErrorKind::NonConvergence: return "series did not converge";
    case ErrorKind::DivergentMeasure: return "divergent measure";
    case ErrorKind::OracleFailure: return "moment oracle failure";
    case ErrorKind::DegenerateMass: return "degenerate mass";
    case ErrorKind::ZeroProbabilityEvent: return "conditioning on a null event";
    case ErrorKind::DegenerateBins: return "degenerate binning";
    case ErrorKind::NotExact: return "not exactly representable";
    case ErrorKind::Usage: return "usage";
  }
  return "error";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view strip_sign(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return s;
}

}  // namespace

bool is_rational_literal(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return all_digits(strip_sign(text));
  return all_digits(strip_sign(text.substr(0, slash))) && all_digits(text.substr(slash + 1));
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw Error(ErrorKind::Usage, "empty number");
  if (is_rational_literal(text)) {
    std::string s(text);
    if (s.front() == '+') s.erase(0, 1);
    Rational q;
    if (q.set_str(s, 10) != 0) throw Error(ErrorKind::Usage, "bad rational '" + s + "'");
    if (sgn(q.get_den()) == 0) throw Error(ErrorKind::Usage, "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  // Decimal literal [-]int[.frac][e[-]exp], converted without rounding.
  std::string_view s = text;
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string_view::npos) {
    std::string_view e = s.substr(epos + 1);
    auto [ptr, ec] = std::from_chars(e.data() + (e.starts_with('+') ? 1 : 0), e.data() + e.size(), exponent);
    if (ec != std::errc{} || ptr != e.data() + e.size()) {
      throw Error(ErrorKind::Usage, "bad exponent in '" + std::string(text) + "'");
    }
    s = s.substr(0, epos);
  }
  std::string digits;
  auto dot = s.find('.');
  if (dot == std::string_view::npos) {
    digits = std::string(s);
  } else {
    digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
    exponent -= static_cast<long>(s.size() - dot - 1);
  }
  if (!all_digits(digits)) throw Error(ErrorKind::Usage, "bad number '" + std::string(text) + "'");
  mpz_class mantissa(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

double parse_double(std::string_view text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  if (is_rational_literal(text)) return parse_rational(text).get_d();
  double out = 0.0;
  auto begin = text.data() + (text.starts_with('+') ? 1 : 0);
  auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::Usage, "bad number '" + std::string(text) + "'");
  }
  return out;
}

std::string format_scalar(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

std::string format_scalar(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace partlab
