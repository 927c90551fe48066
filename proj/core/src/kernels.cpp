#include "vmi/kernels.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace vmi {

RateKernel materialize(const PowerLaw& family) {
  if (!(family.amplitude > 0.0) || !(family.exponent > 0.0) || family.range < 1) {
    throw InvalidKernel("power law requires c > 0, beta > 0 and K >= 1");
  }
  RateKernel::Entries entries;
  for (Displacement n = 1; n <= family.range; ++n) {
    const double rate = family.amplitude * std::pow(static_cast<double>(n), -family.exponent);
    entries.emplace(n, rate);
    entries.emplace(-n, rate);
  }
  return RateKernel(std::move(entries), true);
}

namespace {

Rational parse_decimal(std::string_view text, std::string_view original) {
  auto fail = [&] {
    return std::invalid_argument("not a rate: \"" + std::string(original) + "\"");
  };
  if (text.empty()) throw fail();

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  boost::multiprecision::cpp_int digits = 0;
  std::int64_t scale = 0;  // value = digits * 10^scale
  bool any_digit = false;
  bool seen_point = false;
  std::size_t pos = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (seen_point) --scale;
      any_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw fail();
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw fail();
    std::string_view exponent = text.substr(pos + 1);
    if (!exponent.empty() && exponent.front() == '+') exponent.remove_prefix(1);
    std::int64_t e = 0;
    auto [end, ec] = std::from_chars(exponent.data(), exponent.data() + exponent.size(), e);
    if (ec != std::errc() || end != exponent.data() + exponent.size() || exponent.empty()) {
      throw fail();
    }
    if (e > 4096 || e < -4096) throw fail();
    scale += e;
  }

  Rational value(digits);
  boost::multiprecision::cpp_int power = 1;
  for (std::int64_t k = 0; k < (scale < 0 ? -scale : scale); ++k) power *= 10;
  if (scale < 0) {
    value /= Rational(power);
  } else {
    value *= Rational(power);
  }
  return negative ? Rational(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_exact_rate(std::string_view text) {
  const std::string_view body = trim(text);
  const auto slash = body.find('/');
  if (slash == std::string_view::npos) return parse_decimal(body, text);
  const Rational num = parse_decimal(trim(body.substr(0, slash)), text);
  const Rational den = parse_decimal(trim(body.substr(slash + 1)), text);
  if (den == 0) throw std::invalid_argument("not a rate: zero denominator in \"" + std::string(text) + "\"");
  return num / den;
}

}  // namespace vmi
