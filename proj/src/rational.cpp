#include "pnet/rational.hpp"

namespace pnet {

namespace {

BigInt parse_big_int(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("Rational: empty integer token");
  std::size_t start = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (start == s.size()) throw std::invalid_argument("Rational: bare sign");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw std::invalid_argument("Rational: bad character in '" + s + "'");
  }
  return BigInt(s);
}

}  // namespace

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    return Rational(parse_big_int(text), BigInt(1));
  }
  const BigInt num = parse_big_int(text.substr(0, slash));
  const BigInt den = parse_big_int(text.substr(slash + 1));
  return Rational(num, den);
}

std::string Rational::str() const {
  std::string out = num().str();
  if (den() != 1) {
    out += '/';
    out += den().str();
  }
  return out;
}

}  // namespace pnet
