#include "chorale/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>

#include "chorale/errors.hpp"

namespace chorale {

namespace {

__extension__ typedef __int128 Wide;

std::int64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw RationalOverflowError();
  }
  return static_cast<std::int64_t>(v);
}

Wide gcd_wide(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Reduces num/den (den != 0) into a normalized pair.
void reduce(Wide num, Wide den, std::int64_t& out_num, std::int64_t& out_den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  out_num = narrow(num);
  out_den = narrow(den);
}

bool parse_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error("rational with zero denominator");
  reduce(num, den, num_, den_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-static_cast<Wide>(num_));
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  reduce(static_cast<Wide>(num_) * rhs.den_ + static_cast<Wide>(rhs.num_) * den_,
         static_cast<Wide>(den_) * rhs.den_, num_, den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  reduce(static_cast<Wide>(num_) * rhs.den_ - static_cast<Wide>(rhs.num_) * den_,
         static_cast<Wide>(den_) * rhs.den_, num_, den_);
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  reduce(static_cast<Wide>(num_) * rhs.num_, static_cast<Wide>(den_) * rhs.den_, num_, den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.num_ == 0) throw Error("rational division by zero");
  reduce(static_cast<Wide>(num_) * rhs.den_, static_cast<Wide>(den_) * rhs.num_, num_, den_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  return static_cast<Wide>(a.num_) * b.den_ <=> static_cast<Wide>(b.num_) * a.den_;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  std::int64_t n = 0;
  std::int64_t d = 1;
  bool ok = slash == std::string_view::npos
                ? parse_int(text, n)
                : parse_int(text.substr(0, slash), n) && parse_int(text.substr(slash + 1), d) && d > 0;
  if (!ok) throw ParseError("malformed rational '" + std::string(text) + "'");
  return Rational(n, d);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace chorale
