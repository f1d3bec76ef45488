#include "orbitgrowth/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <vector>

#include "orbitgrowth/errors.hpp"

namespace orbitgrowth {

BigNat mersenne_number(std::uint64_t m) {
  BigNat value;
  mpz_ui_pow_ui(value.get_mpz_t(), 2, m);
  return value - 1;
}

std::string to_string(const ExactRational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal(const ExactRational& q, int significant) {
  mpf_class f(q, 512);
  const int size = gmp_snprintf(nullptr, 0, "%.*Fg", significant, f.get_mpf_t());
  std::vector<char> buffer(static_cast<std::size_t>(size) + 1);
  gmp_snprintf(buffer.data(), buffer.size(), "%.*Fg", significant, f.get_mpf_t());
  return std::string(buffer.data(), static_cast<std::size_t>(size));
}

ExactRational parse_rational(std::string_view text) {
  auto fail = [&] { return DomainError("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    ExactRational num = parse_rational(text.substr(0, slash));
    ExactRational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    ExactRational q = num / den;
    q.canonicalize();
    return q;
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long exponent = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      const std::string tail(text.substr(i + 1));
      if (tail.empty()) throw fail();
      std::size_t used = 0;
      long e = 0;
      try {
        e = std::stol(tail, &used);
      } catch (const std::exception&) {
        throw fail();
      }
      if (used != tail.size()) throw fail();
      exponent += e;
      i = text.size();
      break;
    } else {
      throw fail();
    }
  }
  if (!any_digit) throw fail();

  BigNat mantissa(digits, 10);
  BigNat scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  ExactRational q = exponent < 0 ? ExactRational(mantissa, scale) : ExactRational(mantissa * scale);
  q.canonicalize();
  return negative ? ExactRational(-q) : q;
}

long double to_long_double(const ExactRational& q) {
  // mpf keeps more than long double precision, so a single rounding occurs at the end.
  mpf_class f(q, 128);
  long exp2 = 0;
  const double mant = mpf_get_d_2exp(&exp2, f.get_mpf_t());
  mpf_class rest = f;
  // Refine: the double mantissa carries 53 bits; recover the next 64 from the remainder.
  mpf_class head(0, 128);
  mpf_set_d(head.get_mpf_t(), mant);
  if (exp2 >= 0) {
    mpf_mul_2exp(head.get_mpf_t(), head.get_mpf_t(), static_cast<mp_bitcnt_t>(exp2));
  } else {
    mpf_div_2exp(head.get_mpf_t(), head.get_mpf_t(), static_cast<mp_bitcnt_t>(-exp2));
  }
  rest -= head;
  long exp_rest = 0;
  const double tail = mpf_get_d_2exp(&exp_rest, rest.get_mpf_t());
  const long double result = std::ldexp(static_cast<long double>(mant), static_cast<int>(exp2)) +
                             std::ldexp(static_cast<long double>(tail), static_cast<int>(exp_rest));
  return result;
}

void FixedSum::add_reciprocal(std::uint64_t n) {
  if (n == 0) throw DomainError("FixedSum: reciprocal of zero");
  constexpr unsigned __int128 one = static_cast<unsigned __int128>(1) << kFractionBits;
  raw_ += one / n;
  ++terms_;
}

FixedSum& FixedSum::operator+=(const FixedSum& other) {
  raw_ += other.raw_;
  terms_ += other.terms_;
  return *this;
}

long double FixedSum::truncation_bound() const {
  return std::ldexp(static_cast<long double>(terms_), -kFractionBits);
}

long double FixedSum::to_long_double() const {
  const auto high = static_cast<std::uint64_t>(raw_ >> 64);
  const auto low = static_cast<std::uint64_t>(raw_);
  return std::ldexp(static_cast<long double>(high), 64 - kFractionBits) +
         std::ldexp(static_cast<long double>(low), -kFractionBits);
}

ExactRational FixedSum::to_rational() const {
  BigNat num(static_cast<unsigned long>(raw_ >> 64));
  num <<= 64;
  num += BigNat(static_cast<unsigned long>(static_cast<std::uint64_t>(raw_)));
  BigNat den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, kFractionBits);
  ExactRational q(num, den);
  q.canonicalize();
  return q;
}

std::string FixedSum::to_string(int significant) const {
  return to_decimal(to_rational(), significant);
}

}  // namespace orbitgrowth
