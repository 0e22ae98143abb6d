#include "svlab/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "svlab/error.hpp"

namespace svlab {

namespace {

bool valid_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational rational_from_string(const std::string& text) {
  std::size_t b = text.find_first_not_of(" \t");
  std::size_t e = text.find_last_not_of(" \t");
  if (b == std::string::npos) fail("empty rational literal");
  std::string s = text.substr(b, e - b + 1);

  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_integer_token(num) || !valid_integer_token(den))
      fail("malformed rational literal: " + text);
    mpz_class num_z(num), den_z(den);
    if (den_z == 0) fail("zero denominator in rational literal: " + text);
    Rational q(num_z, den_z);
    q.canonicalize();
    return q;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    if (!valid_integer_token(ip) || fp.empty() || !valid_integer_token(fp))
      fail("malformed decimal literal: " + text);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    mpz_class whole(ip), frac(fp);
    mpz_class num = whole * scale + frac;
    if (neg) num = -num;
    Rational q(num, scale);
    q.canonicalize();
    return q;
  }
  if (!valid_integer_token(s)) fail("malformed rational literal: " + text);
  return Rational(mpz_class(s));
}

Rational rational_exact(double x) {
  if (!std::isfinite(x)) fail("non-finite value where a rational was expected");
  Rational q(x);  // exact: doubles are dyadic rationals
  q.canonicalize();
  return q;
}

Rational rational_snap(double x) {
  Rational target = rational_exact(x);
  // Continued-fraction convergents of |x|; stop at the first within 1e-9.
  bool neg = sgn(target) < 0;
  Rational a = abs(target);
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;  // convergent recurrences
  Rational rem = a;
  const Rational tol = Rational(1, 1000000000);
  for (int iter = 0; iter < 64; ++iter) {
    mpz_class whole = rem.get_num() / rem.get_den();  // floor (rem >= 0)
    mpz_class p2 = whole * p1 + p0, q2 = whole * q1 + q0;
    if (q2 > 1000000) break;
    Rational conv(p2, q2);
    conv.canonicalize();
    if (abs(conv - a) <= tol) return neg ? Rational(-conv) : conv;
    Rational frac = rem - Rational(whole);
    if (frac == 0) break;
    rem = Rational(1) / frac;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
  }
  fail("number is not close to a small rational (use a \"p/q\" or decimal string): " +
       std::to_string(x));
}

std::string rational_str(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double rational_to_double(const Rational& q) { return q.get_d(); }

std::int64_t rational_ceil(const Rational& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  if (!c.fits_slong_p()) fail("ceiling out of int64 range");
  return static_cast<std::int64_t>(c.get_si());
}

}  // namespace svlab
