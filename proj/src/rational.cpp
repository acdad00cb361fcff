#include "nestweight/rational.hpp"

#include <limits>
#include <numeric>

#include "nestweight/error.hpp"

namespace nestweight {

namespace {

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr __int128 kMin = std::numeric_limits<std::int64_t>::min() + 1;

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpq_class i128_to_mpq(__int128 n, __int128 d) {
  auto to_mpz = [](__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
  };
  mpq_class q(to_mpz(n), to_mpz(d));
  q.canonicalize();
  return q;
}

bool fits(const mpz_class& z) { return z.fits_slong_p() && z != mpz_class(std::numeric_limits<long>::min()); }

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw InputError("zero denominator");
  *this = from_i128(n, d);
}

Rational::Rational(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  if (fits(c.get_num()) && fits(c.get_den())) {
    num_ = c.get_num().get_si();
    den_ = c.get_den().get_si();
  } else {
    big_ = std::make_shared<const mpq_class>(c);
  }
}

Rational Rational::from_i128(__int128 n, __int128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n == 0) d = 1;
  if (n <= kMax && n >= kMin && d <= kMax) {
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }
  return Rational(i128_to_mpq(n, d));
}

Rational Rational::parse(std::string_view s) {
  auto digits = [](std::string_view t, bool allow_sign) {
    if (allow_sign && !t.empty() && t[0] == '-') t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string_view n = s.substr(0, slash);
  if (!digits(n, true)) throw InputError("malformed weight token '" + std::string(s) + "'");
  mpq_class q;
  if (slash == std::string_view::npos) {
    q = mpq_class(mpz_class(std::string(n)));
  } else {
    std::string_view d = s.substr(slash + 1);
    if (!digits(d, false) || d[0] == '0') throw InputError("malformed weight token '" + std::string(s) + "'");
    q = mpq_class(mpz_class(std::string(n)), mpz_class(std::string(d)));
  }
  return Rational(q);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) return Rational::from_i128(static_cast<__int128>(a.num_) + b.num_, 1);
    return Rational::from_i128(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                               static_cast<__int128>(a.den_) * b.den_);
  }
  return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
}

Rational operator-(const Rational& a) {
  if (!a.big_) return Rational::from_i128(-static_cast<__int128>(a.num_), a.den_);
  return Rational(mpq_class(-a.to_mpq()));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    return Rational::from_i128(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (!a.big_ || !b.big_) return false;  // canonical forms differ in size
  return *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

}  // namespace nestweight
