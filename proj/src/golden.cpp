#include "qcorr/golden.hpp"

#include <cctype>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr __int128 kSignLimit = static_cast<__int128>(1) << 61;

__int128 abs128(__int128 x) { return x < 0 ? -x : x; }

__int128 gcd128(__int128 a, __int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    auto t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(__int128 x) {
  if (x > INT64_MAX || x < INT64_MIN) throw std::overflow_error("golden arithmetic overflow");
  return static_cast<std::int64_t>(x);
}

}  // namespace

int golden_sign(__int128 p, __int128 q) {
  if (abs128(p) >= kSignLimit || abs128(q) >= kSignLimit) throw std::overflow_error("golden_sign operand too large");
  if (q == 0) return (p > 0) - (p < 0);
  // p + q tau = (s + q sqrt5) / 2 with s = 2p + q
  const __int128 s = 2 * p + q;
  if (s == 0) return q > 0 ? 1 : -1;
  if (s > 0 && q > 0) return 1;
  if (s < 0 && q < 0) return -1;
  const auto s2 = static_cast<unsigned __int128>(s * s);
  const auto q2 = static_cast<unsigned __int128>(5) * static_cast<unsigned __int128>(q * q);
  if (s > 0) return s2 > q2 ? 1 : -1;
  return q2 > s2 ? 1 : -1;
}

QuadRational::QuadRational(std::int64_t a, std::int64_t b, std::int64_t d) {
  if (d == 0) throw ParameterError("zero denominator");
  *this = make(a, b, d);
}

QuadRational QuadRational::make(__int128 a, __int128 b, __int128 d) {
  if (d == 0) throw ParameterError("division by zero");
  if (d < 0) {
    a = -a;
    b = -b;
    d = -d;
  }
  auto g = gcd128(gcd128(a, b), d);
  if (g > 1) {
    a /= g;
    b /= g;
    d /= g;
  }
  QuadRational r;
  r.a_ = narrow(a);
  r.b_ = narrow(b);
  r.d_ = narrow(d);
  return r;
}

long double QuadRational::value() const {
  return (static_cast<long double>(a_) + static_cast<long double>(b_) * kTau) / static_cast<long double>(d_);
}

QuadRational QuadRational::conjugate() const {
  // a + b tau' = (a + b) - b tau
  return make(static_cast<__int128>(a_) + b_, -static_cast<__int128>(b_), d_);
}

QuadRational QuadRational::operator+(const QuadRational& o) const {
  return make(static_cast<__int128>(a_) * o.d_ + static_cast<__int128>(o.a_) * d_,
              static_cast<__int128>(b_) * o.d_ + static_cast<__int128>(o.b_) * d_, static_cast<__int128>(d_) * o.d_);
}

QuadRational QuadRational::operator-(const QuadRational& o) const { return *this + (-o); }

QuadRational QuadRational::operator-() const { return make(-static_cast<__int128>(a_), -static_cast<__int128>(b_), d_); }

QuadRational QuadRational::operator*(const QuadRational& o) const {
  const __int128 a1 = a_, b1 = b_, a2 = o.a_, b2 = o.b_;
  return make(a1 * a2 + b1 * b2, a1 * b2 + a2 * b1 + b1 * b2, static_cast<__int128>(d_) * o.d_);
}

QuadRational QuadRational::operator/(const QuadRational& o) const {
  if (o.is_zero()) throw ParameterError("division by zero");
  // 1 / ((a + b tau)/d) = d (a + b - b tau) / (a^2 + ab - b^2)
  const __int128 a = o.a_, b = o.b_;
  const __int128 norm = a * a + a * b - b * b;
  const auto inv = make(static_cast<__int128>(o.d_) * (a + b), -static_cast<__int128>(o.d_) * b, norm);
  return *this * inv;
}

int QuadRational::sign() const { return golden_sign(a_, b_); }

std::strong_ordering QuadRational::operator<=>(const QuadRational& o) const {
  const int s = (*this - o).sign();
  return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::string QuadRational::to_string() const {
  std::string num;
  if (b_ == 0) {
    num = fmt::format("{}", a_);
  } else {
    std::string tau_part = b_ == 1 ? "tau" : b_ == -1 ? "-tau" : fmt::format("{}*tau", b_);
    if (a_ == 0) {
      num = tau_part;
    } else {
      num = fmt::format("{}{}{}", a_, b_ > 0 ? "+" : "", tau_part);
    }
  }
  if (d_ == 1) return num;
  if (b_ == 0) return fmt::format("{}/{}", num, d_);
  return fmt::format("({})/{}", num, d_);
}

std::string to_string(QuadLatticePoint p) {
  return fmt::format("{}{}{}*tau", p.u, p.v < 0 ? "-" : "+", p.v < 0 ? -p.v : p.v);
}

namespace {

class ExpressionParser {
 public:
  explicit ExpressionParser(const std::string& text) : text_(text) {}

  QuadRational parse() {
    auto value = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return value;
  }

 private:
  [[noreturn]] void fail(const char* what) const {
    throw ParameterError(fmt::format("bad number expression '{}': {} at position {}", text_, what, pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_word(const char* word) {
    skip_space();
    const std::string w(word);
    if (text_.compare(pos_, w.size(), w) == 0) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  QuadRational expr() {
    auto value = term();
    for (;;) {
      if (accept('+')) {
        value = value + term();
      } else if (accept('-')) {
        value = value - term();
      } else {
        return value;
      }
    }
  }

  QuadRational term() {
    auto value = unary();
    for (;;) {
      if (accept('*')) {
        value = value * unary();
      } else if (accept('/')) {
        auto rhs = unary();
        if (rhs.is_zero()) fail("division by zero");
        value = value / rhs;
      } else {
        return value;
      }
    }
  }

  QuadRational unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  QuadRational primary() {
    if (accept('(')) {
      auto value = expr();
      if (!accept(')')) fail("missing ')'");
      return value;
    }
    if (accept_word("tau")) return QuadRational::tau();
    if (accept_word("sqrt5")) return QuadRational(-1, 2);
    return number();
  }

  QuadRational number() {
    skip_space();
    const auto start = pos_;
    __int128 mantissa = 0;
    int scale = 0;
    bool digits = false;
    bool dot = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        mantissa = mantissa * 10 + (c - '0');
        if (mantissa > INT64_MAX) fail("number too long");
        if (dot) ++scale;
        digits = true;
      } else if (c == '.' && !dot) {
        dot = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (!digits) {
      pos_ = start;
      fail("expected number");
    }
    int exponent = 0;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      int sign = 1;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) sign = text_[pos_++] == '-' ? -1 : 1;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("bad exponent");
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        exponent = exponent * 10 + (text_[pos_++] - '0');
        if (exponent > 18) fail("exponent too large");
      }
      exponent *= sign;
    }
    const int net = exponent - scale;
    __int128 p10 = 1;
    for (int i = 0; i < (net < 0 ? -net : net); ++i) p10 *= 10;
    if (net >= 0) return QuadRational(narrow(mantissa * p10));
    return QuadRational(narrow(mantissa), 0, narrow(p10));
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

QuadRational parse_golden_expression(const std::string& text) {
  try {
    return ExpressionParser(text).parse();
  } catch (const std::overflow_error& e) {
    throw ParameterError(fmt::format("number expression '{}' overflows: {}", text, e.what()));
  }
}

}  // namespace qcorr
