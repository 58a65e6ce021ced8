#include "omdist/omspace.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace omdist {

const Rat& Om::exponent() const {
  if (!exponent_) throw std::logic_error("Om::exponent: zero has no exponent");
  return *exponent_;
}

OmCmp om_cmp(const Om& d, const Om& e) {
  if (d.is_zero() && e.is_zero()) return OmCmp::Equal;
  if (d.is_zero()) return OmCmp::MuchLess;
  if (e.is_zero()) return OmCmp::MuchGreater;
  // d^m << d^n iff m > n
  int c = cmp(d.exponent(), e.exponent());
  if (c > 0) return OmCmp::MuchLess;
  if (c == 0) return OmCmp::Equal;
  return OmCmp::MuchGreater;
}

OmPoint OmPoint::constant(Int value) { return term(std::move(value), Rat(0)); }

OmPoint OmPoint::delta_power(const Rat& exponent) {
  return term(Int(1), exponent);
}

OmPoint OmPoint::term(Int coefficient, const Rat& exponent) {
  OmPoint p;
  p.add_term(exponent, coefficient);
  return p;
}

void OmPoint::add_term(const Rat& exponent, const Int& coefficient) {
  if (sign(coefficient) == 0) return;
  auto it = terms_.find(exponent);
  if (it == terms_.end()) {
    terms_.emplace(exponent, coefficient);
    return;
  }
  it->second += coefficient;
  if (sign(it->second) == 0) terms_.erase(it);
}

OmPoint OmPoint::operator+(const OmPoint& other) const {
  OmPoint out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, c);
  return out;
}

OmPoint OmPoint::operator-(const OmPoint& other) const {
  OmPoint out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, -c);
  return out;
}

OmPoint OmPoint::operator-() const {
  OmPoint out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

OmPoint OmPoint::scaled(const Int& factor) const {
  OmPoint out;
  if (sign(factor) == 0) return out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * factor);
  return out;
}

int point_cmp(const OmPoint& a, const OmPoint& b) {
  OmPoint diff = a - b;
  if (diff.is_zero()) return 0;
  return sign(diff.terms().begin()->second);
}

Om od(const OmPoint& a, const OmPoint& b) {
  OmPoint diff = a - b;
  if (diff.is_zero()) return Om::zero();
  return Om::delta_power(diff.terms().begin()->first);
}

std::vector<OmPoint> points_at_scale(const OmPoint& base, const Om& scale,
                                     int count) {
  if (count < 1) throw std::invalid_argument("points_at_scale: count must be >= 1");
  if (scale.is_zero() && count > 1)
    throw std::invalid_argument("points_at_scale: degenerate scale");
  std::vector<OmPoint> out;
  out.reserve(count);
  out.push_back(base);
  for (int i = 1; i < count; ++i) {
    out.push_back(base + OmPoint::term(Int(i), scale.exponent()));
  }
  return out;
}

namespace {

bool is_integer(const Rat& q) {
  return mpz_cmp_ui(mpq_denref(q.get_mpq_t()), 1) == 0;
}

void append_power(std::ostream& os, const Rat& exponent) {
  os << 'd';
  if (exponent == 1) return;
  os << '^';
  if (is_integer(exponent) && sign(exponent) >= 0) {
    os << exponent.get_num().get_str();
  } else {
    os << '(' << rat_to_string(exponent) << ')';
  }
}

}  // namespace

std::string to_string(const OmPoint& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    Int mag = abs(c);
    if (first) {
      if (sign(c) < 0) os << '-';
      first = false;
    } else {
      os << (sign(c) < 0 ? " - " : " + ");
    }
    if (e == 0) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << '*';
      append_power(os, e);
    }
  }
  return os.str();
}

std::string to_string(const Om& d) {
  if (d.is_zero()) return "0";
  std::ostringstream os;
  append_power(os, d.exponent());
  return os.str();
}

namespace {

// Single-line scanner for the point grammar:
//   point  := [-] term (('+'|'-') term)*
//   term   := integer | [integer '*'] power
//   power  := 'd' ['^' (integer | '(' rational ')')]
class PointScanner {
 public:
  explicit PointScanner(const std::string& text) : text_(text) {}

  OmPoint parse() {
    skip_space();
    bool negative = false;
    if (eat('-')) negative = true;
    OmPoint p = term(negative);
    skip_space();
    while (pos_ < text_.size()) {
      bool minus;
      if (eat('+')) {
        minus = false;
      } else if (eat('-')) {
        minus = true;
      } else {
        fail("expected '+' or '-'");
      }
      p = p + term(minus);
      skip_space();
    }
    return p;
  }

 private:
  OmPoint term(bool negative) {
    skip_space();
    Int coeff(1);
    bool saw_coeff = false;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      coeff = integer();
      saw_coeff = true;
      skip_space();
      if (!eat('*')) {
        if (pos_ < text_.size() && text_[pos_] == 'd')
          fail("expected '*' between coefficient and power");
        return OmPoint::constant(negative ? -coeff : coeff);
      }
      skip_space();
    }
    if (!eat('d')) {
      fail(saw_coeff ? "expected power after '*'" : "expected term");
    }
    Rat exponent(1);
    if (eat('^')) {
      if (eat('(')) {
        exponent = rational();
        if (!eat(')')) fail("expected ')'");
      } else {
        exponent = Rat(integer());
      }
    }
    return OmPoint::term(negative ? -coeff : coeff, exponent);
  }

  Int integer() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_) fail("expected digits");
    return Int(text_.substr(start, pos_ - start));
  }

  Rat rational() {
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/'))
      ++pos_;
    auto q = rat_from_string(text_.substr(start, pos_ - start));
    if (!q) fail("malformed rational");
    return *q;
  }

  void skip_space() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }

  bool eat(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("parse_om_point: " + what + " at column " +
                                std::to_string(pos_ + 1));
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

OmPoint parse_om_point(const std::string& text) {
  std::size_t i = text.find_first_not_of(' ');
  if (i != std::string::npos && text[i] == '0' &&
      text.find_first_not_of(' ', i + 1) == std::string::npos) {
    return OmPoint{};
  }
  return PointScanner(text).parse();
}

}  // namespace omdist
