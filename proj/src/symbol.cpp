#include "swt/symbol.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "swt/errors.hpp"

namespace swt {

PolynomialSymbol PolynomialSymbol::constant(cplx c) { return monomial(c, 0, 0); }

PolynomialSymbol PolynomialSymbol::monomial(cplx c, int x_power, int k_power) {
  PolynomialSymbol p;
  p.add_term(x_power, k_power, c);
  return p;
}

void PolynomialSymbol::add_term(int x_power, int k_power, cplx c) {
  if (x_power < 0 || k_power < 0) throw InvalidArgument("polynomial exponents must be non-negative");
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.try_emplace({x_power, k_power}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

cplx PolynomialSymbol::coefficient(int x_power, int k_power) const {
  auto it = terms_.find({x_power, k_power});
  return it == terms_.end() ? cplx(0.0) : it->second;
}

bool PolynomialSymbol::is_real(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const auto& t) { return std::abs(t.second.imag()) <= tol; });
}

int PolynomialSymbol::degree_x() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first);
  return d;
}

int PolynomialSymbol::degree_k() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.second);
  return d;
}

int PolynomialSymbol::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}

cplx PolynomialSymbol::operator()(double x, double k) const {
  cplx s = 0.0;
  for (const auto& [e, c] : terms_) s += c * std::pow(x, e.first) * std::pow(k, e.second);
  return s;
}

PolynomialSymbol PolynomialSymbol::derivative_x(int order) const {
  PolynomialSymbol d;
  for (const auto& [e, c] : terms_) {
    if (e.first < order) continue;
    double f = 1.0;
    for (int i = 0; i < order; ++i) f *= e.first - i;
    d.add_term(e.first - order, e.second, c * f);
  }
  return d;
}

PolynomialSymbol PolynomialSymbol::derivative_k(int order) const {
  PolynomialSymbol d;
  for (const auto& [e, c] : terms_) {
    if (e.second < order) continue;
    double f = 1.0;
    for (int i = 0; i < order; ++i) f *= e.second - i;
    d.add_term(e.first, e.second - order, c * f);
  }
  return d;
}

PolynomialSymbol PolynomialSymbol::real_part() const {
  PolynomialSymbol r;
  for (const auto& [e, c] : terms_) r.add_term(e.first, e.second, c.real());
  return r;
}

PolynomialSymbol PolynomialSymbol::imag_part() const {
  PolynomialSymbol r;
  for (const auto& [e, c] : terms_) r.add_term(e.first, e.second, c.imag());
  return r;
}

PolynomialSymbol PolynomialSymbol::conj() const {
  PolynomialSymbol r;
  for (const auto& [e, c] : terms_) r.add_term(e.first, e.second, std::conj(c));
  return r;
}

PolynomialSymbol PolynomialSymbol::pow(int exponent) const {
  if (exponent < 0) throw InvalidArgument("negative polynomial power");
  PolynomialSymbol r = constant(1.0);
  for (int i = 0; i < exponent; ++i) r = r * *this;
  return r;
}

PolynomialSymbol& PolynomialSymbol::operator+=(const PolynomialSymbol& o) {
  for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, c);
  return *this;
}

PolynomialSymbol& PolynomialSymbol::operator-=(const PolynomialSymbol& o) {
  for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, -c);
  return *this;
}

PolynomialSymbol& PolynomialSymbol::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

PolynomialSymbol operator*(const PolynomialSymbol& a, const PolynomialSymbol& b) {
  PolynomialSymbol r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
  return r;
}

PolynomialSymbol PolynomialSymbol::pruned(double tol) const {
  PolynomialSymbol r;
  for (const auto& [e, c] : terms_)
    if (std::abs(c) > tol) r.terms_.emplace(e, c);
  return r;
}

std::string PolynomialSymbol::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (c.imag() == 0.0)
      os << c.real();
    else if (c.real() == 0.0)
      os << c.imag() << "i";
    else
      os << "(" << c.real() << " + " << c.imag() << "i)";
    if (e.first > 0) os << "*x^" << e.first;
    if (e.second > 0) os << "*k^" << e.second;
  }
  return os.str();
}

namespace {

// Recursive-descent parser over one expression:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := ('+'|'-') unary | power
//   power  := primary ('^' integer)?
//   primary:= number ['i'] | 'i' | 'pi' | 'x' | 'k' | '(' expr ')'
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, int line) : s_(text), line_(line) {}

  PolynomialSymbol parse() {
    PolynomialSymbol p = expr();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("symbol line " + std::to_string(line_) + ", column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  PolynomialSymbol expr() {
    PolynomialSymbol p = term();
    for (;;) {
      if (accept('+'))
        p += term();
      else if (accept('-'))
        p -= term();
      else
        return p;
    }
  }

  PolynomialSymbol term() {
    PolynomialSymbol p = unary();
    for (;;) {
      if (accept('*')) {
        p = p * unary();
      } else if (accept('/')) {
        PolynomialSymbol d = unary();
        if (d.total_degree() != 0 || d.is_zero()) fail("division is only allowed by a non-zero constant");
        p *= 1.0 / d.coefficient(0, 0);
      } else {
        return p;
      }
    }
  }

  PolynomialSymbol unary() {
    if (accept('-')) return unary() * cplx(-1.0);
    if (accept('+')) return unary();
    return power();
  }

  PolynomialSymbol power() {
    PolynomialSymbol base = primary();
    if (accept('^')) {
      skip_space();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      int e = 0;
      std::from_chars(s_.data() + start, s_.data() + pos_, e);
      return base.pow(e);
    }
    return base;
  }

  PolynomialSymbol primary() {
    skip_space();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      PolynomialSymbol p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view id = s_.substr(start, pos_ - start);
      if (id == "x") return PolynomialSymbol::x();
      if (id == "k") return PolynomialSymbol::k();
      if (id == "i") return PolynomialSymbol::constant(cplx(0.0, 1.0));
      if (id == "pi") return PolynomialSymbol::constant(pi);
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  PolynomialSymbol number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    // imaginary suffix, e.g. 0.5i, unless it begins an identifier
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        (pos_ + 1 == s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return PolynomialSymbol::constant(cplx(0.0, v));
    }
    return PolynomialSymbol::constant(v);
  }

  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

PolynomialSymbol parse_symbol(std::string_view text) {
  PolynomialSymbol total;
  int line_no = 0;
  bool any = false;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    ++line_no;
    begin = end + 1;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (auto colon = line.find(':'); colon != std::string_view::npos) line = line.substr(colon + 1);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    total += ExpressionParser(line, line_no).parse();
    any = true;
  }
  if (!any) throw ParseError("symbol text contains no expression");
  return total;
}

RealPolynomial::RealPolynomial(std::vector<double> ascending) : c_(std::move(ascending)) {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

int RealPolynomial::degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }

double RealPolynomial::operator()(double x) const {
  double s = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * x + *it;
  return s;
}

RealPolynomial RealPolynomial::derivative() const {
  std::vector<double> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<double>(i));
  return RealPolynomial(std::move(d));
}

PolynomialSymbol RealPolynomial::as_symbol() const {
  PolynomialSymbol p;
  for (std::size_t i = 0; i < c_.size(); ++i) p.add_term(static_cast<int>(i), 0, c_[i]);
  return p;
}

}  // namespace swt
