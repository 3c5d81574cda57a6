#include "levi/zexpr.hpp"

#include <cctype>
#include <charconv>
#include <system_error>

namespace levi::zexpr {

ParseError::ParseError(std::size_t offset, std::string message, std::vector<std::string> expected)
    : Error("parse error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset), expected_(std::move(expected)) {}

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
public:
  Parser(std::string_view text, int n) : s_(text), n_(n) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) {
      fail("unexpected input", {"'+'", "'-'", "'*'", "'^'", "end of input"});
    }
    return e;
  }

private:
  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& message, std::vector<std::string> expected) const {
    throw ParseError(pos_, message, std::move(expected));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'", {std::string("'") + c + "'"});
    ++pos_;
  }

  Expr expr() {
    const bool negate_first = peek() == '-';
    if (negate_first) ++pos_;
    std::vector<Expr> terms;
    terms.push_back(negate_first ? Expr::neg(term()) : term());
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        terms.push_back(term());
      } else if (c == '-') {
        ++pos_;
        terms.push_back(Expr::neg(term()));
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors;
    factors.push_back(factor());
    while (peek() == '*') {
      ++pos_;
      factors.push_back(factor());
    }
    return Expr::product(std::move(factors));
  }

  Expr factor() {
    Expr base = atom();
    if (peek() != '^') return base;
    ++pos_;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    if (start == pos_) {
      fail("expected an unsigned integer exponent", {"unsigned integer"});
    }
    unsigned long long k = 0;
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, k);
    if (ec != std::errc() || k > static_cast<unsigned long long>(kMaxExponent)) {
      pos_ = start;
      fail("exponent exceeds " + std::to_string(kMaxExponent), {"exponent <= 16"});
    }
    return Expr::power(std::move(base), static_cast<int>(k));
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && is_digit(s_[p])) {
        pos_ = p;
        while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc() || ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number", {"number"});
    }
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        (pos_ + 1 == s_.size() || !is_ident_char(s_[pos_ + 1]))) {
      ++pos_;
      return Expr::constant(Complex(0.0, value));
    }
    return Expr::constant(Complex(value, 0.0));
  }

  Expr call_argument() {
    expect('(');
    Expr e = expr();
    expect(')');
    return e;
  }

  Expr atom() {
    const char c = peek();
    const std::size_t start = pos_;
    if (is_digit(c) || c == '.') return number();
    if (c == '(') return call_argument();
    if (std::isalpha(static_cast<unsigned char>(c)) == 0 && c != '_') {
      fail(c == '\0' ? "unexpected end of input" : "unexpected character",
           {"number", "'i'", "variable", "'conj('", "'re('", "'im('", "'abs2('", "'('"});
    }
    while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    const std::string_view word = s_.substr(start, pos_ - start);
    if (word == "i") return Expr::constant(Complex(0.0, 1.0));
    if (word.size() > 1 && word[0] == 'z' &&
        word.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      long long index = 0;
      const auto [ptr, ec] = std::from_chars(word.data() + 1, word.data() + word.size(), index);
      if (ec != std::errc() || index < 1 || index > n_) {
        pos_ = start;
        fail("variable " + std::string(word) + " outside z1..z" + std::to_string(n_),
             {"z1..z" + std::to_string(n_)});
      }
      return Expr::var(static_cast<int>(index - 1));
    }
    if (word == "conj") return conjugate(call_argument());
    if (word == "re") {
      Expr e = call_argument();
      return Expr::product({Expr::constant(0.5), Expr::sum({e, conjugate(e)})});
    }
    if (word == "im") {
      Expr e = call_argument();
      return Expr::product({Expr::neg(Expr::constant(Complex(0.0, 0.5))),
                            Expr::sum({e, Expr::neg(conjugate(e))})});
    }
    if (word == "abs2") {
      Expr e = call_argument();
      return Expr::product({e, conjugate(e)});
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(word) + "'",
         {"'i'", "variable", "'conj('", "'re('", "'im('", "'abs2('"});
  }
};

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

enum class Ctx { top, term, factor, base };

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string format_constant(Complex c) {
  if (c.imag() == 0.0 && !std::signbit(c.real())) return format_double(c.real());
  if (c.real() == 0.0 && !std::signbit(c.real()) && c.imag() > 0.0) {
    return format_double(c.imag()) + "i";
  }
  std::string out = "(";
  if (c.real() != 0.0 || c.imag() == 0.0) {
    out += format_double(c.real());
    if (c.imag() != 0.0) out += c.imag() < 0.0 ? " - " : " + ";
  } else if (c.imag() < 0.0) {
    out += "-";
  }
  if (c.imag() != 0.0) out += format_double(std::abs(c.imag())) + "i";
  return out + ")";
}

std::string print(const Expr& e, Ctx ctx);

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string print(const Expr& e, Ctx ctx) {
  switch (e.kind()) {
  case NodeKind::constant:
    return format_constant(e.value());
  case NodeKind::var:
    return "z" + std::to_string(e.index() + 1);
  case NodeKind::conj_var:
    return "conj(z" + std::to_string(e.index() + 1) + ")";
  case NodeKind::neg: {
    const std::string s = "-" + print(e.children()[0], Ctx::term);
    return ctx == Ctx::top ? s : paren(s);
  }
  case NodeKind::sum: {
    const auto terms = e.children();
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const Expr& t = terms[i];
      if (t.kind() == NodeKind::neg) {
        s += (i == 0 ? "-" : " - ") + print(t.children()[0], Ctx::term);
      } else {
        s += (i == 0 ? "" : " + ") + print(t, Ctx::term);
      }
    }
    return ctx == Ctx::top ? s : paren(s);
  }
  case NodeKind::product: {
    std::string s;
    for (const auto& f : e.children()) {
      if (!s.empty()) s += "*";
      s += print(f, Ctx::factor);
    }
    return ctx == Ctx::top || ctx == Ctx::term ? s : paren(s);
  }
  case NodeKind::power: {
    const Expr& b = e.children()[0];
    const bool atomic = b.kind() == NodeKind::var || b.kind() == NodeKind::conj_var ||
                        b.kind() == NodeKind::constant;
    const std::string s =
        (atomic ? print(b, Ctx::base) : paren(print(b, Ctx::top))) + "^" + std::to_string(e.exponent());
    return ctx == Ctx::base ? paren(s) : s;
  }
  }
  return {};
}

} // namespace

Expr parse(std::string_view text, int n) {
  if (n < 1) throw DimensionError("parse: dimension must be at least 1");
  return Parser(text, n).run();
}

std::string to_string(const Expr& e) { return print(e, Ctx::top); }

} // namespace levi::zexpr
