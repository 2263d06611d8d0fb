#include "stabilis/cli.hpp"

#include "stabilis/elementary.hpp"
#include "stabilis/errors.hpp"

#include <cctype>

namespace stabilis::cli {

namespace {

// Recursive descent over
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' ['-'] integer)?
//   atom   := number | 'pi' | '(' expr ')'
class Parser {
 public:
  Parser(const std::string& text, long bits) : s_(text), bits_(bits) {}

  ExactReal parse() {
    ExactReal v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("bad expression '" + s_ + "': " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExactReal expr() {
    ExactReal v = term();
    for (;;) {
      if (eat('+')) {
        v = v + term();
      } else if (eat('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }

  ExactReal term() {
    ExactReal v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        const ExactReal d = unary();
        if (d.contains(Rational(0))) fail("division by zero");
        v = v / d;
      } else {
        return v;
      }
    }
  }

  ExactReal unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  ExactReal power() {
    ExactReal base = atom();
    if (!eat('^')) return base;
    const bool negative = eat('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer");
    const long e = std::stol(s_.substr(start, pos_ - start));
    ExactReal r(Rational(1));
    for (long i = 0; i < e; ++i) r = r * base;
    if (negative) {
      if (r.contains(Rational(0))) fail("division by zero");
      r = ExactReal(Rational(1)) / r;
    }
    return r;
  }

  ExactReal atom() {
    skip();
    if (eat('(')) {
      ExactReal v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (s_.compare(pos_, 2, "pi") == 0) {
      pos_ += 2;
      return pi_enclosure(bits_);
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      const bool exp_sign = (c == '+' || c == '-') && pos_ > start &&
                            (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E');
      if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' ||
            exp_sign)) {
        break;
      }
      ++pos_;
    }
    if (start == pos_) fail("expected a number, 'pi' or '('");
    return ExactReal(parse_rational(s_.substr(start, pos_ - start)));
  }

  std::string s_;
  long bits_;
  std::size_t pos_ = 0;
};

}  // namespace

ExactReal evaluate_expression(const std::string& text, long bits) {
  return Parser(text, bits).parse();
}

std::vector<Real> parse_point(const std::string& text) {
  std::vector<Real> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? comma : comma - start);
    out.push_back(evaluate_expression(item, 256).to_real());
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace stabilis::cli
