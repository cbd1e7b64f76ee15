#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace kcx {

class ArithError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parse failures carry a 1-based line/column.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(col) + ": " + msg),
        line(line), col(col), detail(msg) {}
  int line;
  int col;
  std::string detail;
};

// Element of Q (p == 0) or F_p. Rationals are kept canonical by GMP;
// residues live in [0, p) as integers inside the same mpq_class.
class Scalar {
 public:
  Scalar() = default;
  explicit Scalar(long v, uint32_t p = 0);
  Scalar(const mpq_class& q, uint32_t p);

  uint32_t characteristic() const { return p_; }
  const mpq_class& value() const { return q_; }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar inverse() const;
  bool operator==(const Scalar& o) const { return q_ == o.q_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  // Only meaningful in characteristic 0; residues are never negative.
  bool is_negative() const { return sgn(q_) < 0; }
  std::string to_string() const;

 private:
  void reduce_mod();
  mpq_class q_{0};
  uint32_t p_ = 0;
};

bool is_prime(uint32_t p);

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(size_t nvars) : e_(nvars, 0) {}
  explicit Monomial(std::vector<uint32_t> e);

  size_t nvars() const { return e_.size(); }
  uint32_t operator[](size_t i) const { return e_[i]; }
  uint32_t degree() const { return deg_; }
  const std::vector<uint32_t>& exponents() const { return e_; }
  void set(size_t i, uint32_t v);
  bool is_one() const { return deg_ == 0; }

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  // Requires divides(o); returns o / *this.
  Monomial quotient_of(const Monomial& o) const;
  Monomial lcm(const Monomial& o) const;
  bool coprime(const Monomial& o) const;

  bool operator==(const Monomial& o) const { return e_ == o.e_; }
  bool operator!=(const Monomial& o) const { return e_ != o.e_; }

 private:
  std::vector<uint32_t> e_;
  uint32_t deg_ = 0;
};

// Graded reverse lexicographic with x1 > x2 > ... ; returns -1, 0, 1.
int grevlex_cmp(const Monomial& a, const Monomial& b);

struct MonoGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return grevlex_cmp(a, b) > 0;
  }
};

struct Ring {
  uint32_t p = 0;
  std::vector<std::string> vars;
  int index_of(const std::string& name) const;
  size_t nvars() const { return vars.size(); }
  bool same_as(const Ring& o) const { return p == o.p && vars == o.vars; }
};
using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(uint32_t p, std::vector<std::string> vars);

class Polynomial {
 public:
  using TermMap = std::map<Monomial, Scalar, MonoGreater>;

  Polynomial() = default;
  explicit Polynomial(RingPtr r) : ring_(std::move(r)) {}
  static Polynomial constant(const RingPtr& r, const Scalar& c);
  static Polynomial constant(const RingPtr& r, long c);
  static Polynomial variable(const RingPtr& r, size_t i);
  static Polynomial term(const RingPtr& r, const Monomial& m, const Scalar& c);

  const RingPtr& ring() const { return ring_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  size_t size() const { return terms_.size(); }
  int degree() const;  // -1 for zero
  const Monomial& leading_monomial() const;
  const Scalar& leading_coeff() const;
  Scalar coeff(const Monomial& m) const;
  Scalar zero_scalar() const { return Scalar(0, ring_ ? ring_->p : 0); }

  void add_term(const Monomial& m, const Scalar& c);
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial scaled(const Scalar& c) const;
  Polynomial times_term(const Monomial& m, const Scalar& c) const;
  Polynomial pow(unsigned n) const;
  Polynomial monic() const;

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  // Rendering with the ring's variable names or a display override.
  std::string to_string() const;
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  void check_ring(const Polynomial& o) const;
  RingPtr ring_;
  TermMap terms_;
};

std::string render_monomial(const Monomial& m, const std::vector<std::string>& names);

// ---- expressions ----

struct Token {
  enum Kind { End, Number, Ident, Symbol } kind = End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string src);
  const Token& peek(size_t ahead = 0);
  Token next();
  bool accept(const std::string& sym);
  Token expect(const std::string& sym);
  Token expect_ident();
  bool at_end() { return peek().kind == Token::End; }
  [[noreturn]] void fail(const std::string& msg, const Token& at) const;

 private:
  void lex_all();
  std::string src_;
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

struct Expr {
  enum Kind { Num, Var, Add, Sub, Mul, Neg, Pow } kind = Num;
  mpq_class num;
  std::string name;
  unsigned exponent = 0;
  std::vector<Expr> kids;
  int line = 1;
  int col = 1;
};

Expr parse_expr(Lexer& lx);
// Unary/power level, for callers that assemble their own products.
Expr parse_factor(Lexer& lx);
Expr parse_expr_string(const std::string& s);

Polynomial poly_normalize(const Expr& e, const RingPtr& ring);
Polynomial parse_poly(const std::string& s, const RingPtr& ring);

// images[i] is the image of ring variable i; all images share one ring.
Polynomial poly_substitute(const Polynomial& p, const std::vector<Polynomial>& images,
                           const RingPtr& target);
Polynomial poly_substitute(const Polynomial& p,
                           const std::map<std::string, Polynomial>& images,
                           const RingPtr& target);
Polynomial formal_partial(const Polynomial& p, size_t var);
Polynomial formal_partial(const Polynomial& p, const std::string& var);

}  // namespace kcx
