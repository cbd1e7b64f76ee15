#include "kcx/arith_poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace kcx {

// ---------------- Scalar ----------------

bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

Scalar::Scalar(long v, uint32_t p) : q_(v), p_(p) { reduce_mod(); }

Scalar::Scalar(const mpq_class& q, uint32_t p) : q_(q), p_(p) {
  q_.canonicalize();
  reduce_mod();
}

static uint64_t mod_of(const mpz_class& z, uint32_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
  return r.get_ui();
}

static uint64_t inv_mod(uint64_t a, uint32_t p) {
  if (a % p == 0) throw ArithError("division by zero in F_" + std::to_string(p));
  uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

void Scalar::reduce_mod() {
  if (p_ == 0) return;
  uint64_t n = mod_of(q_.get_num(), p_);
  uint64_t d = mod_of(q_.get_den(), p_);
  uint64_t v = n * inv_mod(d, p_) % p_;
  q_ = static_cast<unsigned long>(v);
}

// A characteristic-0 operand is embedded into F_p; two distinct primes are an error.
static Scalar coerce(const Scalar& o, uint32_t p) {
  if (o.characteristic() == p) return o;
  if (o.characteristic() != 0) throw ArithError("mixed characteristics in one computation");
  return Scalar(o.value(), p);
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar r = *this;
  r += o;
  return r;
}
Scalar Scalar::operator-(const Scalar& o) const {
  Scalar r = *this;
  r -= o;
  return r;
}
Scalar Scalar::operator*(const Scalar& o) const {
  Scalar r = *this;
  r *= o;
  return r;
}
Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::operator-() const {
  Scalar r;
  r.p_ = p_;
  if (p_ == 0) {
    r.q_ = -q_;
  } else {
    unsigned long v = q_.get_num().get_ui();
    r.q_ = v == 0 ? 0UL : static_cast<unsigned long>(p_ - v);
  }
  return r;
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  if (p_ == 0 && rhs.p_ != 0) *this = Scalar(q_, rhs.p_);
  Scalar o = coerce(rhs, p_);
  if (p_ == 0) {
    q_ += o.q_;
  } else {
    uint64_t v = q_.get_num().get_ui() + o.q_.get_num().get_ui();
    q_ = static_cast<unsigned long>(v % p_);
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& rhs) {
  if (p_ == 0 && rhs.p_ != 0) *this = Scalar(q_, rhs.p_);
  Scalar o = coerce(rhs, p_);
  if (p_ == 0) {
    q_ *= o.q_;
  } else {
    uint64_t v = q_.get_num().get_ui() * o.q_.get_num().get_ui();
    q_ = static_cast<unsigned long>(v % p_);
  }
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw ArithError("division by zero");
  Scalar r;
  r.p_ = p_;
  if (p_ == 0) {
    r.q_ = 1 / q_;
  } else {
    r.q_ = static_cast<unsigned long>(inv_mod(q_.get_num().get_ui(), p_));
  }
  return r;
}

std::string Scalar::to_string() const { return q_.get_str(); }

// ---------------- Monomial ----------------

Monomial::Monomial(std::vector<uint32_t> e) : e_(std::move(e)) {
  for (auto v : e_) deg_ += v;
}

void Monomial::set(size_t i, uint32_t v) {
  deg_ = deg_ - e_[i] + v;
  e_[i] = v;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r = *this;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
  r.deg_ += o.deg_;
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  if (deg_ > o.deg_) return false;
  for (size_t i = 0; i < e_.size(); ++i)
    if (e_[i] > o.e_[i]) return false;
  return true;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
  Monomial r = o;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] -= e_[i];
  r.deg_ -= deg_;
  return r;
}

Monomial Monomial::lcm(const Monomial& o) const {
  Monomial r = *this;
  r.deg_ = 0;
  for (size_t i = 0; i < e_.size(); ++i) {
    r.e_[i] = std::max(e_[i], o.e_[i]);
    r.deg_ += r.e_[i];
  }
  return r;
}

bool Monomial::coprime(const Monomial& o) const {
  for (size_t i = 0; i < e_.size(); ++i)
    if (e_[i] && o.e_[i]) return false;
  return true;
}

int grevlex_cmp(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree() ? 1 : -1;
  for (size_t i = a.nvars(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

// ---------------- Ring ----------------

int Ring::index_of(const std::string& name) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return static_cast<int>(i);
  return -1;
}

RingPtr make_ring(uint32_t p, std::vector<std::string> vars) {
  if (p != 0 && !is_prime(p)) throw ArithError("characteristic " + std::to_string(p) + " is not prime");
  auto r = std::make_shared<Ring>();
  r->p = p;
  r->vars = std::move(vars);
  return r;
}

// ---------------- Polynomial ----------------

Polynomial Polynomial::constant(const RingPtr& r, const Scalar& c) {
  Polynomial p(r);
  p.add_term(Monomial(r->nvars()), c);
  return p;
}

Polynomial Polynomial::constant(const RingPtr& r, long c) { return constant(r, Scalar(c, r->p)); }

Polynomial Polynomial::variable(const RingPtr& r, size_t i) {
  Monomial m(r->nvars());
  m.set(i, 1);
  return term(r, m, Scalar(1, r->p));
}

Polynomial Polynomial::term(const RingPtr& r, const Monomial& m, const Scalar& c) {
  Polynomial p(r);
  p.add_term(m, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

int Polynomial::degree() const {
  int d = -1;
  for (auto& [m, c] : terms_) d = std::max<int>(d, static_cast<int>(m.degree()));
  return d;
}

const Monomial& Polynomial::leading_monomial() const {
  if (terms_.empty()) throw ArithError("leading monomial of zero polynomial");
  return terms_.begin()->first;
}

const Scalar& Polynomial::leading_coeff() const {
  if (terms_.empty()) throw ArithError("leading coefficient of zero polynomial");
  return terms_.begin()->second;
}

Scalar Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? zero_scalar() : it->second;
}

void Polynomial::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Polynomial::check_ring(const Polynomial& o) const {
  if (ring_ != o.ring_ && !(ring_ && o.ring_ && ring_->same_as(*o.ring_)))
    throw ArithError("polynomials over different rings");
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (!ring_) ring_ = o.ring_;
  check_ring(o);
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (!ring_) ring_ = o.ring_;
  check_ring(o);
  for (auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  r -= o;
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(ring_);
  for (auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_ring(o);
  Polynomial r(ring_);
  for (auto& [m1, c1] : terms_)
    for (auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
  return r;
}

Polynomial Polynomial::scaled(const Scalar& c) const {
  Polynomial r(ring_);
  if (c.is_zero()) return r;
  for (auto& [m, a] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, a * c);
  return r;
}

Polynomial Polynomial::times_term(const Monomial& mm, const Scalar& c) const {
  Polynomial r(ring_);
  if (c.is_zero()) return r;
  // Multiplying by a monomial preserves the order, so hinted insertion is linear.
  for (auto& [m, a] : terms_) r.terms_.emplace_hint(r.terms_.end(), m * mm, a * c);
  return r;
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial r = constant(ring_, 1);
  Polynomial b = *this;
  while (n) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  return scaled(leading_coeff().inverse());
}

std::string render_monomial(const Monomial& m, const std::vector<std::string>& names) {
  std::string s;
  for (size_t i = 0; i < m.nvars(); ++i) {
    if (!m[i]) continue;
    if (!s.empty()) s += "*";
    s += names[i];
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s;
}

std::string Polynomial::to_string() const {
  return ring_ ? to_string(ring_->vars) : std::string("0");
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [m, c] : terms_) {
    bool neg = c.is_negative();
    mpq_class mag = neg ? mpq_class(-c.value()) : c.value();
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono = render_monomial(m, names);
    if (mono.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.get_str() + "*" + mono;
    }
  }
  return out;
}

// ---------------- Lexer ----------------

Lexer::Lexer(std::string src) : src_(std::move(src)) { lex_all(); }

void Lexer::lex_all() {
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src_.size()) {
    char ch = src_[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '#') {
      while (i < src_.size() && src_[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t j = i;
      while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
      t.kind = Token::Number;
      t.text = src_.substr(i, j - i);
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(ch))) {
      size_t j = i;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
        ++j;
      t.kind = Token::Ident;
      t.text = src_.substr(i, j - i);
      advance(j - i);
    } else if (ch == '-' && i + 1 < src_.size() && src_[i + 1] == '>') {
      t.kind = Token::Symbol;
      t.text = "->";
      advance(2);
    } else if (std::string("+-*^/(){}[];:,@=").find(ch) != std::string::npos) {
      t.kind = Token::Symbol;
      t.text = std::string(1, ch);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
    }
    toks_.push_back(t);
  }
  Token end;
  end.line = line;
  end.col = col;
  toks_.push_back(end);
}

const Token& Lexer::peek(size_t ahead) {
  size_t k = std::min(pos_ + ahead, toks_.size() - 1);
  return toks_[k];
}

Token Lexer::next() {
  Token t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

bool Lexer::accept(const std::string& sym) {
  if (peek().kind == Token::Symbol && peek().text == sym) {
    next();
    return true;
  }
  return false;
}

Token Lexer::expect(const std::string& sym) {
  if (peek().kind != Token::Symbol || peek().text != sym)
    fail("expected '" + sym + "'", peek());
  return next();
}

Token Lexer::expect_ident() {
  if (peek().kind != Token::Ident) fail("expected identifier", peek());
  return next();
}

void Lexer::fail(const std::string& msg, const Token& at) const {
  std::string got = at.kind == Token::End ? std::string("end of input") : "'" + at.text + "'";
  throw ParseError(msg + " (got " + got + ")", at.line, at.col);
}

// ---------------- expression parsing ----------------

static Expr make_node(Expr::Kind k, const Token& at) {
  Expr e;
  e.kind = k;
  e.line = at.line;
  e.col = at.col;
  return e;
}

static Expr parse_primary(Lexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Token::Number) {
    Token n = lx.next();
    Expr e = make_node(Expr::Num, n);
    e.num = mpq_class(n.text);
    if (lx.accept("/")) {
      Token d = lx.peek();
      if (d.kind != Token::Number) lx.fail("expected integer denominator", d);
      lx.next();
      mpz_class den(d.text);
      if (den == 0) throw ParseError("zero denominator", d.line, d.col);
      e.num = mpq_class(mpz_class(n.text), den);
      e.num.canonicalize();
    }
    return e;
  }
  if (t.kind == Token::Ident) {
    Token v = lx.next();
    if (lx.peek().kind == Token::Symbol && lx.peek().text == "(")
      lx.fail("implicit multiplication or function call is not allowed", lx.peek());
    Expr e = make_node(Expr::Var, v);
    e.name = v.text;
    return e;
  }
  if (t.kind == Token::Symbol && t.text == "(") {
    lx.next();
    Expr e = parse_expr(lx);
    lx.expect(")");
    return e;
  }
  lx.fail("expected number, variable or '('", t);
}

Expr parse_factor(Lexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Token::Symbol && (t.text == "-" || t.text == "+")) {
    Token s = lx.next();
    Expr inner = parse_factor(lx);
    if (s.text == "+") return inner;
    Expr e = make_node(Expr::Neg, s);
    e.kids.push_back(std::move(inner));
    return e;
  }
  Expr base = parse_primary(lx);
  if (lx.peek().kind == Token::Symbol && lx.peek().text == "^") {
    Token caret = lx.next();
    const Token& ex = lx.peek();
    if (ex.kind != Token::Number) {
      std::string what = (ex.kind == Token::Symbol && ex.text == "-") ? "negative" : "symbolic";
      throw ParseError(what + " exponent is not allowed", ex.line, ex.col);
    }
    Token n = lx.next();
    Expr e = make_node(Expr::Pow, caret);
    e.exponent = static_cast<unsigned>(std::stoul(n.text));
    e.kids.push_back(std::move(base));
    return e;
  }
  return base;
}

static Expr parse_term(Lexer& lx) {
  Expr e = parse_factor(lx);
  while (lx.peek().kind == Token::Symbol && lx.peek().text == "*") {
    Token op = lx.next();
    Expr m = make_node(Expr::Mul, op);
    m.kids.push_back(std::move(e));
    m.kids.push_back(parse_factor(lx));
    e = std::move(m);
  }
  return e;
}

Expr parse_expr(Lexer& lx) {
  Expr e = parse_term(lx);
  while (lx.peek().kind == Token::Symbol && (lx.peek().text == "+" || lx.peek().text == "-")) {
    Token op = lx.next();
    Expr n = make_node(op.text == "+" ? Expr::Add : Expr::Sub, op);
    n.kids.push_back(std::move(e));
    n.kids.push_back(parse_term(lx));
    e = std::move(n);
  }
  return e;
}

Expr parse_expr_string(const std::string& s) {
  Lexer lx(s);
  Expr e = parse_expr(lx);
  if (!lx.at_end()) lx.fail("unexpected trailing input", lx.peek());
  return e;
}

Polynomial poly_normalize(const Expr& e, const RingPtr& ring) {
  switch (e.kind) {
    case Expr::Num:
      return Polynomial::constant(ring, Scalar(e.num, ring->p));
    case Expr::Var: {
      int i = ring->index_of(e.name);
      if (i < 0) throw ParseError("unknown variable '" + e.name + "'", e.line, e.col);
      return Polynomial::variable(ring, static_cast<size_t>(i));
    }
    case Expr::Add:
      return poly_normalize(e.kids[0], ring) + poly_normalize(e.kids[1], ring);
    case Expr::Sub:
      return poly_normalize(e.kids[0], ring) - poly_normalize(e.kids[1], ring);
    case Expr::Mul:
      return poly_normalize(e.kids[0], ring) * poly_normalize(e.kids[1], ring);
    case Expr::Neg:
      return -poly_normalize(e.kids[0], ring);
    case Expr::Pow:
      return poly_normalize(e.kids[0], ring).pow(e.exponent);
  }
  return Polynomial(ring);
}

Polynomial parse_poly(const std::string& s, const RingPtr& ring) {
  return poly_normalize(parse_expr_string(s), ring);
}

// ---------------- substitution / derivatives ----------------

Polynomial poly_substitute(const Polynomial& p, const std::vector<Polynomial>& images,
                           const RingPtr& target) {
  const size_t n = p.ring() ? p.ring()->nvars() : 0;
  if (images.size() < n) throw ArithError("missing image in substitution");
  std::vector<std::vector<Polynomial>> powers(n);
  auto power = [&](size_t i, uint32_t k) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Polynomial::constant(target, 1));
    while (cache.size() <= k) cache.push_back(cache.back() * images[i]);
    return cache[k];
  };
  Polynomial out(target);
  for (auto& [m, c] : p.terms()) {
    Polynomial t = Polynomial::constant(target, Scalar(c.value(), target->p));
    for (size_t i = 0; i < n && !t.is_zero(); ++i)
      if (m[i]) t = t * power(i, m[i]);
    out += t;
  }
  return out;
}

Polynomial poly_substitute(const Polynomial& p, const std::map<std::string, Polynomial>& images,
                           const RingPtr& target) {
  std::vector<Polynomial> v;
  const auto& vars = p.ring()->vars;
  std::vector<bool> used(vars.size(), false);
  for (auto& [m, c] : p.terms())
    for (size_t i = 0; i < vars.size(); ++i)
      if (m[i]) used[i] = true;
  for (size_t i = 0; i < vars.size(); ++i) {
    auto it = images.find(vars[i]);
    if (it == images.end()) {
      if (used[i]) throw ArithError("missing image for variable '" + vars[i] + "'");
      v.push_back(Polynomial(target));
    } else {
      v.push_back(it->second);
    }
  }
  return poly_substitute(p, v, target);
}

Polynomial formal_partial(const Polynomial& p, size_t var) {
  Polynomial out(p.ring());
  if (var >= p.ring()->nvars()) throw ArithError("undeclared variable in partial derivative");
  for (auto& [m, c] : p.terms()) {
    if (!m[var]) continue;
    Monomial q = m;
    q.set(var, m[var] - 1);
    out.add_term(q, c * Scalar(static_cast<long>(m[var]), p.ring()->p));
  }
  return out;
}

Polynomial formal_partial(const Polynomial& p, const std::string& var) {
  int i = p.ring()->index_of(var);
  if (i < 0) throw ArithError("undeclared variable '" + var + "'");
  return formal_partial(p, static_cast<size_t>(i));
}

}  // namespace kcx
