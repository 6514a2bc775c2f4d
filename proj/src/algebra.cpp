#include "dgdef/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "dgdef/artin.hpp"
#include "dgdef/errors.hpp"

namespace dgdef {

namespace {

void add_term(Terms& t, const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto it = t.find(m);
  if (it == t.end()) {
    t.emplace(m, c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) t.erase(it);
  }
}

bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

void require_same(const AlgPtr& a, const AlgPtr& b) {
  if (a && b && a != b) throw Error("MixedAlgebras", "elements of different algebras");
}

}  // namespace

// ---------------------------------------------------------------- Element

Element::Element(AlgPtr alg, Terms terms) : alg_(std::move(alg)) {
  terms_ = alg_->reduce(std::move(terms));
}

Element Element::from_normal(AlgPtr alg, Terms terms) {
  Element e(std::move(alg));
  e.terms_ = std::move(terms);
  return e;
}

bool Element::is_homogeneous() const {
  if (terms_.empty()) return true;
  int deg = alg_->degree(terms_.begin()->first);
  for (const auto& [m, c] : terms_) {
    if (alg_->degree(m) != deg) return false;
  }
  return true;
}

std::optional<int> Element::degree() const {
  if (terms_.empty() || !is_homogeneous()) return std::nullopt;
  return alg_->degree(terms_.begin()->first);
}

int Element::word_length() const {
  int w = 0;
  for (const auto& [m, c] : terms_) w = std::max(w, alg_->word_length(m));
  return w;
}

Rational Element::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Element Element::operator-() const {
  Element e = *this;
  for (auto& [m, c] : e.terms_) c = -c;
  return e;
}

Element& Element::operator+=(const Element& o) {
  require_same(alg_, o.alg_);
  if (!alg_) alg_ = o.alg_;
  for (const auto& [m, c] : o.terms_) add_term(terms_, m, c);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  require_same(alg_, o.alg_);
  if (!alg_) alg_ = o.alg_;
  for (const auto& [m, c] : o.terms_) add_term(terms_, m, -c);
  return *this;
}

Element operator*(const Element& a, const Element& b) {
  require_same(a.alg_, b.alg_);
  const AlgPtr& alg = a.alg_ ? a.alg_ : b.alg_;
  if (!alg) return Element();
  Terms raw;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto p = alg->multiply(ma, mb);
      if (p) add_term(raw, p->second, p->first * ca * cb);
    }
  }
  return Element(alg, std::move(raw));
}

Element operator*(const Rational& q, const Element& a) {
  Element e(a.alg_);
  if (sgn(q) == 0) return e;
  Terms t = a.terms_;
  for (auto& [m, c] : t) c *= q;
  return Element::from_normal(a.alg_, std::move(t));
}

bool Element::operator==(const Element& o) const {
  if (terms_.empty() && o.terms_.empty()) return true;
  return alg_ == o.alg_ && terms_ == o.terms_;
}

Element Element::pow(int n) const {
  Element r = alg_->one();
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

std::string Element::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string ms = alg_->monomial_str(m);
    Rational a = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (ms.empty()) {
      os << a.get_str();
    } else if (a == 1) {
      os << ms;
    } else {
      os << a.get_str() << "*" << ms;
    }
  }
  return os.str();
}

Element d(const Element& a) {
  if (!a.algebra()) return a;
  return a.algebra()->differentiate(a);
}

// ------------------------------------------------------------- DGAlgebra

std::optional<int> DGAlgebra::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int DGAlgebra::index(const std::string& name) const {
  auto i = find(name);
  if (!i) throw Error("UnknownGenerator", name);
  return *i;
}

std::vector<int> DGAlgebra::nonbase_indices() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (!gens_[i].base) out.push_back(i);
  }
  return out;
}

std::vector<int> DGAlgebra::base_indices() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (gens_[i].base) out.push_back(i);
  }
  return out;
}

int DGAlgebra::degree(const Monomial& m) const {
  int deg = 0;
  for (std::size_t i = 0; i < m.size(); ++i) deg += m[i] * gens_[i].degree;
  return deg;
}

int DGAlgebra::word_length(const Monomial& m) const {
  int w = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!gens_[i].base) w += m[i];
  }
  return w;
}

bool DGAlgebra::is_base_monomial(const Monomial& m) const {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] > 0 && !gens_[i].base) return false;
  }
  return true;
}

Element DGAlgebra::zero() const { return Element(self()); }

Element DGAlgebra::one() const { return scalar(1); }

Element DGAlgebra::scalar(const Rational& q) const {
  Terms t;
  add_term(t, unit_monomial(), q);
  return Element(self(), std::move(t));
}

Element DGAlgebra::gen(const std::string& name) const { return gen(index(name)); }

Element DGAlgebra::gen(int i) const {
  Monomial m = unit_monomial();
  m[i] = 1;
  return monomial(m);
}

Element DGAlgebra::monomial(const Monomial& m) const {
  Terms t;
  t.emplace(m, 1);
  return Element(self(), std::move(t));
}

Element DGAlgebra::diff(int i) const { return Element::from_normal(self(), diffs_[i]); }

std::vector<Element> DGAlgebra::relations() const {
  std::vector<Element> out;
  for (const auto& r : relations_) out.push_back(Element::from_normal(self(), r));
  return out;
}

std::vector<Element> DGAlgebra::socle_rules() const {
  std::vector<Element> out;
  for (const auto& r : socle_rules_) out.push_back(Element::from_normal(self(), r));
  return out;
}

bool DGAlgebra::has_nonbase_relations() const {
  for (const auto& r : relations_) {
    for (const auto& [m, c] : r) {
      if (!is_base_monomial(m)) return true;
    }
  }
  return false;
}

bool DGAlgebra::graded_free_over_base() const {
  for (const auto& r : relations_) {
    bool has_base = false;
    bool has_other = false;
    for (const auto& [m, c] : r) {
      if (is_base_monomial(m)) {
        has_base = has_base || m != unit_monomial();
      } else {
        has_other = true;
        for (std::size_t i = 0; i < m.size(); ++i) {
          if (m[i] > 0 && gens_[i].base) has_base = true;
        }
      }
    }
    if (has_other && has_base) return false;
  }
  return true;
}

std::optional<std::pair<int, Monomial>> DGAlgebra::multiply(const Monomial& a,
                                                            const Monomial& b) const {
  const std::size_t n = gens_.size();
  Monomial out(n);
  int odd_after = 0;  // odd generators of a with index > i
  for (std::size_t i = 0; i < n; ++i) {
    if (odd(static_cast<int>(i)) && a[i] > 0) ++odd_after;
  }
  int swaps = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool o = odd(static_cast<int>(i));
    if (o && a[i] > 0) --odd_after;
    if (o && a[i] > 0 && b[i] > 0) return std::nullopt;
    if (o && b[i] > 0) swaps += odd_after;
    out[i] = a[i] + b[i];
  }
  return std::make_pair((swaps % 2 == 0) ? 1 : -1, std::move(out));
}

bool DGAlgebra::grevlex_greater(const Monomial& a, const Monomial& b) const {
  int da = 0;
  int db = 0;
  for (int i : zero_even_) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da > db;
  for (auto it = zero_even_.rbegin(); it != zero_even_.rend(); ++it) {
    if (a[*it] != b[*it]) return a[*it] < b[*it];
  }
  return false;
}

Monomial DGAlgebra::leading(const Terms& p) const {
  const Monomial* best = nullptr;
  for (const auto& [m, c] : p) {
    if (!best || grevlex_greater(m, *best)) best = &m;
  }
  return *best;
}

Terms DGAlgebra::gb_reduce_full(Terms p, const std::vector<Terms>& g) const {
  std::vector<Monomial> leads;
  for (const auto& q : g) leads.push_back(leading(q));
  Terms rem;
  while (!p.empty()) {
    Monomial lt = leading(p);
    Rational lc = p[lt];
    bool reduced = false;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!divides(leads[k], lt)) continue;
      Monomial shift(lt.size());
      for (std::size_t i = 0; i < lt.size(); ++i) shift[i] = lt[i] - leads[k][i];
      Rational f = lc / g[k].at(leads[k]);
      for (const auto& [m, c] : g[k]) {
        Monomial s(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) s[i] = m[i] + shift[i];
        add_term(p, s, -f * c);
      }
      reduced = true;
      break;
    }
    if (!reduced) {
      add_term(rem, lt, lc);
      p.erase(lt);
    }
  }
  return rem;
}

void DGAlgebra::rebuild_groebner() {
  std::vector<Terms> g;
  for (const auto& p : gb_input_) {
    Terms r = gb_reduce_full(p, g);
    if (!r.empty()) g.push_back(r);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < g.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
  }
  while (!pairs.empty()) {
    auto [i, j] = pairs.back();
    pairs.pop_back();
    Monomial li = leading(g[i]);
    Monomial lj = leading(g[j]);
    Monomial l(li.size());
    bool coprime = true;
    for (std::size_t k = 0; k < l.size(); ++k) {
      l[k] = std::max(li[k], lj[k]);
      if (li[k] > 0 && lj[k] > 0) coprime = false;
    }
    if (coprime) continue;  // Buchberger's first criterion
    Terms s;
    Rational ci = g[i].at(li);
    Rational cj = g[j].at(lj);
    for (const auto& [m, c] : g[i]) {
      Monomial t(m.size());
      for (std::size_t k = 0; k < m.size(); ++k) t[k] = m[k] + l[k] - li[k];
      add_term(s, t, c / ci);
    }
    for (const auto& [m, c] : g[j]) {
      Monomial t(m.size());
      for (std::size_t k = 0; k < m.size(); ++k) t[k] = m[k] + l[k] - lj[k];
      add_term(s, t, -c / cj);
    }
    Terms r = gb_reduce_full(s, g);
    if (r.empty()) continue;
    g.push_back(r);
    for (std::size_t k = 0; k + 1 < g.size(); ++k) pairs.emplace_back(k, g.size() - 1);
  }
  // Minimal, then reduced and monic.
  std::vector<Terms> minimal;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Monomial li = leading(g[i]);
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (j == i) continue;
      Monomial lj = leading(g[j]);
      if (divides(lj, li) && (lj != li || j < i)) redundant = true;
    }
    if (!redundant) minimal.push_back(g[i]);
  }
  gb_.clear();
  gb_leads_.clear();
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Terms> others;
    for (std::size_t j = 0; j < minimal.size(); ++j) {
      if (j != i) others.push_back(minimal[j]);
    }
    Monomial lt = leading(minimal[i]);
    Rational lc = minimal[i].at(lt);
    Terms tail = minimal[i];
    tail.erase(lt);
    Terms red = gb_reduce_full(tail, others);
    Terms p;
    p.emplace(lt, 1);
    for (const auto& [m, c] : red) add_term(p, m, c / lc);
    gb_.push_back(p);
    gb_leads_.push_back(lt);
  }
  std::vector<std::size_t> order(gb_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return grevlex_greater(gb_leads_[b], gb_leads_[a]);
  });
  std::vector<Terms> sorted;
  std::vector<Monomial> leads;
  for (auto k : order) {
    sorted.push_back(gb_[k]);
    leads.push_back(gb_leads_[k]);
  }
  gb_ = std::move(sorted);
  gb_leads_ = std::move(leads);
}

void DGAlgebra::rebuild_socle() {
  socle_rules_.clear();
  socle_leads_.clear();
  for (const auto& raw : socle_input_) {
    Terms v = reduce(raw);
    if (v.empty()) continue;
    Monomial lead = v.rbegin()->first;
    Rational lc = v.rbegin()->second;
    for (auto& [m, c] : v) c /= lc;
    for (auto& rule : socle_rules_) {
      auto it = rule.find(lead);
      if (it == rule.end()) continue;
      Rational f = it->second;
      for (const auto& [m, c] : v) add_term(rule, m, -f * c);
    }
    socle_rules_.push_back(v);
    socle_leads_.push_back(lead);
  }
}

bool DGAlgebra::is_standard(const Monomial& m) const {
  for (const auto& r : mono_rels_) {
    if (divides(r, m)) return false;
  }
  for (const auto& l : gb_leads_) {
    if (divides(l, m)) return false;
  }
  if (!socle_leads_.empty()) {
    Monomial b = unit_monomial();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (gens_[i].base) b[i] = m[i];
    }
    for (const auto& l : socle_leads_) {
      if (l == b) return false;
    }
  }
  return true;
}

Terms DGAlgebra::reduce(Terms t) const {
  Terms out;
  std::vector<std::pair<Monomial, Rational>> work(t.begin(), t.end());
  std::size_t guard = 0;
  while (!work.empty()) {
    if (++guard > 5000000) throw Error("NormalFormDiverges", "reduction did not terminate");
    auto [m, c] = std::move(work.back());
    work.pop_back();
    if (sgn(c) == 0) continue;
    bool dead = false;
    for (const auto& r : mono_rels_) {
      if (divides(r, m)) {
        dead = true;
        break;
      }
    }
    if (dead) continue;
    bool rewritten = false;
    for (std::size_t k = 0; k < gb_.size(); ++k) {
      if (!divides(gb_leads_[k], m)) continue;
      for (const auto& [p, pc] : gb_[k]) {
        if (p == gb_leads_[k]) continue;
        Monomial s(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) s[i] = m[i] - gb_leads_[k][i] + p[i];
        work.emplace_back(std::move(s), -c * pc);
      }
      rewritten = true;
      break;
    }
    if (rewritten) continue;
    if (!socle_leads_.empty()) {
      Monomial b = unit_monomial();
      Monomial rest = m;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (gens_[i].base) {
          b[i] = m[i];
          rest[i] = 0;
        }
      }
      for (std::size_t k = 0; k < socle_leads_.size(); ++k) {
        if (socle_leads_[k] != b) continue;
        auto split = multiply(b, rest);
        int s0 = split->first;  // m = s0 * b * rest
        for (const auto& [p, pc] : socle_rules_[k]) {
          if (p == b) continue;
          auto prod = multiply(p, rest);
          if (!prod) continue;
          work.emplace_back(prod->second, -c * pc * s0 * prod->first);
        }
        rewritten = true;
        break;
      }
    }
    if (rewritten) continue;
    add_term(out, m, c);
  }
  return out;
}

Terms DGAlgebra::multiply_terms(const Terms& a, const Terms& b) const {
  Terms raw;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      auto p = multiply(ma, mb);
      if (p) add_term(raw, p->second, p->first * ca * cb);
    }
  }
  return reduce(std::move(raw));
}

const Terms& DGAlgebra::differentiate_monomial(const Monomial& m) const {
  auto it = dcache_.find(m);
  if (it != dcache_.end()) return it->second;
  Terms total;
  const std::size_t n = m.size();
  int prefix_degree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i] == 0) continue;
    if (!diffs_[i].empty()) {
      Monomial prefix(n, 0);
      Monomial rest(n, 0);
      for (std::size_t j = 0; j < i; ++j) prefix[j] = m[j];
      for (std::size_t j = i + 1; j < n; ++j) rest[j] = m[j];
      rest[i] = m[i] - 1;  // g^(a-1) commutes past dg when g is even
      Rational coeff = (prefix_degree % 2 == 0) ? m[i] : -m[i];
      Terms left;
      left.emplace(prefix, coeff);
      Terms right;
      right.emplace(rest, 1);
      Terms piece = multiply_terms(multiply_terms(left, diffs_[i]), right);
      for (const auto& [mm, cc] : piece) add_term(total, mm, cc);
    }
    prefix_degree += m[i] * gens_[i].degree;
  }
  return dcache_.emplace(m, std::move(total)).first->second;
}

Terms DGAlgebra::differentiate_terms(const Terms& a) const {
  Terms out;
  for (const auto& [m, c] : a) {
    for (const auto& [mm, cc] : differentiate_monomial(m)) add_term(out, mm, c * cc);
  }
  return out;
}

Element DGAlgebra::differentiate(const Element& a) const {
  require_same(a.algebra(), self());
  return Element::from_normal(self(), differentiate_terms(a.terms()));
}

std::vector<Monomial> DGAlgebra::basis(int deg, int max_wordlen) const {
  std::vector<Monomial> out;
  const int n = size();
  Monomial cur(n, 0);
  const bool nonpos = regime_ == Regime::nonpositive;
  auto prunable = [&](const Monomial& m) {
    for (const auto& r : mono_rels_) {
      if (divides(r, m)) return true;
    }
    for (const auto& l : gb_leads_) {
      if (divides(l, m)) return true;
    }
    return false;
  };
  // Remaining reachable degree range from generators at index >= i.
  std::vector<int> min_rest(n + 1, 0);
  std::vector<int> max_rest(n + 1, 0);
  for (int i = n - 1; i >= 0; --i) {
    int bound = gens_[i].base ? base_bounds_[i] : (odd(i) ? 1 : max_wordlen);
    int lo = std::min(0, bound * gens_[i].degree);
    int hi = std::max(0, bound * gens_[i].degree);
    min_rest[i] = min_rest[i + 1] + lo;
    max_rest[i] = max_rest[i + 1] + hi;
  }
  std::function<void(int, int, int)> rec = [&](int i, int d, int w) {
    if (nonpos && d < deg) return;
    if (d + min_rest[i] > deg || d + max_rest[i] < deg) {
      // min_rest/max_rest ignore the shared word-length budget, so this is
      // only a necessary condition.
      return;
    }
    if (i == n) {
      if (d == deg && is_standard(cur)) out.push_back(cur);
      return;
    }
    int bound;
    if (gens_[i].base) {
      bound = base_bounds_[i];
    } else {
      bound = odd(i) ? std::min(1, max_wordlen - w) : max_wordlen - w;
    }
    for (int e = 0; e <= bound; ++e) {
      cur[i] = e;
      if (e > 0 && prunable(cur)) break;
      rec(i + 1, d + e * gens_[i].degree, gens_[i].base ? w : w + e);
    }
    cur[i] = 0;
  };
  rec(0, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::string DGAlgebra::monomial_str(const Monomial& m) const {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += gens_[i].name;
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s;
}

int DGAlgebra::base_exponent_bound(int i) const { return base_bounds_[i]; }

void DGAlgebra::classify_relation(const Terms& r) {
  if (r.empty()) return;
  int deg = degree(r.begin()->first);
  bool all_zero_even = true;
  for (const auto& [m, c] : r) {
    if (degree(m) != deg) throw Error("DegreeMismatch", "relation is not homogeneous");
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] > 0 && gens_[i].degree != 0) all_zero_even = false;
    }
  }
  relations_.push_back(r);
  if (all_zero_even) {
    gb_input_.push_back(r);
    return;
  }
  if (r.size() == 1) {
    mono_rels_.push_back(r.begin()->first);
    return;
  }
  throw Error("UnsupportedRelation",
              "relations must be monomials or polynomials in degree-0 generators: " +
                  Element::from_normal(self(), r).str());
}

// ---------------------------------------------------------------- parsing

namespace {

class ExprParser {
 public:
  ExprParser(const DGAlgebra& alg, const std::string& text) : alg_(alg), s_(text) {}

  Element parse() {
    Element e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, 1, static_cast<int>(pos_) + 1);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  Element expr() {
    Element acc = term();
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }
  Element term() {
    Element acc = unary();
    while (eat('*')) acc = acc * unary();
    return acc;
  }
  Element unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Element power() {
    Element base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(std::stoi(s_.substr(start, pos_ - start)));
    }
    return base;
  }
  Element atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      Element e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        std::size_t ds = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (ds == pos_) fail("expected denominator");
      }
      Rational q;
      try {
        q = parse_rational(s_.substr(start, pos_ - start));
      } catch (const Error&) {
        fail("bad rational literal");
      }
      return alg_.scalar(q);
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
              s_[pos_] == '\'')) {
        ++pos_;
      }
      std::string name = s_.substr(start, pos_ - start);
      auto i = alg_.find(name);
      if (!i) {
        pos_ = start;
        fail("unknown generator '" + name + "'");
      }
      return alg_.gen(*i);
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  const DGAlgebra& alg_;
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Element DGAlgebra::parse(const std::string& expr) const { return ExprParser(*this, expr).parse(); }

// ---------------------------------------------------------------- Builder

DGAlgebra::Builder::Builder(ArtinPtr base, Regime regime)
    : base_(std::move(base)), regime_(regime) {
  if (is_rational_base(base_)) base_ = nullptr;
}

DGAlgebra::Builder& DGAlgebra::Builder::label(std::string l) {
  label_ = std::move(l);
  return *this;
}

DGAlgebra::Builder& DGAlgebra::Builder::gen(const std::string& name, int degree) {
  gens_.push_back({name, degree, false});
  return *this;
}

DGAlgebra::Builder& DGAlgebra::Builder::base_gen(const std::string& name, int degree) {
  gens_.push_back({name, degree, true});
  return *this;
}

DGAlgebra::Builder& DGAlgebra::Builder::diff(const std::string& name, const std::string& expr) {
  diffs_.push_back({name, Value{expr, std::nullopt}});
  return *this;
}

DGAlgebra::Builder& DGAlgebra::Builder::diff(const std::string& name, const Element& value) {
  diffs_.push_back({name, Value{"", value}});
  return *this;
}

DGAlgebra::Builder& DGAlgebra::Builder::rel(const std::string& expr) {
  rels_.push_back(Value{expr, std::nullopt});
  return *this;
}

DGAlgebra::Builder& DGAlgebra::Builder::rel(const Element& value) {
  rels_.push_back(Value{"", value});
  return *this;
}

DGAlgebra::Builder& DGAlgebra::Builder::socle_rule(const Element& value) {
  socle_.push_back(value);
  return *this;
}

DGAlgebra::Builder& DGAlgebra::Builder::drop_missing(bool on) {
  drop_missing_ = on;
  return *this;
}

AlgPtr DGAlgebra::Builder::build() const {
  std::shared_ptr<DGAlgebra> alg(new DGAlgebra());
  std::vector<Generator> gens;
  std::vector<std::pair<std::string, Value>> diffs;
  std::vector<Value> rels;
  std::vector<Element> socle = socle_;
  if (base_) {
    const AlgPtr& p = base_->presentation();
    for (int i = 0; i < p->size(); ++i) {
      Generator g = p->generators()[i];
      g.base = true;
      gens.push_back(g);
      if (!p->diff(i).is_zero()) diffs.push_back({g.name, Value{"", p->diff(i)}});
    }
    for (const auto& r : p->relations()) rels.push_back(Value{"", r});
    for (const auto& s : p->socle_rules()) socle.push_back(s);
  }
  for (const auto& g : gens_) gens.push_back(g);
  for (const auto& dv : diffs_) diffs.push_back(dv);
  for (const auto& r : rels_) rels.push_back(r);

  std::sort(gens.begin(), gens.end(), [](const Generator& a, const Generator& b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    return a.name < b.name;
  });
  alg->label_ = label_;
  alg->regime_ = regime_;
  alg->base_ = base_;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (!alg->index_.emplace(gens[i].name, static_cast<int>(i)).second) {
      throw Error("DuplicateGenerator", gens[i].name);
    }
    if (regime_ == Regime::nonpositive && gens[i].degree > 0) {
      throw Error("NonpositiveViolation",
                  gens[i].name + " has degree " + std::to_string(gens[i].degree));
    }
    if (gens[i].degree == 0) alg->zero_even_.push_back(static_cast<int>(i));
  }
  alg->gens_ = std::move(gens);
  const int n = alg->size();
  alg->diffs_.assign(n, Terms{});
  alg->base_bounds_.assign(n, 0);

  auto value_of = [&](const Value& v) {
    if (v.elem) return transport(*v.elem, alg, drop_missing_);
    return alg->parse(v.text);
  };

  // Relations are read against the free algebra, so their free
  // representatives are kept for d-closure.
  for (const auto& r : rels) alg->classify_relation(value_of(r).terms());
  alg->rebuild_groebner();
  for (const auto& s : socle) alg->socle_input_.push_back(transport(s, alg, drop_missing_).terms());
  alg->rebuild_socle();

  std::set<std::string> seen;
  for (const auto& [name, v] : diffs) {
    int i = alg->index(name);
    if (!seen.insert(name).second) throw Error("DuplicateDifferential", name);
    Element val = value_of(v);
    val = Element(alg, val.terms());
    if (!val.is_zero()) {
      auto deg = val.degree();
      if (!deg || *deg != alg->gens_[i].degree + 1) {
        throw Error("DegreeMismatch", "d(" + name + ") = " + val.str() + " must have degree " +
                                          std::to_string(alg->gens_[i].degree + 1));
      }
    }
    alg->diffs_[i] = val.terms();
  }

  // d-closure of the relation ideal.
  for (int round = 0; round < 16; ++round) {
    alg->dcache_.clear();
    std::vector<Terms> extra;
    for (const auto& r : alg->relations_) {
      Terms dr = alg->reduce(alg->differentiate_terms(r));
      if (!dr.empty()) extra.push_back(dr);
    }
    for (const auto& r : alg->socle_input_) {
      Terms dr = alg->reduce(alg->differentiate_terms(r));
      if (!dr.empty()) throw Error("DSquareNonzero", "socle element is not a cocycle");
    }
    if (extra.empty()) break;
    if (round == 15) throw Error("UnsupportedRelation", "d-closure of relations does not stabilise");
    for (const auto& r : extra) alg->classify_relation(r);
    alg->rebuild_groebner();
    alg->rebuild_socle();
    for (auto& dv : alg->diffs_) dv = alg->reduce(dv);
  }
  alg->dcache_.clear();

  for (int i = 0; i < n; ++i) {
    if (!alg->gens_[i].base) continue;
    if (alg->odd(i)) {
      alg->base_bounds_[i] = 1;
      continue;
    }
    Monomial m = alg->unit_monomial();
    int k = 1;
    for (; k <= 64; ++k) {
      m[i] = k;
      if (alg->reduce(Terms{{m, Rational(1)}}).empty()) break;
    }
    alg->base_bounds_[i] = k - 1;
  }

  for (int i = 0; i < n; ++i) {
    Terms dd = alg->reduce(alg->differentiate_terms(alg->diffs_[i]));
    if (!dd.empty()) {
      throw Error("DSquareNonzero", "d(d(" + alg->gens_[i].name + ")) = " +
                                        Element::from_normal(alg, dd).str());
    }
  }
  return alg;
}

Element transport(const Element& a, const AlgPtr& target, bool zero_missing) {
  if (!a.algebra()) return target->zero();
  if (a.algebra() == target) return a;
  const AlgPtr& src = a.algebra();
  std::vector<int> map(src->size(), -1);
  for (int i = 0; i < src->size(); ++i) {
    auto j = target->find(src->generators()[i].name);
    if (j) map[i] = *j;
  }
  Terms raw;
  for (const auto& [m, c] : a.terms()) {
    Monomial t = target->unit_monomial();
    bool dead = false;
    std::vector<int> odd_order;
    for (int i = 0; i < src->size(); ++i) {
      if (m[i] == 0) continue;
      if (map[i] < 0) {
        if (!zero_missing) {
          throw Error("UnknownGenerator", src->generators()[i].name + " missing in target");
        }
        dead = true;
        break;
      }
      t[map[i]] += m[i];
      if (src->odd(i)) odd_order.push_back(map[i]);
    }
    if (dead) continue;
    int inv = 0;
    for (std::size_t x = 0; x < odd_order.size(); ++x) {
      for (std::size_t y = x + 1; y < odd_order.size(); ++y) {
        if (odd_order[x] > odd_order[y]) ++inv;
      }
    }
    add_term(raw, t, (inv % 2 == 0) ? c : Rational(-c));
  }
  return Element(target, std::move(raw));
}

Element substitute(const Element& a, const std::vector<Element>& images) {
  if (images.empty()) throw Error("EmptySubstitution", "no images");
  AlgPtr tgt;
  for (const auto& im : images) {
    if (im.algebra()) {
      tgt = im.algebra();
      break;
    }
  }
  if (!tgt) throw Error("EmptySubstitution", "images carry no algebra");
  Element out = tgt->zero();
  for (const auto& [m, c] : a.terms()) {
    Element term = tgt->scalar(c);
    for (std::size_t i = 0; i < m.size() && !term.is_zero(); ++i) {
      for (int e = 0; e < m[i]; ++e) {
        const Element& im = images[i].algebra() ? images[i] : tgt->zero();
        term = term * im;
      }
    }
    out += term;
  }
  return out;
}

}  // namespace dgdef
