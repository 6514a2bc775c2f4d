#include "dgdef/derivation.hpp"

#include <sstream>

#include "dgdef/errors.hpp"

namespace dgdef {

Derivation::Derivation(AlgPtr source, AlgPtr target, int degree, std::vector<Element> values,
                       std::optional<Morphism> along)
    : src_(std::move(source)), tgt_(std::move(target)), degree_(degree), values_(std::move(values)),
      along_(std::move(along)) {
  if (static_cast<int>(values_.size()) != src_->size()) {
    throw Error("DimensionMismatch", "one value per source generator is required");
  }
  if (along_ && (along_->source() != src_ || along_->target() != tgt_)) {
    throw Error("DimensionMismatch", "the twisting map must go from the source to the target");
  }
  for (int i = 0; i < src_->size(); ++i) {
    const auto& g = src_->generators()[i];
    Element& v = values_[i];
    if (!v.algebra()) v = tgt_->zero();
    if (v.algebra() != tgt_) v = transport(v, tgt_);
    if (g.base && !v.is_zero()) throw Error("NotADerivation", "base generator " + g.name + " must map to zero");
    if (v.is_zero()) continue;
    auto deg = v.degree();
    if (!deg || *deg != g.degree + degree_) {
      throw Error("DegreeMismatch", "value on " + g.name + " must have degree " +
                                        std::to_string(g.degree + degree_) + ": " + v.str());
    }
  }
}

Derivation Derivation::zero(const AlgPtr& source, const AlgPtr& target, int degree,
                            std::optional<Morphism> along) {
  return Derivation(source, target, degree, std::vector<Element>(source->size(), target->zero()),
                    std::move(along));
}

Derivation Derivation::from_map(const AlgPtr& source, const AlgPtr& target, int degree,
                                const std::map<std::string, Element>& values, std::optional<Morphism> along) {
  std::vector<Element> vals(source->size(), target->zero());
  for (const auto& [name, v] : values) vals[source->index(name)] = v;
  return Derivation(source, target, degree, std::move(vals), std::move(along));
}

const Element& Derivation::value(const std::string& gen) const { return values_[src_->index(gen)]; }

bool Derivation::is_zero() const {
  for (const auto& v : values_) {
    if (!v.is_zero()) return false;
  }
  return true;
}

Element Derivation::phi(const Element& a) const { return along_ ? along_->apply(a) : transport(a, tgt_); }

Element Derivation::apply(const Element& a) const {
  Element out = tgt_->zero();
  if (a.algebra() != src_) throw Error("AlgebraMismatch", "element does not live in the source");
  std::vector<Element> phis(src_->size());
  for (int i = 0; i < src_->size(); ++i) phis[i] = phi(src_->gen(i));
  for (const auto& [m, c] : a.terms()) {
    // Factors of the monomial in generator order, with multiplicity.
    std::vector<int> factors;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int k = 0; k < m[i]; ++k) factors.push_back(static_cast<int>(i));
    }
    int prefix = 0;
    for (std::size_t pos = 0; pos < factors.size(); ++pos) {
      const int g = factors[pos];
      if (!values_[g].is_zero()) {
        Element term = tgt_->one();
        for (std::size_t k = 0; k < pos; ++k) term = term * phis[factors[k]];
        term = term * values_[g];
        for (std::size_t k = pos + 1; k < factors.size(); ++k) term = term * phis[factors[k]];
        const bool neg = ((degree_ % 2) != 0) && ((prefix % 2) != 0);
        out += (neg ? -c : c) * term;
      }
      prefix += src_->generators()[g].degree;
    }
  }
  return out;
}

Derivation Derivation::operator+(const Derivation& o) const {
  std::vector<Element> v = values_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.values_[i];
  return Derivation(src_, tgt_, degree_, std::move(v), along_);
}

Derivation Derivation::operator-(const Derivation& o) const { return *this + o.scaled(Rational(-1)); }

Derivation Derivation::scaled(const Rational& q) const {
  std::vector<Element> v = values_;
  for (auto& x : v) x = q * x;
  return Derivation(src_, tgt_, degree_, std::move(v), along_);
}

bool Derivation::operator==(const Derivation& o) const {
  if (src_ != o.src_ || tgt_ != o.tgt_ || degree_ != o.degree_) return false;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != o.values_[i]) return false;
  }
  return true;
}

std::string Derivation::str() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < src_->size(); ++i) {
    if (values_[i].is_zero()) continue;
    if (!first) os << ", ";
    first = false;
    os << src_->generators()[i].name << " -> " << values_[i].str();
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace dgdef
