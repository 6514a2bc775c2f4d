#include "dgdef/morphism.hpp"

#include <set>
#include <sstream>

#include "dgdef/artin.hpp"
#include "dgdef/errors.hpp"

namespace dgdef {

Morphism::Morphism(AlgPtr source, AlgPtr target, std::vector<Element> images, bool chain_map)
    : src_(std::move(source)),
      tgt_(std::move(target)),
      images_(std::move(images)),
      chain_map_(chain_map),
      memo_(std::make_shared<std::map<Monomial, Element>>()) {}

const Element& Morphism::image(const std::string& gen) const { return images_[src_->index(gen)]; }

Element Morphism::apply(const Element& a) const {
  if (a.is_zero()) return tgt_->zero();
  Element x = a.algebra() == src_ ? a : transport(a, src_);
  Element out = tgt_->zero();
  for (const auto& [m, c] : x.terms()) {
    auto it = memo_->find(m);
    if (it == memo_->end()) {
      Element term = tgt_->one();
      for (std::size_t i = 0; i < m.size() && !term.is_zero(); ++i) {
        for (int e = 0; e < m[i]; ++e) term = term * images_[i];
      }
      it = memo_->emplace(m, term).first;
    }
    out += c * it->second;
  }
  return out;
}

std::string Morphism::str() const {
  std::ostringstream os;
  for (int i = 0; i < src_->size(); ++i) {
    if (src_->generators()[i].base) continue;
    os << src_->generators()[i].name << " -> " << images_[i].str() << "\n";
  }
  return os.str();
}

namespace {

std::vector<Element> resolve_images(const AlgPtr& source, const AlgPtr& target,
                                    const ImageMap& images) {
  for (const auto& [name, v] : images) {
    if (!source->find(name)) throw Error("UnknownGenerator", name + " is not a source generator");
  }
  std::vector<Element> out;
  for (int i = 0; i < source->size(); ++i) {
    const Generator& g = source->generators()[i];
    auto it = images.find(g.name);
    Element im;
    if (it != images.end()) {
      im = it->second.algebra() ? transport(it->second, target) : target->zero();
    } else if (g.base) {
      auto j = target->find(g.name);
      im = j ? target->gen(*j) : target->zero();
    } else {
      throw Error("MissingImage", "no image for " + g.name);
    }
    if (!im.is_zero()) {
      auto deg = im.degree();
      if (!deg || *deg != g.degree) {
        throw Error("DegreeMismatch", g.name + " -> " + im.str() + " changes degree");
      }
    }
    out.push_back(im);
  }
  return out;
}

// Free representatives are not in normal form, so apply termwise.
Element apply_free(const Morphism& f, const Terms& t) {
  return f.apply(Element::from_normal(f.source(), t));
}

}  // namespace

std::optional<std::pair<std::string, Element>> chain_defect(const Morphism& f) {
  for (int i = 0; i < f.source()->size(); ++i) {
    Element defect = d(f.image(i)) - f.apply(f.source()->diff(i));
    if (!defect.is_zero()) return std::make_pair(f.source()->generators()[i].name, defect);
  }
  return std::nullopt;
}

Morphism make_graded_map(const AlgPtr& source, const AlgPtr& target, const ImageMap& images) {
  Morphism f(source, target, resolve_images(source, target, images), false);
  for (const auto& r : source->relations()) {
    Element v = apply_free(f, r.terms());
    if (!v.is_zero()) throw Error("RelationNotPreserved", r.str() + " maps to " + v.str());
  }
  for (const auto& r : source->socle_rules()) {
    Element v = apply_free(f, r.terms());
    if (!v.is_zero()) throw Error("RelationNotPreserved", r.str() + " maps to " + v.str());
  }
  return f;
}

Morphism make_morphism(const AlgPtr& source, const AlgPtr& target, const ImageMap& images) {
  Morphism f = make_graded_map(source, target, images);
  if (auto defect = chain_defect(f)) {
    throw ChainMapFailure(defect->first, defect->second.str());
  }
  return Morphism(source, target, f.images(), true);
}

Morphism make_morphism(const AlgPtr& source, const AlgPtr& target,
                       const std::map<std::string, std::string>& images) {
  ImageMap parsed;
  for (const auto& [k, v] : images) parsed.emplace(k, target->parse(v));
  return make_morphism(source, target, parsed);
}

Morphism identity(const AlgPtr& a) {
  std::vector<Element> ims;
  for (int i = 0; i < a->size(); ++i) ims.push_back(a->gen(i));
  return Morphism(a, a, ims, true);
}

Morphism compose(const Morphism& g, const Morphism& f) {
  if (f.target() != g.source()) throw Error("MixedAlgebras", "composition of non-composable maps");
  std::vector<Element> ims;
  for (const auto& im : f.images()) ims.push_back(g.apply(im));
  return Morphism(f.source(), g.target(), ims, f.chain_map() && g.chain_map());
}

bool same_on_generators(const Morphism& f, const Morphism& g) {
  if (f.source() != g.source() || f.target() != g.target()) return false;
  for (int i = 0; i < f.source()->size(); ++i) {
    if (f.image(i) != g.image(i)) return false;
  }
  return true;
}

Pushout pushout(const Morphism& f, const Morphism& g) {
  if (f.source() != g.source()) throw Error("MixedAlgebras", "pushout legs need a common source");
  const AlgPtr& a = f.source();
  const AlgPtr& x = f.target();
  const AlgPtr& b = g.target();
  const ArtinPtr& base = b->base();
  Regime regime = (x->regime() == Regime::unbounded || b->regime() == Regime::unbounded)
                      ? Regime::unbounded
                      : Regime::nonpositive;

  std::set<std::string> bnames;
  for (const auto& gen : b->generators()) bnames.insert(gen.name);
  std::map<std::string, std::string> xname;  // X generator -> combined name
  for (const auto& gen : x->generators()) {
    if (gen.base) {
      xname[gen.name] = gen.name;
      continue;
    }
    std::string n = gen.name;
    while (bnames.count(n) || (x->find(n) && n != gen.name)) n += "'";
    xname[gen.name] = n;
  }

  // Free staging algebra on every generator.
  DGAlgebra::Builder sb(base, Regime::unbounded);
  for (const auto& gen : x->generators()) {
    if (!gen.base) sb.gen(xname[gen.name], gen.degree);
  }
  for (const auto& gen : b->generators()) {
    if (!gen.base) sb.gen(gen.name, gen.degree);
  }
  AlgPtr stage = sb.build();

  auto to_stage_x = [&](const Element& e) {
    Element out = stage->zero();
    for (const auto& [m, c] : e.terms()) {
      Element t = stage->scalar(c);
      for (int i = 0; i < x->size(); ++i) {
        for (int k = 0; k < m[i]; ++k) t = t * stage->gen(xname[x->generators()[i].name]);
      }
      out += t;
    }
    return out;
  };
  auto to_stage_b = [&](const Element& e) { return transport(e, stage); };

  std::map<std::string, Element> subst;  // eliminated staging generator -> value
  std::vector<Element> extra;
  for (int i = 0; i < a->size(); ++i) {
    if (a->generators()[i].base) continue;
    Element fx = to_stage_x(f.image(i));
    Element gb = to_stage_b(g.image(i));
    auto single = [&](const Element& e) -> std::optional<std::string> {
      if (e.terms().size() != 1 || e.terms().begin()->second != 1) return std::nullopt;
      const Monomial& m = e.terms().begin()->first;
      int count = 0;
      int idx = -1;
      for (std::size_t k = 0; k < m.size(); ++k) {
        count += m[k];
        if (m[k]) idx = static_cast<int>(k);
      }
      if (count != 1 || stage->generators()[idx].base) return std::nullopt;
      return stage->generators()[idx].name;
    };
    if (auto sx = single(fx); sx && !subst.count(*sx)) {
      subst.emplace(*sx, gb);
    } else if (auto sbn = single(gb); sbn && !subst.count(*sbn)) {
      subst.emplace(*sbn, fx);
    } else {
      extra.push_back(fx - gb);
    }
  }
  // Substitute eliminated generators until nothing changes.
  std::vector<Element> images;
  for (int i = 0; i < stage->size(); ++i) {
    auto it = subst.find(stage->generators()[i].name);
    images.push_back(it == subst.end() ? stage->gen(i) : it->second);
  }
  auto apply_subst = [&](const Element& e) {
    Element cur = e;
    for (int round = 0; round <= static_cast<int>(subst.size()) + 1; ++round) {
      Element next = substitute(cur, images);
      if (next == cur) return cur;
      cur = next;
    }
    throw Error("UnsupportedRelation", "cyclic identification in pushout");
  };

  DGAlgebra::Builder pb(base, regime);
  pb.label(x->label() + "⊗" + b->label());
  for (int i = 0; i < stage->size(); ++i) {
    const auto& gen = stage->generators()[i];
    if (!gen.base && !subst.count(gen.name)) pb.gen(gen.name, gen.degree);
  }
  for (int i = 0; i < x->size(); ++i) {
    const auto& gen = x->generators()[i];
    if (gen.base || subst.count(xname[gen.name])) continue;
    Element dv = apply_subst(to_stage_x(x->diff(i)));
    if (!dv.is_zero()) pb.diff(xname[gen.name], dv);
  }
  for (int i = 0; i < b->size(); ++i) {
    const auto& gen = b->generators()[i];
    if (gen.base || subst.count(gen.name)) continue;
    Element dv = apply_subst(to_stage_b(b->diff(i)));
    if (!dv.is_zero()) pb.diff(gen.name, dv);
  }
  for (const auto& r : x->relations()) {
    bool base_only = true;
    for (const auto& [m, c] : r.terms()) base_only = base_only && x->is_base_monomial(m);
    if (base_only) continue;
    Element v = apply_subst(to_stage_x(r));
    if (!v.is_zero()) pb.rel(v);
  }
  for (const auto& r : b->relations()) {
    bool base_only = true;
    for (const auto& [m, c] : r.terms()) base_only = base_only && b->is_base_monomial(m);
    if (base_only) continue;
    Element v = apply_subst(to_stage_b(r));
    if (!v.is_zero()) pb.rel(v);
  }
  for (const auto& e : extra) {
    Element v = apply_subst(e);
    if (!v.is_zero()) pb.rel(v);
  }
  AlgPtr out = pb.build();

  ImageMap jx;
  for (int i = 0; i < x->size(); ++i) {
    const auto& gen = x->generators()[i];
    if (gen.base) continue;
    jx.emplace(gen.name, transport(apply_subst(stage->gen(xname[gen.name])), out));
  }
  ImageMap jb;
  for (int i = 0; i < b->size(); ++i) {
    const auto& gen = b->generators()[i];
    if (gen.base) continue;
    jb.emplace(gen.name, transport(apply_subst(stage->gen(gen.name)), out));
  }
  return {out, make_morphism(x, out, jx), make_morphism(b, out, jb)};
}

BaseChange change_base(const AlgPtr& r, const ArtinPtr& new_base) {
  DGAlgebra::Builder b(new_base, r->regime());
  b.label(r->label());
  b.drop_missing();
  for (const auto& gen : r->generators()) {
    if (!gen.base) b.gen(gen.name, gen.degree);
  }
  for (int i = 0; i < r->size(); ++i) {
    if (r->generators()[i].base || r->diff(i).is_zero()) continue;
    b.diff(r->generators()[i].name, r->diff(i));
  }
  for (const auto& rel : r->relations()) {
    bool base_only = true;
    for (const auto& [m, c] : rel.terms()) base_only = base_only && r->is_base_monomial(m);
    if (!base_only) b.rel(rel);
  }
  AlgPtr out = b.build();
  ImageMap ims;
  for (const auto& gen : r->generators()) {
    if (!gen.base) ims.emplace(gen.name, out->gen(gen.name));
  }
  Morphism m = make_graded_map(r, out, ims);
  return {out, Morphism(r, out, m.images(), !chain_defect(m))};
}

BaseChange reduction(const AlgPtr& r) { return change_base(r, nullptr); }

Morphism change_base(const Morphism& f, const AlgPtr& new_source, const AlgPtr& new_target) {
  ImageMap ims;
  for (int i = 0; i < f.source()->size(); ++i) {
    const auto& gen = f.source()->generators()[i];
    if (gen.base) continue;
    ims.emplace(gen.name, transport(f.image(i), new_target, true));
  }
  Morphism g = make_graded_map(new_source, new_target, ims);
  return Morphism(new_source, new_target, g.images(), !chain_defect(g));
}

Extension adjoin(const AlgPtr& a, const std::vector<NewGenerator>& gens, Regime regime) {
  DGAlgebra::Builder b(a->base(), regime);
  b.label(a->label());
  for (int i = 0; i < a->size(); ++i) {
    const auto& g = a->generators()[i];
    if (g.base && a->base()) continue;
    if (g.base) {
      b.base_gen(g.name, g.degree);
    } else {
      b.gen(g.name, g.degree);
    }
    if (!a->diff(i).is_zero()) b.diff(g.name, a->diff(i));
  }
  for (const auto& g : gens) {
    b.gen(g.name, g.degree);
    if (g.diff && !g.diff->is_zero()) {
      b.diff(g.name, *g.diff);
    } else if (!g.diff && !g.diff_text.empty()) {
      b.diff(g.name, g.diff_text);
    }
  }
  for (const auto& rel : a->relations()) {
    bool base_only = true;
    for (const auto& [m, c] : rel.terms()) base_only = base_only && a->is_base_monomial(m);
    if (!(base_only && a->base())) b.rel(rel);
  }
  if (!a->base()) {
    for (const auto& s : a->socle_rules()) b.socle_rule(s);
  }
  AlgPtr out = b.build();
  std::vector<Element> ims;
  for (int i = 0; i < a->size(); ++i) ims.push_back(out->gen(a->generators()[i].name));
  return {out, Morphism(a, out, ims, true)};
}

Extension adjoin(const AlgPtr& a, const std::vector<NewGenerator>& gens) {
  return adjoin(a, gens, a->regime());
}

}  // namespace dgdef
