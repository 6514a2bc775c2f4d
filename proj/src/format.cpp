#include "dgdef/format.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "dgdef/artin.hpp"
#include "dgdef/errors.hpp"

namespace dgdef {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("IOError", "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

struct Line {
  int number;
  std::string text;    // without comment
  std::size_t indent;  // offset of the first token
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto start = raw.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    out.push_back({n, raw, start});
  }
  return out;
}

// Splits "<keyword> rest"; returns the keyword and the offset of rest.
std::pair<std::string, std::size_t> keyword(const Line& l) {
  std::size_t end = l.text.find_first_of(" \t", l.indent);
  if (end == std::string::npos) return {l.text.substr(l.indent), l.text.size()};
  std::size_t rest = l.text.find_first_not_of(" \t", end);
  return {l.text.substr(l.indent, end - l.indent), rest == std::string::npos ? l.text.size() : rest};
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

[[noreturn]] void fail(const Line& l, std::size_t col, const std::string& msg) {
  throw ParseError(msg, l.number, static_cast<int>(col) + 1);
}

// Parses "<name> = <expr>" starting at offset; returns name and expr offset.
std::pair<std::string, std::size_t> assignment(const Line& l, std::size_t at) {
  auto eq = l.text.find('=', at);
  if (eq == std::string::npos) fail(l, at, "expected '='");
  auto name = tokens(l.text.substr(at, eq - at));
  if (name.size() != 1) fail(l, at, "expected a single generator name before '='");
  return {name[0], eq + 1};
}

Element parse_at(const AlgPtr& alg, const Line& l, std::size_t at) {
  try {
    return alg->parse(l.text.substr(at));
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), l.number, static_cast<int>(at) + e.column());
  }
}

std::map<std::string, AlgPtr>& algebra_cache() {
  static std::map<std::string, AlgPtr> cache;
  return cache;
}

std::map<std::string, ArtinPtr>& artin_cache() {
  static std::map<std::string, ArtinPtr> cache;
  return cache;
}

std::string cache_key(const fs::path& p) {
  std::error_code ec;
  auto c = fs::canonical(p, ec);
  return ec ? p.string() : c.string();
}

}  // namespace

AlgPtr parse_algebra(const std::string& text, const ArtinResolver& resolver) {
  ArtinPtr base;
  Regime regime = Regime::nonpositive;
  std::vector<std::pair<std::string, int>> gens;
  std::vector<std::pair<Line, std::size_t>> diffs;
  std::vector<std::pair<Line, std::size_t>> rels;
  bool seen_base = false;
  for (const auto& l : split_lines(text)) {
    auto [kw, rest] = keyword(l);
    auto args = tokens(l.text.substr(rest));
    if (kw == "base") {
      if (seen_base) fail(l, l.indent, "duplicate base directive");
      seen_base = true;
      if (args.size() == 1 && args[0] == "Q") continue;
      if (args.size() == 2 && args[0] == "artin") {
        if (!resolver) fail(l, rest, "no resolver for artin base");
        base = resolver(args[1]);
        continue;
      }
      fail(l, rest, "expected 'Q' or 'artin <file>'");
    } else if (kw == "regime") {
      if (args.size() == 1 && args[0] == "nonpositive") {
        regime = Regime::nonpositive;
      } else if (args.size() == 1 && args[0] == "unbounded") {
        regime = Regime::unbounded;
      } else {
        fail(l, rest, "expected 'nonpositive' or 'unbounded'");
      }
    } else if (kw == "gen") {
      if (args.size() != 2) fail(l, rest, "expected 'gen <name> <degree>'");
      int deg = 0;
      try {
        std::size_t used = 0;
        deg = std::stoi(args[1], &used);
        if (used != args[1].size()) throw std::invalid_argument(args[1]);
      } catch (const std::exception&) {
        fail(l, l.text.find(args[1], rest), "bad degree '" + args[1] + "'");
      }
      gens.emplace_back(args[0], deg);
    } else if (kw == "diff") {
      diffs.emplace_back(l, rest);
    } else if (kw == "rel") {
      rels.emplace_back(l, rest);
    } else {
      fail(l, l.indent, "unknown directive '" + kw + "'");
    }
  }
  // Syntax is checked against a free algebra so errors keep their position.
  DGAlgebra::Builder free(base, Regime::unbounded);
  for (const auto& [n, deg] : gens) free.gen(n, deg);
  AlgPtr staging = free.build();

  DGAlgebra::Builder b(base, regime);
  for (const auto& [n, deg] : gens) b.gen(n, deg);
  for (const auto& [l, at] : diffs) {
    auto [name, expr] = assignment(l, at);
    if (!staging->find(name)) fail(l, at, "unknown generator '" + name + "'");
    b.diff(name, parse_at(staging, l, expr));
  }
  for (const auto& [l, at] : rels) b.rel(parse_at(staging, l, at));
  return b.build();
}

ArtinPtr load_artin(const fs::path& path) {
  auto key = cache_key(path);
  auto& cache = artin_cache();
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  AlgPtr pres = load_algebra(path);
  ArtinPtr ring = ArtinRing::make(pres);
  cache.emplace(key, ring);
  return ring;
}

AlgPtr load_algebra(const fs::path& path) {
  auto key = cache_key(path);
  auto& cache = algebra_cache();
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  fs::path dir = path.parent_path();
  AlgPtr a = parse_algebra(read_text(path), [&](const std::string& ref) {
    fs::path p = fs::path(ref).is_absolute() ? fs::path(ref) : dir / ref;
    return load_artin(p);
  });
  cache.emplace(key, a);
  return a;
}

ArtinPtr ArtinRing::from_text(const std::string& text) { return make(parse_algebra(text)); }

std::string serialize_algebra(const AlgPtr& a, const std::string& base_ref) {
  std::ostringstream os;
  if (a->base()) {
    os << "base artin " << base_ref << "\n";
  } else {
    os << "base Q\n";
  }
  os << "regime " << (a->regime() == Regime::nonpositive ? "nonpositive" : "unbounded") << "\n";
  for (const auto& g : a->generators()) {
    if (!g.base) os << "gen " << g.name << " " << g.degree << "\n";
  }
  for (int i = 0; i < a->size(); ++i) {
    const auto& g = a->generators()[i];
    if (!g.base && !a->diff(i).is_zero()) os << "diff " << g.name << " = " << a->diff(i).str() << "\n";
  }
  for (const auto& r : a->relations()) {
    bool base_only = true;
    for (const auto& [m, c] : r.terms()) base_only = base_only && a->is_base_monomial(m);
    if (base_only && a->base()) continue;
    os << "rel " << r.str() << "\n";
  }
  if (!a->base()) {
    for (const auto& s : a->socle_rules()) os << "rel " << s.str() << "\n";
  }
  return os.str();
}

bool same_presentation(const AlgPtr& a, const AlgPtr& b) {
  if (a->size() != b->size()) return false;
  for (int i = 0; i < a->size(); ++i) {
    const auto& ga = a->generators()[i];
    const auto& gb = b->generators()[i];
    if (ga.name != gb.name || ga.degree != gb.degree || ga.base != gb.base) return false;
    if (transport(a->diff(i), b) != b->diff(i)) return false;
  }
  if (a->regime() != b->regime()) return false;
  // Each side's relations vanish in the other.
  for (const auto& r : a->relations()) {
    if (!transport(r, b).is_zero()) return false;
  }
  for (const auto& r : b->relations()) {
    if (!transport(r, a).is_zero()) return false;
  }
  return true;
}

MorphismFile load_morphism(const fs::path& path) {
  fs::path dir = path.parent_path();
  auto resolve = [&](const std::string& ref) {
    return fs::path(ref).is_absolute() ? fs::path(ref) : dir / ref;
  };
  std::optional<fs::path> src;
  std::optional<fs::path> tgt;
  std::vector<std::pair<Line, std::size_t>> maps;
  for (const auto& l : split_lines(read_text(path))) {
    auto [kw, rest] = keyword(l);
    auto args = tokens(l.text.substr(rest));
    if (kw == "source" && args.size() == 1) {
      src = resolve(args[0]);
    } else if (kw == "target" && args.size() == 1) {
      tgt = resolve(args[0]);
    } else if (kw == "map") {
      maps.emplace_back(l, rest);
    } else {
      fail(l, l.indent, "unknown directive '" + kw + "'");
    }
  }
  if (!src || !tgt) throw ParseError("morphism file needs source and target", 1, 1);
  AlgPtr s = load_algebra(*src);
  AlgPtr t = load_algebra(*tgt);
  ImageMap ims;
  for (const auto& [l, at] : maps) {
    auto [name, expr] = assignment(l, at);
    if (!s->find(name)) fail(l, at, "unknown source generator '" + name + "'");
    ims.emplace(name, parse_at(t, l, expr));
  }
  return {make_morphism(s, t, ims), *src, *tgt};
}

std::string serialize_morphism(const Morphism& f, const std::string& source_ref,
                               const std::string& target_ref) {
  std::ostringstream os;
  os << "source " << source_ref << "\n";
  os << "target " << target_ref << "\n";
  for (int i = 0; i < f.source()->size(); ++i) {
    const auto& g = f.source()->generators()[i];
    if (!g.base) os << "map " << g.name << " = " << f.image(i).str() << "\n";
  }
  return os.str();
}

}  // namespace dgdef
