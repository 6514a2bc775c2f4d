#ifndef DGDEF_FORMAT_HPP
#define DGDEF_FORMAT_HPP

#include <filesystem>
#include <functional>
#include <string>

#include "dgdef/algebra.hpp"
#include "dgdef/morphism.hpp"

namespace dgdef {

// Maps the argument of `base artin <ref>` to a ring.
using ArtinResolver = std::function<ArtinPtr(const std::string&)>;

// Line-oriented algebra description:
//   base Q | base artin <file>
//   regime nonpositive|unbounded
//   gen <name> <degree>
//   diff <name> = <expr>
//   rel <expr>
// Blank lines and text after '#' are ignored.
AlgPtr parse_algebra(const std::string& text, const ArtinResolver& resolver = {});
AlgPtr load_algebra(const std::filesystem::path& path);
ArtinPtr load_artin(const std::filesystem::path& path);

// Canonical text; the base is written as `base artin <base_ref>`.
std::string serialize_algebra(const AlgPtr& a, const std::string& base_ref = "base.dga");
// Structural equality: generators, differentials and the relation ideal.
bool same_presentation(const AlgPtr& a, const AlgPtr& b);

// Morphism file:
//   source <algebra file>
//   target <algebra file>
//   map <gen> = <expr>
struct MorphismFile {
  Morphism morphism;
  std::filesystem::path source_path;
  std::filesystem::path target_path;
};
MorphismFile load_morphism(const std::filesystem::path& path);
std::string serialize_morphism(const Morphism& f, const std::string& source_ref,
                               const std::string& target_ref);

std::string read_text(const std::filesystem::path& path);

}  // namespace dgdef

#endif
