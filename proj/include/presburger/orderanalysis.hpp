#pragma once

#include <string>
#include <vector>

#include "presburger/interp.hpp"
#include "presburger/semilinear.hpp"

namespace presburger {

// Order type of one galaxy: ascending chain, descending chain, chain
// unbounded both ways, or a finite block with its exact size.
struct GalaxyType {
  enum class Tag { N, NegN, Z, Finite };
  Tag tag = Tag::N;
  std::size_t size = 0; // Finite only

  friend bool operator==(const GalaxyType&, const GalaxyType&) = default;
};

std::string galaxyTypeString(const GalaxyType& t);
std::ostream& operator<<(std::ostream& os, const GalaxyType& t);

struct CondensationResult {
  Interpretation cI; // domain restricted to galaxy representatives
  DisjointFundamentalDecomposition domainDecomposition;
  std::size_t dimension = 0;
};

struct RankResult {
  std::size_t rank = 0;
  std::vector<CondensationResult> chain; // one per condensation step
  std::size_t finalSize = 0;             // cardinality of the final finite order
};

struct CondenseOptions {
  // Also pick a second representative inside every Z-shaped galaxy (the
  // lexicographically least point strictly below the galaxy's least
  // representative), splitting it into a descending and an ascending half.
  bool splitZ = false;
};

// Classification of the galaxy of `a`: decides boundedness below/above
// within the T-class; finite galaxies are counted exactly inside a
// certified box (certificate: a decided boundedness sentence).
GalaxyType galaxyType(const Interpretation& I, const Vec& a, const Limits& limits = {});

// Restrict the domain to the lexicographically least point of each galaxy,
// keeping the order; the new domain is decomposed and measured.
CondensationResult condense(const Interpretation& I, const CondenseOptions& opts = {},
                            const Limits& limits = {});

// Iterated condensation count until the domain becomes finite. Errors if
// more than m + 1 iterations are needed (impossible for a valid input).
RankResult vdRank(const Interpretation& I, const Limits& limits = {});

// Built-in example interpretations, all passing validate().
std::vector<Interpretation> catalog();

// Catalog lookup by name; throws DomainError on unknown names.
Interpretation catalogEntry(const std::string& name);

} // namespace presburger
