#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "diagramcat/diagrams.hpp"
#include "diagramcat/homsets.hpp"

namespace testing {

// Two labelings describe the same equivalence relation.
template <class A, class B>
bool sameClasses(const std::vector<A>& a, const std::vector<B>& b) {
  if (a.size() != b.size()) return false;
  std::map<A, B> f;
  std::map<B, A> g;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [it, fresh] = f.emplace(a[i], b[i]);
    if (!fresh && it->second != b[i]) return false;
    auto [jt, fresh2] = g.emplace(b[i], a[i]);
    if (!fresh2 && jt->second != a[i]) return false;
  }
  return true;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline const diagramcat::Partition& pick(const diagramcat::HomSet& h) {
  std::uniform_int_distribution<std::size_t> d(0, h.size() - 1);
  return h.elements[d(rng())];
}

}  // namespace testing

#include "diagramcat/sandwich.hpp"

namespace testing {

struct ContextCase {
  diagramcat::Tag tag;
  uint32_t m, n;
  const char* sigma;
};

// Sandwich contexts spanning all six categories, each hom-set of at most 2000 elements.
inline const std::vector<ContextCase>& contextCases() {
  using diagramcat::Tag;
  static const std::vector<ContextCase> cases = {
      {Tag::P, 2, 2, "2 2 | 1,-1 | 2 | -2"},
      {Tag::P, 3, 3, "3 3 | 1,-1 | 3,-2,-3 | 2"},
      {Tag::P, 2, 3, "3 2 | 1,2,-1 | 3 | -2"},
      {Tag::P, 3, 2, "2 3 | 1,-1,-2 | 2,-3"},
      {Tag::P, 1, 3, "3 1 | 1 | 2 | 3 | -1"},
      {Tag::P, 4, 3, "3 4 | 1,-1,-2 | 2 | 3,-4 | -3"},
      {Tag::PB, 3, 3, "3 3 | 1,-1 | 2,3 | -2 | -3"},
      {Tag::PB, 4, 2, "2 4 | 1,-2 | 2 | -1,-3 | -4"},
      {Tag::PB, 3, 3, "3 3 | 1,-2 | 2,-1 | 3,-3"},
      {Tag::B, 4, 4, "4 4 | 1,-1 | 2,-2 | 3,4 | -3,-4"},
      {Tag::B, 4, 2, "2 4 | 1,-1 | 2,-2 | -3,-4"},
      {Tag::B, 3, 3, "3 3 | 1,2 | 3,-3 | -1,-2"},
      {Tag::B, 2, 4, "4 2 | 1,3 | 2,4 | -1,-2"},
      {Tag::B, 5, 3, "3 5 | 1,-5 | 2,3 | -1,-2 | -3,-4"},
      {Tag::PP, 3, 2, "2 3 | 1,2,-1 | -2,-3"},
      {Tag::PP, 3, 3, "3 3 | 1,-1 | 2,3,-3 | -2"},
      {Tag::PP, 4, 2, "2 4 | 1,-1,-2 | 2,-4 | -3"},
      {Tag::M, 3, 2, "2 3 | 1,-2 | 2 | -1 | -3"},
      {Tag::M, 3, 3, "3 3 | 1,-1 | 2,3 | -2,-3"},
      {Tag::M, 4, 4, "4 4 | 1,-1 | 2,-4 | 3 | 4 | -2,-3"},
      {Tag::TL, 4, 4, "4 4 | 1,-3 | 2,-4 | 3,4 | -1,-2"},
      {Tag::TL, 4, 4, "4 4 | 1,-1 | 2,-2 | 3,4 | -3,-4"},
      {Tag::TL, 5, 3, "3 5 | 1,-1 | 2,3 | -2,-3 | -4,-5"},
      {Tag::TL, 6, 4, "4 6 | 1,-1 | 2,3 | 4,-6 | -2,-3 | -4,-5"},
  };
  return cases;
}

inline diagramcat::SandwichContext makeCase(const ContextCase& k) {
  return diagramcat::makeContext(k.tag, k.m, k.n, diagramcat::parseText(k.sigma));
}

}  // namespace testing
