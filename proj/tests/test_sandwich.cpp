#include "doctest.h"

#include <set>

#include "diagramcat/sandwich.hpp"
#include "support.hpp"

using namespace diagramcat;

namespace {

std::set<Index> contextIndices(const SandwichContext& c, const FiniteSemigroup<Partition, PartitionHash>& s,
                               const std::vector<Index>& members) {
  std::set<Index> out;
  for (Index i : members) out.insert(c.indexOf(s.element(i)));
  return out;
}

}  // namespace

TEST_SUITE("sandwich") {
  TEST_CASE("sandwich products") {
    auto c = makeContext(Tag::P, 3, 3, identity(3));
    auto a = parseText("3 3 | 1,2,-1 | 3,-2,-3"), b = parseText("3 3 | 1,-3 | 2 | 3,-1,-2");
    CHECK(starProduct(c, a, b) == compose(a, b));

    auto d = makeContext(Tag::B, 2, 2, parseText("2 2 | 1,2 | -1,-2"));
    CHECK(d.r == 0);
    CHECK(starProduct(d, identity(2), identity(2)) == parseText("2 2 | 1,2 | -1,-2"));

    auto e = testing::makeCase(testing::contextCases()[1]);
    for (int t = 0; t < 500; ++t) {
      const auto &x = testing::pick(*e.homset), &y = testing::pick(*e.homset), &z = testing::pick(*e.homset);
      CHECK(starProduct(e, starProduct(e, x, y), z) == starProduct(e, x, starProduct(e, y, z)));
    }
  }

  TEST_CASE("context validation") {
    CHECK_THROWS_AS(makeContext(Tag::P, 2, 3, identity(2)), Error);
    CHECK_THROWS_AS(makeContext(Tag::TL, 2, 2, parseText("2 2 | 1,-2 | 2,-1")), Error);
    auto c = makeContext(Tag::P, 2, 2, parseText("2 2 | 1,-1 | 2 | -2"));
    CHECK_THROWS_AS(psi(c, parseText("2 2 | 1,-2 | 2,-1")), Error);
    CHECK_THROWS_AS(idealIdempotentStatus(c, pSets(c), 2), Error);
    CHECK_THROWS_AS(starProduct(c, identity(3), identity(3)), Error);
  }

  TEST_CASE("described classes equal Cayley-graph classes") {
    for (const auto& k : testing::contextCases()) {
      auto c = testing::makeCase(k);
      auto g = sandwichGreen(c);
      auto s = starSemigroup(c);
      auto e = greenStructure(s);
      CHECK_MESSAGE(g.r == e.r, k.sigma);
      CHECK_MESSAGE(g.l == e.l, k.sigma);
      CHECK_MESSAGE(g.h == e.h, k.sigma);
      CHECK_MESSAGE(g.d == e.d, k.sigma);
      for (int t = 0; t < 300; ++t) {
        Index x = Index(testing::rng()() % c.size()), y = Index(testing::rng()() % c.size());
        CHECK(sandwichLeq(c, Rel::R, c.element(x), c.element(y)) == e.leqR(x, y));
        CHECK(sandwichLeq(c, Rel::L, c.element(x), c.element(y)) == e.leqL(x, y));
        CHECK(sandwichLeq(c, Rel::J, c.element(x), c.element(y)) == e.leqJ(x, y));
      }
    }
  }

  TEST_CASE("P-sets") {
    for (const auto& k : testing::contextCases()) {
      auto c = testing::makeCase(k);
      auto ps = pSets(c);
      auto s = starSemigroup(c);
      auto e = greenStructure(s);
      for (Index i = 0; i < c.size(); ++i) {
        CHECK(ps.p[i] == (ps.p1[i] && ps.p2[i]));
        CHECK(ps.p[i] == ps.p3[i]);
        CHECK(bool(ps.p[i]) == bool(e.dRegular[e.d[i]]));
        CHECK(inP1Equational(c, c.element(i)) == bool(ps.p1[i]));
        CHECK(inP2Equational(c, c.element(i)) == bool(ps.p2[i]));
      }
      if (hasParityRule(c.tag)) CHECK(ps.joinAgrees == std::optional<bool>(true));
    }
  }

  TEST_CASE("Psi is a rank-preserving surjective homomorphism") {
    for (const auto& k : testing::contextCases()) {
      auto c = testing::makeCase(k);
      auto ps = pSets(c);
      auto reg = ps.members();
      std::set<Partition> image;
      for (Index i : reg) {
        auto p = psi(c, c.element(i));
        CHECK(p.rank() == c.element(i).rank());
        image.insert(p);
      }
      auto kr = enumerate(c.tag, uint32_t(c.r), uint32_t(c.r));
      CHECK(std::vector<Partition>(image.begin(), image.end()) == kr.elements);
      for (int t = 0; t < 300; ++t) {
        const auto& a = c.element(reg[testing::rng()() % reg.size()]);
        const auto& b = c.element(reg[testing::rng()() % reg.size()]);
        CHECK(psi(c, starProduct(c, a, b)) == compose(psi(c, a), psi(c, b)));
      }
    }
  }

  TEST_CASE("fibres over group H-classes are rectangular groups") {
    for (const auto& k : testing::contextCases()) {
      auto c = testing::makeCase(k);
      auto ps = pSets(c);
      auto g = sandwichGreen(c, ps);
      std::map<uint32_t, std::vector<Index>> fibres;
      for (Index i : ps.members()) fibres[g.hHat[i]].push_back(i);
      CHECK(fibres.size() == g.numHHat);
      for (const auto& [id, members] : fibres) {
        std::set<Partition> image;
        std::set<uint32_t> rs, ls;
        for (Index i : members) {
          image.insert(psi(c, c.element(i)));
          rs.insert(g.r[i]);
          ls.insert(g.l[i]);
        }
        bool group = std::any_of(image.begin(), image.end(), [](const Partition& x) { return compose(x, x) == x; });
        if (!group) continue;
        CHECK(members.size() == rs.size() * ls.size() * image.size());
        std::set<Index> in(members.begin(), members.end());
        for (Index a : members)
          for (Index b : members) CHECK(in.count(starIndex(c, a, b)));
      }
    }
  }

  TEST_CASE("projection sandwich elements give regular *-semigroups") {
    auto sigma = parseText("3 3 | 1,2,-1,-2 | 3 | -3");
    REQUIRE(compose(sigma, sigma) == sigma);
    REQUIRE(involution(sigma) == sigma);
    auto c = makeContext(Tag::P, 3, 3, sigma);
    auto ps = pSets(c);
    for (Index i : ps.members()) {
      const auto& a = c.element(i);
      auto as = involution(a);
      CHECK(ps.p[c.indexOf(as)]);
      CHECK(starProduct(c, starProduct(c, a, as), a) == a);
      CHECK(starProduct(c, starProduct(c, as, a), as) == as);
    }
    auto reg = ps.members();
    for (int t = 0; t < 500; ++t) {
      const auto& a = c.element(reg[testing::rng()() % reg.size()]);
      const auto& b = c.element(reg[testing::rng()() % reg.size()]);
      CHECK(involution(starProduct(c, a, b)) == starProduct(c, involution(b), involution(a)));
    }
  }

  TEST_CASE("right-invertible sandwich elements give a left-group on top") {
    for (auto [tag, m, n, text] : std::vector<std::tuple<Tag, uint32_t, uint32_t, const char*>>{
             {Tag::P, 3, 2, "2 3 | 1,-1,-2 | 2,-3"},
             {Tag::B, 4, 2, "2 4 | 1,-1 | 2,-2 | -3,-4"},
             {Tag::PB, 4, 2, "2 4 | 1,-2 | 2,-1 | -3,-4"}}) {
      auto c = makeContext(tag, m, n, parseText(text));
      auto ps = pSets(c);
      auto inv = inverseSets(c);
      auto mc = maximalJClasses(c, ps, inv);
      REQUIRE(mc.nontrivial.has_value());
      CHECK(mc.shape == "left-group");
      auto g = sandwichGreen(c, ps);
      std::set<uint32_t> ls;
      for (Index i : *mc.nontrivial) ls.insert(g.l[i]);
      CHECK(ls.size() == 1);
      std::vector<Index> idem;
      for (Index i : *mc.nontrivial)
        if (starIndex(c, i, i) == i) idem.push_back(i);
      CHECK(idem == inv.ri);

      auto s = starSemigroup(c, *mc.nontrivial);
      auto gs = greenStructure(s);
      std::size_t hClasses = gs.numH;
      auto groupHere = s.restrictTo(gs.hMembers[gs.h[idempotents(s)[0]]]);
      auto gg = greenStructure(groupHere);
      std::size_t expected = std::max(hClasses, exactRank(groupHere, gg).rank);
      CHECK(exactRank(s, gs).rank == expected);
    }
  }

  TEST_CASE("maximal and minimal classes agree with the engine") {
    for (const auto& k : testing::contextCases()) {
      auto c = testing::makeCase(k);
      auto ps = pSets(c);
      auto inv = inverseSets(c);
      auto mc = maximalJClasses(c, ps, inv);
      auto s = starSemigroup(c);
      auto e = greenStructure(s);
      std::set<Index> trivial;
      std::optional<std::vector<Index>> nontrivial;
      for (uint32_t dc : e.maximalD()) {
        const auto& D = e.dMembers[dc];
        if (D.size() == 1 && !e.dRegular[dc])
          trivial.insert(D[0]);
        else
          nontrivial = D;
      }
      CHECK_MESSAGE(std::set<Index>(mc.trivial.begin(), mc.trivial.end()) == trivial, k.sigma);
      CHECK_MESSAGE(mc.nontrivial == nontrivial, k.sigma);

      auto minimal = minimalIdeal(c);
      std::vector<Index> engineMinimal;
      for (uint32_t dc = 0; dc < e.numD; ++dc) {
        bool isMin = true;
        for (uint32_t other = 0; other < e.numD; ++other) isMin = isMin && e.dLeq(dc, other);
        if (isMin) engineMinimal = e.dMembers[dc];
      }
      CHECK(minimal == engineMinimal);
      for (Index x : minimal)
        for (Index a = 0; a < c.size(); ++a) {
          CHECK(std::binary_search(minimal.begin(), minimal.end(), starIndex(c, x, a)));
          CHECK(std::binary_search(minimal.begin(), minimal.end(), starIndex(c, a, x)));
        }
    }
  }

  TEST_CASE("inverse sets") {
    for (const auto& k : testing::contextCases()) {
      auto c = testing::makeCase(k);
      auto inv = inverseSets(c);
      std::vector<Index> both;
      std::set_intersection(inv.pre.begin(), inv.pre.end(), inv.post.begin(), inv.post.end(), std::back_inserter(both));
      CHECK(both == inv.v);
      for (Index x : inv.post) CHECK(starIndex(c, x, x) == x);
      for (Index x : inv.v) CHECK(compose(compose(c.sigma, c.element(x)), c.sigma) == c.sigma);
      CHECK(!inv.v.empty());
    }
  }

  TEST_CASE("mid-identities and regularity-preserving elements of Reg") {
    for (const auto& k : testing::contextCases()) {
      auto c = testing::makeCase(k);
      auto ps = pSets(c);
      if (ps.size > 400) continue;
      auto inv = inverseSets(c);
      auto reg = starSemigroup(c, ps.members());
      auto mi = contextIndices(c, reg, midIdentities(reg));
      CHECK_MESSAGE(mi == std::set<Index>(inv.v.begin(), inv.v.end()), k.sigma);
      auto g = sandwichGreen(c, ps);
      std::set<Index> top;
      std::set<uint32_t> classes;
      for (Index v : inv.v) classes.insert(g.d[v]);
      for (Index i : ps.members())
        if (classes.count(g.d[i])) top.insert(i);
      CHECK(classes.size() == 1);
      CHECK_MESSAGE(contextIndices(c, reg, regularityPreserving(reg)) == top, k.sigma);
      std::set<Index> topIdempotents;
      for (Index i : top)
        if (starIndex(c, i, i) == i) topIdempotents.insert(i);
      CHECK(topIdempotents == std::set<Index>(inv.v.begin(), inv.v.end()));
      for (Index a : top)
        for (Index b : top) CHECK(top.count(starIndex(c, a, b)));
    }
  }

  TEST_CASE("idempotent-generated subsemigroups") {
    for (const auto& k : testing::contextCases()) {
      auto c = testing::makeCase(k);
      auto ps = pSets(c);
      auto inv = inverseSets(c);
      auto eg = idempotentGenerated(c, ps, inv);
      CHECK_MESSAGE(eg.closure == eg.psiPreimage, k.sigma);
      if (c.tag == Tag::M)
        CHECK(!eg.closedForm);
      else
        CHECK_MESSAGE(eg.closedForm == std::optional(eg.closure), k.sigma);
      if (c.tag == Tag::TL || c.tag == Tag::PP) CHECK(eg.closure == ps.members());
    }
  }

  TEST_CASE("idempotent generation of ideals of Reg") {
    for (Tag tag : kAllTags)
      for (long r = 0; r <= 3; ++r) {
        auto c = makeContext(tag, uint32_t(r), uint32_t(r), identity(uint32_t(r)));
        auto ps = pSets(c);
        for (long q : c.Q) {
          auto st = idealIdempotentStatus(c, ps, q);
          CHECK(st.idealSize == ideal(c, ps, q).size());
          CHECK(st.isEGenerated == (q <= muEffective(tag, r)));
          if (r >= 2) CHECK(st.isEGenerated == (q <= muTable(tag, r)));
        }
      }
  }
}
