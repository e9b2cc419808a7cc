#include "doctest.h"

#include <set>

#include "diagramcat/brauer.hpp"
#include "support.hpp"

using namespace diagramcat;

namespace {

std::vector<BrauerParams> paramsUpTo(long maxSize) {
  std::vector<BrauerParams> out;
  for (long total = 0; total <= maxSize; total += 2)
    for (long m = 0; m <= total; ++m)
      for (long r = (total - m) % 2; r <= std::min(m, total - m); r += 2) out.push_back({m, total - m, r});
  return out;
}

SandwichContext canonicalContext(const BrauerParams& p) {
  return makeContext(Tag::B, uint32_t(p.m), uint32_t(p.n), canonicalSigma(p));
}

}  // namespace

TEST_SUITE("brauer") {
  TEST_CASE("parameter validation") {
    CHECK_NOTHROW(validate({4, 2, 2}));
    CHECK_THROWS_AS(validate({4, 3, 1}), Error);
    CHECK_THROWS_AS(validate({4, 4, 1}), Error);
    CHECK_THROWS_AS(validate({2, 2, 4}), Error);
    CHECK(canonicalSigma({4, 2, 2}) == parseText("2 4 | 1,-1 | 2,-2 | -3,-4"));
    CHECK(canonicalSigma({4, 4, 0}) == parseText("4 4 | 1,2 | 3,4 | -1,-2 | -3,-4"));
  }

  TEST_CASE("normalizing sandwich elements") {
    auto canon = canonicalSigma({4, 4, 2});
    auto nz = normalizeSigma(canon);
    CHECK(nz.sigma == canon);
    CHECK(nz.pi1 == identity(4));
    CHECK(nz.pi2 == identity(4));
    for (const auto& s : enumerate(Tag::B, 2, 2).elements)
      if (s.rank() == 0) CHECK(normalizeSigma(s).sigma == parseText("2 2 | 1,2 | -1,-2"));
    auto b46 = enumerate(Tag::B, 4, 6);
    for (int t = 0; t < 200; ++t) {
      const auto& s = testing::pick(b46);
      auto x = normalizeSigma(s);
      CHECK(compose(compose(x.pi1, x.sigma), x.pi2) == s);
      CHECK(x.sigma.rank() == s.rank());
    }
    CHECK_THROWS_AS(normalizeSigma(parseText("2 2 | 1,2,-1 | -2")), Error);
  }

  TEST_CASE("normalization induces an isomorphism of sandwich semigroups") {
    for (auto [m, n] : std::vector<std::pair<uint32_t, uint32_t>>{{4, 4}, {5, 3}, {2, 4}}) {
      auto sig = enumerate(Tag::B, n, m);
      auto hs = std::make_shared<const HomSet>(enumerate(Tag::B, m, n));
      for (int t = 0; t < 4; ++t) {
        const auto& s = testing::pick(sig);
        auto x = normalizeSigma(s);
        auto c = makeContext(Tag::B, m, n, s, hs), d = makeContext(Tag::B, m, n, x.sigma, hs);
        auto phi = [&](const Partition& a) { return compose(compose(x.pi2, a), x.pi1); };
        std::set<Partition> image;
        std::size_t bad = 0;
        for (const auto& a : c.elements()) {
          image.insert(phi(a));
          for (const auto& b : c.elements()) bad += phi(starProduct(c, a, b)) != starProduct(d, phi(a), phi(b));
        }
        CHECK(image.size() == c.size());
        CHECK(bad == 0);
      }
    }
  }

  TEST_CASE("rank-zero one-row cases are left-zero semigroups") {
    for (long q = 1; q <= 3; ++q)
      for (BrauerParams p : {BrauerParams{2 * q, 0, 0}, BrauerParams{2 * q - 1, 1, 1}}) {
        auto c = canonicalContext(p);
        CHECK(Integer(c.size()) == dfact(2 * q - 1));
        for (Index a = 0; a < c.size(); ++a)
          for (Index b = 0; b < c.size(); ++b) CHECK(starIndex(c, a, b) == a);
      }
  }

  TEST_CASE("isomorphism classification agrees with the engine") {
    auto params = paramsUpTo(8);
    std::map<std::size_t, std::vector<std::pair<BrauerParams, FiniteSemigroup<Partition, PartitionHash>>>> bySize;
    for (const auto& p : params) {
      auto c = canonicalContext(p);
      bySize[c.size()].push_back({p, starSemigroup(c)});
    }
    std::size_t compared = 0;
    for (std::size_t i = 0; i < params.size(); ++i)
      for (std::size_t j = i + 1; j < params.size(); ++j) {
        auto a = canonicalContext(params[i]), b = canonicalContext(params[j]);
        if (a.size() != b.size()) {
          CHECK(!isoEquivalent(params[i], params[j]));
          continue;
        }
        const auto& group = bySize[a.size()];
        auto find = [&](const BrauerParams& p) -> const FiniteSemigroup<Partition, PartitionHash>& {
          for (const auto& [q, s] : group)
            if (q == p) return s;
          throw std::logic_error("missing");
        };
        bool engine = isomorphic(find(params[i]), find(params[j]));
        CHECK_MESSAGE(engine == isoEquivalent(params[i], params[j]), params[i].m, params[i].n, params[i].r, " vs ",
                      params[j].m, params[j].n, params[j].r);
        ++compared;
      }
    CHECK(compared > 50);
  }

  TEST_CASE("Reg of a Brauer sandwich is MI-dominated") {
    for (BrauerParams p : {BrauerParams{4, 4, 2}, {4, 2, 2}, {4, 4, 0}, {6, 4, 2}, {5, 3, 1}, {3, 3, 3}}) {
      auto c = canonicalContext(p);
      auto ps = pSets(c);
      auto reg = starSemigroup(c, ps.members());
      auto g = greenStructure(reg);
      CHECK(isMIDominated(reg, g).dominated);
      auto mi = midIdentities(reg);
      for (Index e = 0; e < reg.size(); ++e) {
        if (!g.idempotent[e]) continue;
        bool found = std::any_of(mi.begin(), mi.end(), [&](Index u) { return reg.product(u, e) == e; });
        CHECK(found);
      }
    }
    auto c = makeContext(Tag::P, 3, 3, parseText("3 3 | 1,-1 | 3,-2,-3 | 2"));
    auto reg = starSemigroup(c, pSets(c).members());
    CHECK(!isMIDominated(reg, greenStructure(reg)).dominated);
  }

  TEST_CASE("formulas agree with enumeration") {
    auto rep = verifySuite(8);
    CHECK(rep.allPass());
    CHECK(rep.rows.size() > 100);
    for (const auto& row : rep.rows) CHECK_MESSAGE(row.match, row.formula, " ", row.m, row.n, row.r);
    CHECK(regSize({6, 6, 4}) == 5697);
    CHECK(rep.csv().rfind("tag,m,n,r,formula,bruteforce,match,check\n", 0) == 0);
  }

  TEST_CASE("Reg profile matches the engine") {
    for (BrauerParams p : {BrauerParams{4, 4, 2}, {6, 4, 2}, {6, 2, 2}, {5, 3, 3}, {4, 4, 4}}) {
      auto c = canonicalContext(p);
      auto ps = pSets(c);
      auto g = sandwichGreen(c, ps);
      for (long q = p.r % 2; q <= p.r; q += 2) {
        auto prof = regProfile(p, q);
        std::set<uint32_t> rs, ls, hs, rh, lh;
        std::map<uint32_t, std::size_t> hSize;
        std::size_t size = 0;
        for (Index i : ps.members()) {
          if (long(c.element(i).rank()) != q) continue;
          ++size;
          rs.insert(g.r[i]);
          ls.insert(g.l[i]);
          hs.insert(g.h[i]);
          rh.insert(g.rHat[i]);
          lh.insert(g.lHat[i]);
          ++hSize[g.h[i]];
        }
        CHECK(prof.rClasses == rs.size());
        CHECK(prof.lClasses == ls.size());
        CHECK(prof.hClasses == hs.size());
        CHECK(prof.dSize == size);
        CHECK(prof.rHatClasses == rh.size());
        CHECK(prof.lHatClasses == lh.size());
        CHECK(prof.rHatClasses * prof.rPerRHat == prof.rClasses);
        CHECK(prof.lHatClasses * prof.lPerLHat == prof.lClasses);
        for (const auto& [h, s] : hSize) CHECK(prof.hSize == s);
      }
    }
  }

  TEST_CASE("ranks on small instances") {
    for (auto [p, expected] : std::vector<std::pair<BrauerParams, long>>{{{2, 2, 0}, 2}, {{4, 2, 2}, 6}}) {
      auto c = canonicalContext(p);
      auto s = starSemigroup(c);
      auto g = greenStructure(s);
      auto r = exactRank(s, g);
      CHECK(sandwichRank(p) == expected);
      CHECK(r.rank == std::size_t(expected));
      CHECK(r.rank >= rankLowerBound(g));
    }
    CHECK(sandwichRank({2, 4, 2}) == sandwichRank({4, 2, 2}));
    CHECK(brauerMonoidRank(5) == 3);

    auto p = BrauerParams{4, 4, 2};
    auto c = canonicalContext(p);
    auto ps = pSets(c);
    auto reg = starSemigroup(c, ps.members());
    auto gr = greenStructure(reg);
    CHECK(exactRank(reg, gr).rank == regRank(p));
    CHECK(exactRank(reg, gr).rank >= rankLowerBound(gr));

    auto eg = idempotentGenerated(c, ps, inverseSets(c));
    auto es = starSemigroup(c, eg.closure);
    auto ge = greenStructure(es);
    auto er = eGenRanks(p);
    CHECK(exactRank(es, ge).rank == er.rank);
    CHECK(exactIdempotentRank(es, ge).rank == er.idrank);

    auto I = ideal(c, ps, 0);
    auto is = starSemigroup(c, I);
    auto gi = greenStructure(is);
    CHECK(exactIdempotentRank(is, gi).rank == idealRank(p, 0));
    CHECK(idealRank(p, 0) == 3);
    CHECK_THROWS_AS(idealRank(p, 2), Error);
    CHECK_THROWS_AS(idealRank(p, 1), Error);
  }

  TEST_CASE("factorisation through higher rank") {
    auto p = BrauerParams{6, 4, 2};
    auto c = canonicalContext(p);
    std::size_t tried = 0;
    for (const auto& a : c.elements()) {
      if (a.rank() > 2) continue;
      auto [b, g] = factorThroughHigherRank(a);
      CHECK(b.rank() == a.rank() + 2);
      CHECK(g.rank() == a.rank() + 2);
      CHECK(starProduct(c, b, g) == a);
      ++tried;
    }
    CHECK(tried > 0);
    CHECK_THROWS_AS(factorThroughHigherRank(identity(3)), Error);
  }

  TEST_CASE("isoEquivalent clauses") {
    CHECK(isoEquivalent({1, 1, 1}, {2, 0, 0}));
    CHECK(isoEquivalent({0, 0, 0}, {0, 2, 0}));
    CHECK(isoEquivalent({6, 0, 0}, {5, 1, 1}));
    CHECK(isoEquivalent({0, 4, 0}, {1, 3, 1}));
    CHECK(!isoEquivalent({4, 4, 2}, {4, 4, 0}));
    CHECK(!isoEquivalent({4, 2, 2}, {2, 4, 2}));
  }
}
