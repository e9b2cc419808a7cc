#include "doctest.h"

#include <array>
#include <functional>
#include <set>

#include "diagramcat/diagrams.hpp"
#include "diagramcat/homsets.hpp"
#include "support.hpp"

using namespace diagramcat;

namespace {

Partition workedAlpha() {
  return makePartition(6, 8, {{1, 4}, {2, 3, -4, -5}, {5, 6}, {-1, -2, -6}, {-3}, {-7, -8}});
}

Partition workedBeta() {
  return makePartition(8, 7, {{1, 2}, {3, 4, -1}, {5, -4, -5}, {6}, {7}, {8, -6, -7}, {-2}, {-3}});
}

ErrorKind kindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_SUITE("diagrams") {
  TEST_CASE("makePartition canonicalizes and validates") {
    auto a = workedAlpha();
    CHECK(a.m() == 6);
    CHECK(a.n() == 8);
    CHECK(a.rank() == 1);
    CHECK(a.blocks() == std::vector<Block>{{1, 4}, {2, 3, -4, -5}, {5, 6}, {-1, -2, -6}, {-3}, {-7, -8}});
    auto shuffled = makePartition(6, 8, {{-8, -7}, {6, 5}, {-3}, {-5, 3, 2, -4}, {4, 1}, {-6, -2, -1}});
    CHECK(shuffled == a);

    auto empty = makePartition(0, 0, {});
    CHECK(empty.size() == 0);
    CHECK(empty.blocks().empty());

    CHECK(kindOf([] { makePartition(2, 2, {{1}, {1}}); }) == ErrorKind::DuplicateVertex);
    CHECK(kindOf([] { makePartition(2, 2, {{1, -1}, {2}}); }) == ErrorKind::MissingVertex);
    CHECK(kindOf([] { makePartition(2, 2, {{1, -1}, {2, -3}, {-2}}); }) == ErrorKind::OutOfRange);
    CHECK(kindOf([] { makePartition(1, 1, {{1, -1}, {0}}); }) == ErrorKind::OutOfRange);
  }

  TEST_CASE("composition reproduces the worked product") {
    auto ab = compose(workedAlpha(), workedBeta());
    auto expected = makePartition(6, 7, {{1, 4}, {2, 3, -1, -4, -5}, {5, 6}, {-2}, {-3}, {-6, -7}});
    CHECK(ab == expected);
    CHECK(kindOf([] { compose(workedBeta(), workedBeta()); }) == ErrorKind::ShapeMismatch);
  }

  TEST_CASE("identity, permutation and involution") {
    auto id3 = identity(3);
    auto p = permutation({1, 2, 0});
    CHECK(compose(id3, p) == p);
    CHECK(compose(p, id3) == p);
    CHECK(compose(p, involution(p)) == id3);
    CHECK(involution(workedAlpha()).m() == 8);
    CHECK(involution(involution(workedAlpha())) == workedAlpha());
    CHECK(identity(0).size() == 0);
  }

  TEST_CASE("text form round-trips") {
    for (uint32_t m = 0; m <= 3; ++m)
      for (uint32_t n = 0; m + n <= 5; ++n)
        for (const auto& a : enumerate(Tag::P, m, n).elements) CHECK(parseText(toText(a)) == a);
    CHECK(toText(workedAlpha()) == "6 8 | 1,4 | 2,3,-4,-5 | 5,6 | -1,-2,-6 | -3 | -7,-8");
    CHECK(kindOf([] { parseText("2 2 | 1,-1 ; 2,-2"); }) == ErrorKind::ParseError);
    CHECK(kindOf([] { parseText("2 x"); }) == ErrorKind::ParseError);
  }

  TEST_CASE("statistics") {
    auto s = statistics(workedAlpha());
    CHECK(s.rank == 1);
    CHECK(s.dom == std::vector<int>{2, 3});
    CHECK(s.codom == std::vector<int>{4, 5});
    CHECK(s.upperNontransversals.size() == 2);
    CHECK(s.lowerNontransversals.size() == 3);
    for (Tag tag : kAllTags)
      for (const auto& a : enumerate(tag, 3, 3).elements) {
        auto st = statistics(a);
        CHECK(st.rank <= 3);
        if (hasParityRule(tag)) CHECK((3 - st.rank) % 2 == 0);
      }
  }

  TEST_CASE("associativity on sampled triples") {
    for (auto [m, n, k, l] : std::vector<std::array<uint32_t, 4>>{{2, 3, 2, 4}, {3, 3, 3, 3}, {4, 2, 3, 1}, {1, 4, 4, 2}}) {
      auto A = enumerate(Tag::P, m, n), B = enumerate(Tag::P, n, k), C = enumerate(Tag::P, k, l);
      for (int t = 0; t < 400; ++t) {
        const auto &a = testing::pick(A), &b = testing::pick(B), &c = testing::pick(C);
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
      }
    }
  }

  TEST_CASE("regular *-category laws on all composable pairs") {
    std::size_t failures = 0;
    for (uint32_t m = 0; m <= 3; ++m)
      for (uint32_t n = 0; n <= 3; ++n)
        for (uint32_t k = 0; k <= 3; ++k) {
          if (m + n > 6 || n + k > 6) continue;
          auto A = enumerate(Tag::P, m, n), B = enumerate(Tag::P, n, k);
          for (const auto& a : A.elements) {
            auto as = involution(a);
            if (involution(as) != a || compose(compose(a, as), a) != a || compose(compose(as, a), as) != as) ++failures;
            if (m + n + k > 6) continue;
            for (const auto& b : B.elements)
              if (involution(compose(a, b)) != compose(involution(b), as)) ++failures;
          }
        }
    CHECK(failures == 0);
  }

  TEST_CASE("subcategories are closed under composition and involution") {
    for (Tag tag : kAllTags)
      for (uint32_t m = 0; m <= 3; ++m)
        for (uint32_t n = 0; n <= 3; ++n) {
          auto A = enumerate(tag, m, n);
          for (const auto& a : A.elements) {
            CHECK(inCategory(tag, a));
            CHECK(inCategory(tag, involution(a)));
          }
          if (A.size() == 0) continue;
          for (uint32_t k = 0; k <= 3; ++k) {
            auto B = enumerate(tag, n, k);
            if (B.size() == 0) continue;
            for (int t = 0; t < 60; ++t) CHECK(inCategory(tag, compose(testing::pick(A), testing::pick(B))));
          }
        }
  }

  TEST_CASE("category membership matches filtering of the partition category") {
    for (uint32_t m = 0; m <= 3; ++m)
      for (uint32_t n = 0; m + n <= 6; ++n) {
        auto all = enumerate(Tag::P, m, n);
        for (Tag tag : kAllTags) {
          std::vector<Partition> filtered;
          for (const auto& a : all.elements)
            if (inCategory(tag, a)) filtered.push_back(a);
          CHECK(filtered == enumerate(tag, m, n).elements);
        }
      }
  }

  TEST_CASE("planar inputs compose to planar outputs") {
    for (uint32_t m = 1; m <= 3; ++m)
      for (uint32_t n = 1; n <= 3; ++n)
        for (uint32_t k = 1; k <= 3; ++k) {
          auto A = enumerate(Tag::PP, m, n), B = enumerate(Tag::PP, n, k);
          for (const auto& a : A.elements)
            for (const auto& b : B.elements) CHECK(isPlanar(compose(a, b)));
        }
  }

  TEST_CASE("planar to Temperley-Lieb doubling") {
    CHECK(ppToTl(identity(1)) == identity(2));
    CHECK(ppToTl(makePartition(0, 0, {})).size() == 0);
    auto nonplanar = makePartition(2, 2, {{1, -2}, {2, -1}});
    CHECK(kindOf([&] { ppToTl(nonplanar); }) == ErrorKind::NotPlanar);

    auto alpha = makePartition(8, 6, {{1, 2, 4, -1, -4}, {3}, {5, 6, 7}, {8, -6}, {-2, -3}, {-5}});
    auto traced = makePartition(16, 12,
                                {{1, -1}, {8, -8}, {15, -11}, {16, -12}, {5, 6}, {2, 3}, {10, 11}, {12, 13}, {4, 7},
                                 {9, 14}, {-2, -7}, {-3, -6}, {-4, -5}, {-9, -10}});
    CHECK(ppToTl(alpha) == traced);
    CHECK(traced.rank() == 2 * alpha.rank());

    for (uint32_t m = 0; m <= 3; ++m)
      for (uint32_t n = 0; n <= 3; ++n) {
        auto pp = enumerate(Tag::PP, m, n);
        std::set<Partition> image;
        for (const auto& a : pp.elements) {
          auto t = ppToTl(a);
          CHECK(t.rank() == 2 * a.rank());
          image.insert(t);
        }
        auto tl = enumerate(Tag::TL, 2 * m, 2 * n);
        CHECK(image.size() == pp.size());
        CHECK(std::vector<Partition>(image.begin(), image.end()) == tl.elements);
      }

    std::size_t failures = 0;
    for (uint32_t m = 0; m <= 3; ++m)
      for (uint32_t n = 0; n <= 3; ++n)
        for (uint32_t k = 0; k <= 3; ++k) {
          if (m + n > 6 || n + k > 6) continue;
          auto A = enumerate(Tag::PP, m, n), B = enumerate(Tag::PP, n, k);
          for (const auto& a : A.elements)
            for (const auto& b : B.elements)
              if (ppToTl(compose(a, b)) != compose(ppToTl(a), ppToTl(b))) ++failures;
        }
    CHECK(failures == 0);
  }

  TEST_CASE("equational Green tests agree with the definitions") {
    for (Tag tag : {Tag::P, Tag::B, Tag::M})
      for (uint32_t m = 0; m <= 3; ++m)
        for (uint32_t n = 0; m + n <= 5; ++n) {
          auto K = enumerate(tag, m, n), Kn = enumerate(tag, n, n);
          for (const auto& b : K.elements) {
            std::set<Partition> below;  // b K_n
            for (const auto& g : Kn.elements) below.insert(compose(b, g));
            auto bb = compose(b, involution(b));
            for (const auto& a : K.elements) {
              auto aa = compose(a, involution(a));
              bool defLeq = below.count(a) > 0;
              CHECK(defLeq == (aa == compose(bb, aa)));
              bool defR = defLeq && std::any_of(Kn.elements.begin(), Kn.elements.end(),
                                                [&](const Partition& g) { return compose(a, g) == b; });
              CHECK(defR == (aa == bb));
            }
          }
        }
  }
}
