#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diagrams.hpp"
#include "numbers.hpp"
#include "semigroups.hpp"

namespace diagramcat {

struct HomSet {
  Tag tag = Tag::P;
  uint32_t m = 0, n = 0;
  std::vector<Partition> elements;  // sorted

  std::size_t size() const noexcept { return elements.size(); }

  std::optional<Index> indexOf(const Partition& p) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), p);
    if (it == elements.end() || *it != p) return std::nullopt;
    return Index(it - elements.begin());
  }
  bool contains(const Partition& p) const { return indexOf(p).has_value(); }
};

inline std::size_t defaultVertexBound(Tag tag) { return (tag == Tag::P || tag == Tag::PB) ? 10 : 14; }

namespace detail {

// Set partitions of the vertices, choosing the block of the least unassigned vertex each time.
inline void enumerateGeneral(Tag tag, uint32_t m, uint32_t n, std::vector<Partition>& out) {
  const std::size_t N = m + n;
  std::vector<int> lab(N, -1);
  std::vector<uint8_t> buf(N);
  int nextLabel = 0;
  std::function<void()> rec;
  std::function<void(std::size_t, std::size_t, int)> extend = [&](std::size_t from, std::size_t size, int b) {
    // decide, for vertices after `from`, whether they join block b
    if (tag == Tag::B && size == 2) {
      rec();
      return;
    }
    if (tag == Tag::PB && size == 2) {
      rec();
      return;
    }
    if (tag != Tag::B) rec();  // close the block here
    for (std::size_t v = from; v < N; ++v) {
      if (lab[v] >= 0) continue;
      lab[v] = b;
      extend(v + 1, size + 1, b);
      lab[v] = -1;
    }
  };
  rec = [&] {
    std::size_t v = 0;
    while (v < N && lab[v] >= 0) ++v;
    if (v == N) {
      for (std::size_t i = 0; i < N; ++i) buf[i] = static_cast<uint8_t>(lab[i]);
      out.push_back(Partition::fromLabels(m, n, buf));
      return;
    }
    int b = nextLabel++;
    lab[v] = b;
    extend(v + 1, 1, b);
    lab[v] = -1;
    --nextLabel;
  };
  rec();
}

// Noncrossing partitions of the cyclic vertex order 1, ..., m, n', ..., 1'. The block of the
// first pending position splits the remaining positions into independent gaps.
inline void enumeratePlanar(Tag tag, uint32_t m, uint32_t n, std::vector<Partition>& out) {
  const std::size_t N = m + n;
  std::vector<std::size_t> vertexAt(N);
  for (std::size_t i = 0; i < m; ++i) vertexAt[i] = i;
  for (std::size_t j = 0; j < n; ++j) vertexAt[m + j] = m + (n - 1 - j);
  std::vector<uint8_t> lab(N);
  int nextLabel = 0;
  const std::size_t maxSize = tag == Tag::PP ? N : 2;
  const std::size_t minSize = tag == Tag::TL ? 2 : 1;
  std::vector<std::vector<std::size_t>> pending;
  std::function<void()> rec = [&] {
    if (pending.empty()) {
      out.push_back(Partition::fromLabels(m, n, lab));
      return;
    }
    auto interval = pending.back();
    pending.pop_back();
    if (interval.empty()) {
      rec();
      pending.push_back(interval);
      return;
    }
    if (tag == Tag::TL && interval.size() % 2 != 0) {
      pending.push_back(interval);
      return;
    }
    const int b = nextLabel++;
    lab[vertexAt[interval[0]]] = static_cast<uint8_t>(b);
    std::vector<std::size_t> chosen;  // indices into interval
    std::function<void(std::size_t)> pick = [&](std::size_t from) {
      const std::size_t size = chosen.size() + 1;
      if (size >= minSize) {
        std::size_t pushed = 0;
        std::size_t prev = 0;
        for (std::size_t c : chosen) {
          pending.emplace_back(interval.begin() + std::ptrdiff_t(prev + 1), interval.begin() + std::ptrdiff_t(c));
          ++pushed;
          prev = c;
        }
        pending.emplace_back(interval.begin() + std::ptrdiff_t(prev + 1), interval.end());
        ++pushed;
        rec();
        for (std::size_t i = 0; i < pushed; ++i) pending.pop_back();
      }
      if (size >= maxSize) return;
      for (std::size_t c = from; c < interval.size(); ++c) {
        if (tag == Tag::TL && (c - (chosen.empty() ? 0 : chosen.back())) % 2 == 0) continue;
        chosen.push_back(c);
        lab[vertexAt[interval[c]]] = static_cast<uint8_t>(b);
        pick(c + 1);
        chosen.pop_back();
      }
    };
    pick(1);
    --nextLabel;
    pending.push_back(interval);
  };
  std::vector<std::size_t> all(N);
  for (std::size_t i = 0; i < N; ++i) all[i] = i;
  pending.push_back(all);
  rec();
}

}  // namespace detail

inline HomSet enumerate(Tag tag, uint32_t m, uint32_t n) {
  if (const char* env = std::getenv("DIAGRAMCAT_MAX_ELEMENTS"); env && *env) {
    if (homsetCardinality(tag, m, n) > Integer(defaultMaxElements()))
      fail(ErrorKind::BoundExceeded, std::string(tagName(tag)) + " hom-set exceeds DIAGRAMCAT_MAX_ELEMENTS");
  } else if (std::size_t(m) + n > defaultVertexBound(tag)) {
    fail(ErrorKind::BoundExceeded, std::string(tagName(tag)) + " enumeration limited to m+n <= " +
                                       std::to_string(defaultVertexBound(tag)));
  }
  HomSet h;
  h.tag = tag;
  h.m = m;
  h.n = n;
  if (hasParityRule(tag) && (m + n) % 2 != 0) return h;
  if (isPlanarTag(tag))
    detail::enumeratePlanar(tag, m, n, h.elements);
  else
    detail::enumerateGeneral(tag, m, n, h.elements);
  std::sort(h.elements.begin(), h.elements.end());
  h.elements.erase(std::unique(h.elements.begin(), h.elements.end()), h.elements.end());
  return h;
}

enum class Rel { R, L, J };

namespace detail {

// Class ids of upper vertices plus, per upper block, whether it is a transversal.
inline std::vector<uint8_t> upperKey(const Partition& a) {
  std::vector<uint8_t> key(a.labels().begin(), a.labels().begin() + a.m());
  uint8_t blocksUp = 0;
  for (uint8_t c : key) blocksUp = std::max<uint8_t>(blocksUp, c + 1);
  std::vector<uint8_t> trans(blocksUp, 0);
  for (std::size_t v = a.m(); v < a.size(); ++v)
    if (a.label(v) < blocksUp) trans[a.label(v)] = 1;
  key.push_back(0xFF);
  key.insert(key.end(), trans.begin(), trans.end());
  return key;
}

// Every ker(fine)-class lies in a ker(coarse)-class.
inline bool kernelContains(const Partition& coarse, const Partition& fine, bool lower) {
  const std::size_t off1 = lower ? coarse.m() : 0, off2 = lower ? fine.m() : 0;
  const std::size_t len = lower ? coarse.n() : coarse.m();
  std::map<uint8_t, uint8_t> rep;
  for (std::size_t i = 0; i < len; ++i) {
    auto [it, fresh] = rep.emplace(fine.label(off2 + i), coarse.label(off1 + i));
    if (!fresh && it->second != coarse.label(off1 + i)) return false;
  }
  return true;
}

inline std::vector<Block> sortedBlocks(std::vector<Block> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace detail

inline bool catLeq(Tag tag, Rel rel, const Partition& a, const Partition& b) {
  if (rel == Rel::J) {
    long ra = long(a.rank()), rb = long(b.rank());
    if (ra > rb) return false;
    return !hasParityRule(tag) || (rb - ra) % 2 == 0;
  }
  const bool lower = rel == Rel::L;
  if (lower ? a.n() != b.n() : a.m() != b.m()) return false;
  if (!detail::kernelContains(a, b, lower)) return false;
  auto sa = statistics(a), sb = statistics(b);
  const auto& na = lower ? sa.lowerNontransversals : sa.upperNontransversals;
  const auto& nb = lower ? sb.lowerNontransversals : sb.upperNontransversals;
  for (const auto& blk : nb)
    if (std::find(na.begin(), na.end(), blk) == na.end()) return false;
  return true;
}

struct CatGreenClasses {
  std::vector<long> ranks;          // ranks present, increasing
  std::vector<uint32_t> r, l, h;    // per-element class ids
  std::vector<long> d;              // per-element rank (D-class label)
  std::size_t numR = 0, numL = 0, numH = 0;
  std::map<long, std::size_t> rPerD, lPerD, dSize;
  std::map<long, std::vector<std::size_t>> hSizes;
};

inline std::vector<uint8_t> rKey(const Partition& a) { return detail::upperKey(a); }
inline std::vector<uint8_t> lKey(const Partition& a) { return detail::upperKey(involution(a)); }

inline CatGreenClasses catGreenClasses(const HomSet& hs) {
  CatGreenClasses c;
  std::map<std::vector<uint8_t>, uint32_t> rk, lk;
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> hk;
  std::map<uint32_t, std::size_t> hCount;
  std::map<long, std::set<uint32_t>> rIn, lIn, hIn;
  for (const auto& a : hs.elements) {
    uint32_t ri = rk.emplace(rKey(a), uint32_t(rk.size())).first->second;
    uint32_t li = lk.emplace(lKey(a), uint32_t(lk.size())).first->second;
    uint32_t hi = hk.emplace(std::make_pair(ri, li), uint32_t(hk.size())).first->second;
    long rank = long(a.rank());
    c.r.push_back(ri);
    c.l.push_back(li);
    c.h.push_back(hi);
    c.d.push_back(rank);
    ++hCount[hi];
    rIn[rank].insert(ri);
    lIn[rank].insert(li);
    hIn[rank].insert(hi);
    ++c.dSize[rank];
  }
  c.numR = rk.size();
  c.numL = lk.size();
  c.numH = hk.size();
  for (auto& [rank, s] : rIn) {
    c.ranks.push_back(rank);
    c.rPerD[rank] = s.size();
    c.lPerD[rank] = lIn[rank].size();
    for (uint32_t hi : hIn[rank]) c.hSizes[rank].push_back(hCount[hi]);
  }
  return c;
}

// Generating set for the monoid K_n, chosen greedily from elements of decreasing rank.
inline std::vector<Partition> monoidGenerators(const HomSet& kn) {
  std::vector<Index> order(kn.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return kn.elements[a].rank() > kn.elements[b].rank(); });
  auto gens = greedyGenerators(kn.size(), order, [&](Index a, Index b) {
    return *kn.indexOf(compose(kn.elements[a], kn.elements[b]));
  });
  std::vector<Partition> out;
  for (Index i : gens) out.push_back(kn.elements[i]);
  return out;
}

// R- and L-classes of a hom-set computed from its definition: SCCs of the right action of K_n
// and of the left action of K_m, both through generating sets.
struct ActionGreen {
  std::vector<uint32_t> r, l;
  std::size_t numR = 0, numL = 0;
};

inline ActionGreen actionGreen(const HomSet& hs, const std::vector<Partition>& genN, const std::vector<Partition>& genM) {
  const uint32_t N = uint32_t(hs.size());
  auto build = [&](const std::vector<Partition>& gens, bool rightAction) {
    std::vector<uint32_t> off(N + 1), tgt;
    tgt.reserve(std::size_t(N) * gens.size());
    for (uint32_t i = 0; i < N; ++i) {
      off[i] = uint32_t(tgt.size());
      for (const auto& g : gens) {
        auto p = rightAction ? compose(hs.elements[i], g) : compose(g, hs.elements[i]);
        tgt.push_back(*hs.indexOf(p));
      }
    }
    off[N] = uint32_t(tgt.size());
    auto scc = tarjan(N, off, tgt);
    std::size_t count;
    std::vector<uint32_t> emit;
    auto ids = detail::canonicalIds(scc, count, emit);
    return std::make_pair(ids, count);
  };
  ActionGreen ag;
  std::tie(ag.r, ag.numR) = build(genN, true);
  std::tie(ag.l, ag.numL) = build(genM, false);
  return ag;
}

}  // namespace diagramcat
