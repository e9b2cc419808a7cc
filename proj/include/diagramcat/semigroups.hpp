#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"

namespace diagramcat {

using Index = uint32_t;

inline std::size_t defaultMaxElements() {
  if (const char* env = std::getenv("DIAGRAMCAT_MAX_ELEMENTS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 200000;
}

struct EngineOptions {
  std::size_t maxElements = defaultMaxElements();
  std::size_t tableBudget = std::size_t(1) << 25;
};

// ---------------------------------------------------------------------------
// Strongly connected components and reachability on condensations.

struct SccResult {
  std::vector<uint32_t> comp;  // emission order: every edge between components goes to a smaller id
  uint32_t count = 0;
};

inline SccResult tarjan(uint32_t n, const std::vector<uint32_t>& off, const std::vector<uint32_t>& tgt) {
  SccResult res;
  res.comp.assign(n, UINT32_MAX);
  std::vector<uint32_t> idx(n, UINT32_MAX), low(n, 0), stack;
  std::vector<char> onStack(n, 0);
  std::vector<std::pair<uint32_t, uint32_t>> call;
  uint32_t counter = 0;
  for (uint32_t root = 0; root < n; ++root) {
    if (idx[root] != UINT32_MAX) continue;
    call.push_back({root, off[root]});
    idx[root] = low[root] = counter++;
    stack.push_back(root);
    onStack[root] = 1;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < off[v + 1]) {
        uint32_t w = tgt[e++];
        if (idx[w] == UINT32_MAX) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          onStack[w] = 1;
          call.push_back({w, off[w]});
        } else if (onStack[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
      } else {
        uint32_t vv = v;
        if (low[vv] == idx[vv]) {
          uint32_t w;
          do {
            w = stack.back();
            stack.pop_back();
            onStack[w] = 0;
            res.comp[w] = res.count;
          } while (w != vv);
          ++res.count;
        }
        call.pop_back();
        if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[vv]);
      }
    }
  }
  return res;
}

class Reachability {
 public:
  static constexpr uint32_t kDenseLimit = 12000;

  Reachability() = default;

  Reachability(const SccResult& scc, const std::vector<uint32_t>& off, const std::vector<uint32_t>& tgt)
      : count_(scc.count) {
    succ_.assign(count_, {});
    const uint32_t n = static_cast<uint32_t>(scc.comp.size());
    for (uint32_t u = 0; u < n; ++u)
      for (uint32_t e = off[u]; e < off[u + 1]; ++e) {
        uint32_t a = scc.comp[u], b = scc.comp[tgt[e]];
        if (a != b) succ_[a].push_back(b);
      }
    for (auto& s : succ_) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    if (count_ <= kDenseLimit) {
      words_ = (count_ + 63) / 64;
      bits_.assign(std::size_t(count_) * words_, 0);
      for (uint32_t c = 0; c < count_; ++c) {
        uint64_t* row = &bits_[std::size_t(c) * words_];
        row[c / 64] |= uint64_t(1) << (c % 64);
        for (uint32_t d : succ_[c]) {
          const uint64_t* other = &bits_[std::size_t(d) * words_];
          for (std::size_t w = 0; w < words_; ++w) row[w] |= other[w];
        }
      }
    }
  }

  // True iff `to` is reachable from `from` (reflexive).
  bool reaches(uint32_t from, uint32_t to) const {
    if (from == to) return true;
    if (!bits_.empty()) return (bits_[std::size_t(from) * words_ + to / 64] >> (to % 64)) & 1;
    if (to > from) return false;
    std::vector<char> seen(count_, 0);
    std::vector<uint32_t> st{from};
    seen[from] = 1;
    while (!st.empty()) {
      uint32_t c = st.back();
      st.pop_back();
      for (uint32_t d : succ_[c]) {
        if (d == to) return true;
        if (!seen[d] && d > to) {
          seen[d] = 1;
          st.push_back(d);
        }
      }
    }
    return false;
  }

  const std::vector<uint32_t>& successors(uint32_t c) const { return succ_[c]; }
  uint32_t count() const { return count_; }

 private:
  uint32_t count_ = 0;
  std::size_t words_ = 0;
  std::vector<uint64_t> bits_;
  std::vector<std::vector<uint32_t>> succ_;
};

// ---------------------------------------------------------------------------
// Semigroups referenced by dense indices.

// Greedy generating set: scan candidates in the given order, keeping those outside the closure
// of the ones already kept. `product` returns UINT32_MAX for a product outside the set.
template <class Product>
std::vector<Index> greedyGenerators(std::size_t n, const std::vector<Index>& order, Product&& product,
                                    std::vector<char>* closure = nullptr) {
  std::vector<char> in(n, 0);
  std::vector<Index> members, gens;
  auto extend = [&](Index g) {
    std::size_t oldCount = members.size();
    std::deque<Index> queue;
    auto visit = [&](Index z) {
      if (!in[z]) {
        in[z] = 1;
        members.push_back(z);
        queue.push_back(z);
      }
    };
    gens.push_back(g);
    visit(g);
    for (std::size_t i = 0; i < oldCount; ++i) visit(product(members[i], g));
    while (!queue.empty()) {
      Index z = queue.front();
      queue.pop_front();
      for (Index h : gens) visit(product(z, h));
    }
  };
  for (Index i : order)
    if (!in[i]) extend(i);
  if (closure) *closure = std::move(in);
  return gens;
}

class TableSemigroup {
 public:
  TableSemigroup() = default;

  static TableSemigroup fromTable(const std::vector<std::vector<Index>>& rows) {
    TableSemigroup s;
    s.n_ = rows.size();
    s.table_.resize(s.n_ * s.n_);
    for (std::size_t i = 0; i < s.n_; ++i) {
      if (rows[i].size() != s.n_) fail(ErrorKind::NotClosed, "table row " + std::to_string(i) + " has wrong length");
      for (std::size_t j = 0; j < s.n_; ++j) {
        if (rows[i][j] >= s.n_)
          fail(ErrorKind::NotClosed, "product (" + std::to_string(i) + "," + std::to_string(j) + ") outside the set");
        s.table_[i * s.n_ + j] = rows[i][j];
      }
    }
    s.computeGenerators();
    return s;
  }

  template <class Product>
  static TableSemigroup fromProduct(std::size_t n, Product&& product) {
    TableSemigroup s;
    s.n_ = n;
    s.table_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s.table_[i * n + j] = product(Index(i), Index(j));
    s.computeGenerators();
    return s;
  }

  std::size_t size() const noexcept { return n_; }
  Index product(Index a, Index b) const { return table_[std::size_t(a) * n_ + b]; }
  const std::vector<Index>& generators() const { return gens_; }

  TableSemigroup opposite() const {
    return fromProduct(n_, [&](Index a, Index b) { return product(b, a); });
  }

  std::string toCsv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) os << (j ? "," : "") << table_[i * n_ + j];
      os << "\n";
    }
    return os.str();
  }

 private:
  void computeGenerators() {
    std::vector<Index> order(n_);
    std::iota(order.begin(), order.end(), 0);
    gens_ = greedyGenerators(n_, order, [&](Index a, Index b) { return product(a, b); });
  }

  std::size_t n_ = 0;
  std::vector<Index> table_;
  std::vector<Index> gens_;
};

template <class E, class Hash = std::hash<E>>
class FiniteSemigroup {
 public:
  using Element = E;
  using MulFn = std::function<E(const E&, const E&)>;

  FiniteSemigroup() = default;

  // `generatorOrder` lists indices in the order they are tried when a generating set is chosen.
  static FiniteSemigroup fromMultiplication(std::vector<E> elements, MulFn mul, EngineOptions opts = {},
                                            std::vector<Index> generatorOrder = {}) {
    FiniteSemigroup s;
    s.init(std::move(elements), std::move(mul), opts);
    if (generatorOrder.empty()) {
      generatorOrder.resize(s.size());
      std::iota(generatorOrder.begin(), generatorOrder.end(), 0);
    }
    std::vector<char> in;
    s.gens_ = greedyGenerators(s.size(), generatorOrder, [&](Index a, Index b) { return s.product(a, b); }, &in);
    for (std::size_t i = 0; i < in.size(); ++i)
      if (!in[i]) fail(ErrorKind::NotClosed, "element " + std::to_string(i) + " missing from generator order");
    return s;
  }

  static FiniteSemigroup closure(const std::vector<E>& generators, MulFn mul, EngineOptions opts = {}) {
    std::vector<E> elems;
    std::unordered_map<E, Index, Hash> seen;
    std::vector<Index> gensIdx;
    auto visit = [&](const E& e) -> std::pair<Index, bool> {
      auto [it, fresh] = seen.emplace(e, Index(elems.size()));
      if (fresh) {
        if (elems.size() >= opts.maxElements)
          fail(ErrorKind::BoundExceeded, "closure exceeds " + std::to_string(opts.maxElements) + " elements");
        elems.push_back(e);
      }
      return {it->second, fresh};
    };
    for (const auto& g : generators) {
      auto [i, fresh] = visit(g);
      if (fresh) gensIdx.push_back(i);
    }
    std::vector<E> gensE;
    for (Index i : gensIdx) gensE.push_back(elems[i]);
    for (std::size_t k = 0; k < elems.size(); ++k)
      for (const auto& g : gensE) visit(mul(elems[k], g));
    FiniteSemigroup s;
    s.init(std::move(elems), std::move(mul), opts);
    s.gens_ = gensIdx;
    return s;
  }

  std::size_t size() const noexcept { return elems_.size(); }
  const E& element(Index i) const { return elems_[i]; }
  const std::vector<E>& elements() const { return elems_; }
  const std::vector<Index>& generators() const { return gens_; }
  const MulFn& mulFn() const { return mul_; }

  std::optional<Index> indexOf(const E& e) const {
    auto it = index_->find(e);
    if (it == index_->end()) return std::nullopt;
    return it->second;
  }

  Index product(Index a, Index b) const {
    if (table_) {
      auto& slot = table_[std::size_t(a) * elems_.size() + b];
      Index v = slot.load(std::memory_order_relaxed);
      if (v != UINT32_MAX) return v;
      v = lookup(a, b);
      slot.store(v, std::memory_order_relaxed);
      return v;
    }
    return lookup(a, b);
  }

  // The subsemigroup generated by the given members.
  FiniteSemigroup generatedBy(const std::vector<Index>& members) const {
    std::vector<E> gens;
    for (Index i : members) gens.push_back(elems_[i]);
    return closure(gens, mul_, opts_);
  }

  // Restriction to a subset that must be closed.
  FiniteSemigroup restrictTo(const std::vector<Index>& members) const {
    std::vector<E> sub;
    for (Index i : members) sub.push_back(elems_[i]);
    return fromMultiplication(std::move(sub), mul_, opts_);
  }

  FiniteSemigroup opposite() const {
    MulFn m = mul_;
    return fromMultiplication(elems_, [m](const E& a, const E& b) { return m(b, a); }, opts_);
  }

  TableSemigroup toTable() const {
    return TableSemigroup::fromProduct(size(), [&](Index a, Index b) { return product(a, b); });
  }

  // Exhaustive for small semigroups, sampled triples otherwise.
  bool isAssociative(std::size_t samples = 20000, uint64_t seed = 1) const {
    const std::size_t n = size();
    if (n <= 300 && n * n * n <= 27000000) {
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) {
          Index ab = product(a, b);
          for (Index c = 0; c < n; ++c)
            if (product(ab, c) != product(a, product(b, c))) return false;
        }
      return true;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> pick(0, Index(n - 1));
    for (std::size_t t = 0; t < samples; ++t) {
      Index a = pick(rng), b = pick(rng), c = pick(rng);
      if (product(product(a, b), c) != product(a, product(b, c))) return false;
    }
    return true;
  }

 private:
  void init(std::vector<E> elements, MulFn mul, EngineOptions opts) {
    if (elements.size() > opts.maxElements)
      fail(ErrorKind::BoundExceeded, std::to_string(elements.size()) + " elements exceed the engine bound");
    opts_ = opts;
    elems_ = std::move(elements);
    mul_ = std::move(mul);
    index_ = std::make_shared<std::unordered_map<E, Index, Hash>>();
    index_->reserve(elems_.size());
    for (std::size_t i = 0; i < elems_.size(); ++i)
      if (!index_->emplace(elems_[i], Index(i)).second)
        fail(ErrorKind::ArgOutOfRange, "duplicate element at position " + std::to_string(i));
    const std::size_t cells = elems_.size() * elems_.size();
    if (cells > 0 && cells <= opts.tableBudget) {
      table_ = std::shared_ptr<std::atomic<Index>[]>(new std::atomic<Index>[cells]);
      for (std::size_t i = 0; i < cells; ++i) table_[i].store(UINT32_MAX, std::memory_order_relaxed);
    }
  }

  Index lookup(Index a, Index b) const {
    auto it = index_->find(mul_(elems_[a], elems_[b]));
    if (it == index_->end())
      fail(ErrorKind::NotClosed, "product of elements " + std::to_string(a) + " and " + std::to_string(b));
    return it->second;
  }

  EngineOptions opts_;
  std::vector<E> elems_;
  MulFn mul_;
  std::shared_ptr<std::unordered_map<E, Index, Hash>> index_;
  std::shared_ptr<std::atomic<Index>[]> table_;
  std::vector<Index> gens_;
};

// ---------------------------------------------------------------------------
// Green's structure.

struct GreenStructure {
  std::size_t n = 0;
  std::vector<Index> gens;
  std::vector<Index> right, left;  // Cayley graphs: right[i*k+j] = i*gens[j], left[i*k+j] = gens[j]*i
  std::vector<uint32_t> r, l, h, d;
  std::size_t numR = 0, numL = 0, numH = 0, numD = 0;
  std::vector<std::vector<Index>> rMembers, lMembers, hMembers, dMembers;
  std::vector<char> idempotent;
  std::vector<char> dRegular;
  std::vector<uint32_t> dOrder;  // maximal classes first

  bool leqR(Index x, Index y) const { return x == y || rReach_.reaches(rEmit_[r[y]], rEmit_[r[x]]); }
  bool leqL(Index x, Index y) const { return x == y || lReach_.reaches(lEmit_[l[y]], lEmit_[l[x]]); }
  bool leqJ(Index x, Index y) const { return dLeq(d[x], d[y]); }
  bool leqH(Index x, Index y) const { return leqR(x, y) && leqL(x, y); }
  // D-class a lies below D-class b.
  bool dLeq(uint32_t a, uint32_t b) const { return dReach_.reaches(dEmit_[b], dEmit_[a]); }

  bool isMaximalD(uint32_t c) const {
    for (uint32_t o = 0; o < numD; ++o)
      if (o != c && dLeq(c, o)) return false;
    return true;
  }

  std::vector<uint32_t> maximalD() const {
    std::vector<uint32_t> out;
    for (uint32_t c : dOrder)
      if (isMaximalD(c)) out.push_back(c);
    return out;
  }

  // Covering pairs (upper, lower) of the J-order on D-classes.
  std::vector<std::pair<uint32_t, uint32_t>> dCovers() const {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    for (uint32_t a : dOrder)
      for (uint32_t b : dOrder) {
        if (a == b || !dLeq(b, a)) continue;
        bool cover = true;
        for (uint32_t c = 0; c < numD && cover; ++c)
          if (c != a && c != b && dLeq(b, c) && dLeq(c, a)) cover = false;
        if (cover) out.push_back({a, b});
      }
    return out;
  }

  bool isRegular() const {
    return std::all_of(dRegular.begin(), dRegular.end(), [](char c) { return c != 0; });
  }

  std::size_t rClassesIn(uint32_t dc) const { return countDistinct(dc, r); }
  std::size_t lClassesIn(uint32_t dc) const { return countDistinct(dc, l); }

  std::size_t countDistinct(uint32_t dc, const std::vector<uint32_t>& ids) const {
    std::vector<uint32_t> v;
    for (Index x : dMembers[dc]) v.push_back(ids[x]);
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
  }

  Reachability rReach_, lReach_, dReach_;
  std::vector<uint32_t> rEmit_, lEmit_, dEmit_;  // canonical id -> emission id
};

namespace detail {

// Renumber SCC ids by first occurrence so class ids do not depend on traversal order.
inline std::vector<uint32_t> canonicalIds(const SccResult& scc, std::size_t& count, std::vector<uint32_t>& emit) {
  std::vector<uint32_t> map(scc.count, UINT32_MAX), out(scc.comp.size());
  emit.assign(scc.count, 0);
  uint32_t next = 0;
  for (std::size_t i = 0; i < scc.comp.size(); ++i) {
    uint32_t c = scc.comp[i];
    if (map[c] == UINT32_MAX) {
      map[c] = next;
      emit[next] = c;
      ++next;
    }
    out[i] = map[c];
  }
  count = next;
  return out;
}

inline std::vector<std::vector<Index>> membersOf(const std::vector<uint32_t>& ids, std::size_t count) {
  std::vector<std::vector<Index>> out(count);
  for (std::size_t i = 0; i < ids.size(); ++i) out[ids[i]].push_back(Index(i));
  return out;
}

}  // namespace detail

template <class S>
GreenStructure greenStructure(const S& s) {
  GreenStructure g;
  const std::size_t n = s.size();
  g.n = n;
  g.gens = s.generators();
  const std::size_t k = g.gens.size();
  g.right.resize(n * k);
  g.left.resize(n * k);
  for (Index i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      g.right[i * k + j] = s.product(i, g.gens[j]);
      g.left[i * k + j] = s.product(g.gens[j], i);
    }
  std::vector<uint32_t> offK(n + 1), off2K(n + 1), both(n * 2 * k);
  for (std::size_t i = 0; i <= n; ++i) {
    offK[i] = uint32_t(i * k);
    off2K[i] = uint32_t(i * 2 * k);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      both[i * 2 * k + j] = g.right[i * k + j];
      both[i * 2 * k + k + j] = g.left[i * k + j];
    }
  auto rs = tarjan(uint32_t(n), offK, g.right);
  auto ls = tarjan(uint32_t(n), offK, g.left);
  auto ds = tarjan(uint32_t(n), off2K, both);
  g.r = detail::canonicalIds(rs, g.numR, g.rEmit_);
  g.l = detail::canonicalIds(ls, g.numL, g.lEmit_);
  g.d = detail::canonicalIds(ds, g.numD, g.dEmit_);
  g.rReach_ = Reachability(rs, offK, g.right);
  g.lReach_ = Reachability(ls, offK, g.left);
  g.dReach_ = Reachability(ds, off2K, both);
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> hIds;
  g.h.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = hIds.emplace(std::make_pair(g.r[i], g.l[i]), uint32_t(hIds.size()));
    g.h[i] = it->second;
  }
  g.numH = hIds.size();
  g.rMembers = detail::membersOf(g.r, g.numR);
  g.lMembers = detail::membersOf(g.l, g.numL);
  g.hMembers = detail::membersOf(g.h, g.numH);
  g.dMembers = detail::membersOf(g.d, g.numD);
  g.idempotent.assign(n, 0);
  g.dRegular.assign(g.numD, 0);
  for (Index i = 0; i < n; ++i)
    if (s.product(i, i) == i) {
      g.idempotent[i] = 1;
      g.dRegular[g.d[i]] = 1;
    }
  // Order D-classes by longest distance from a maximal class, then by least member.
  std::vector<uint32_t> depth(g.numD, 0), canonOfEmit(g.numD);
  for (uint32_t c = 0; c < g.numD; ++c) canonOfEmit[g.dEmit_[c]] = c;
  for (uint32_t e = g.numD; e-- > 0;)
    for (uint32_t f : g.dReach_.successors(e)) {
      uint32_t a = canonOfEmit[e], b = canonOfEmit[f];
      depth[b] = std::max(depth[b], depth[a] + 1);
    }
  g.dOrder.resize(g.numD);
  std::iota(g.dOrder.begin(), g.dOrder.end(), 0);
  std::stable_sort(g.dOrder.begin(), g.dOrder.end(), [&](uint32_t a, uint32_t b) { return depth[a] < depth[b]; });
  return g;
}

template <class S>
std::vector<Index> idempotents(const S& s) {
  std::vector<Index> out;
  for (Index i = 0; i < s.size(); ++i)
    if (s.product(i, i) == i) out.push_back(i);
  return out;
}

// Index-level closure of a subset inside s.
template <class S>
std::vector<Index> generatedSubset(const S& s, const std::vector<Index>& gens) {
  std::vector<char> in(s.size(), 0);
  std::vector<Index> out;
  std::vector<Index> g;
  for (Index x : gens)
    if (!in[x]) {
      in[x] = 1;
      out.push_back(x);
      g.push_back(x);
    }
  for (std::size_t k = 0; k < out.size(); ++k)
    for (Index y : g) {
      Index z = s.product(out[k], y);
      if (!in[z]) {
        in[z] = 1;
        out.push_back(z);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

template <class E, class H>
FiniteSemigroup<E, H> idempotentClosure(const FiniteSemigroup<E, H>& s) {
  return s.generatedBy(idempotents(s));
}

// u is a mid-identity iff g u h = g h for all generators g, h.
template <class S>
std::vector<Index> midIdentities(const S& s) {
  std::vector<Index> out;
  const auto& G = s.generators();
  for (Index u = 0; u < s.size(); ++u) {
    bool ok = true;
    for (Index a : G) {
      Index au = s.product(a, u);
      for (Index b : G)
        if (s.product(au, b) != s.product(a, b)) {
          ok = false;
          break;
        }
      if (!ok) break;
    }
    if (ok) out.push_back(u);
  }
  return out;
}

// u such that the variant with x *u y = xuy is regular.
template <class S>
std::vector<Index> regularityPreserving(const S& s, std::size_t bound = 400) {
  const std::size_t n = s.size();
  if (n > bound) fail(ErrorKind::BoundExceeded, "regularityPreserving limited to " + std::to_string(bound) + " elements");
  std::vector<Index> out;
  for (Index u = 0; u < n; ++u) {
    bool regular = true;
    for (Index x = 0; x < n && regular; ++x) {
      Index xu = s.product(x, u), ux = s.product(u, x);
      bool found = false;
      for (Index y = 0; y < n && !found; ++y) found = s.product(s.product(xu, y), ux) == x;
      regular = found;
    }
    if (regular) out.push_back(u);
  }
  return out;
}

template <class S>
bool naturalOrderBelow(const S& s, Index e, Index f) {
  return s.product(e, f) == e && s.product(f, e) == e;
}

struct DominationResult {
  bool dominated = true;
  std::optional<Index> witness;
};

template <class S>
DominationResult isMIDominated(const S& s, const GreenStructure& g) {
  if (!g.isRegular()) fail(ErrorKind::NotRegular, "MI-domination requires a regular semigroup");
  auto mi = midIdentities(s);
  DominationResult res;
  for (Index e = 0; e < s.size(); ++e) {
    if (!g.idempotent[e]) continue;
    bool below = std::any_of(mi.begin(), mi.end(), [&](Index u) { return naturalOrderBelow(s, e, u); });
    if (!below) {
      res.dominated = false;
      res.witness = e;
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Eggbox diagrams.

struct EggboxCell {
  std::vector<Index> elements;
  bool group = false;
};

struct EggboxClass {
  uint32_t dId = 0;
  std::vector<uint32_t> rows;  // R-class ids
  std::vector<uint32_t> cols;  // L-class ids
  std::vector<std::vector<EggboxCell>> grid;
  bool regular = false;
  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& row : grid)
      for (const auto& c : row) s += c.elements.size();
    return s;
  }
};

struct EggboxStructure {
  std::vector<EggboxClass> classes;                   // ordered by the J-order, maximal first
  std::vector<std::pair<std::size_t, std::size_t>> covers;  // positions in `classes`
};

inline EggboxStructure eggbox(const GreenStructure& g) {
  EggboxStructure E;
  std::vector<std::size_t> pos(g.numD);
  for (uint32_t dc : g.dOrder) {
    EggboxClass c;
    c.dId = dc;
    c.regular = g.dRegular[dc];
    for (Index x : g.dMembers[dc]) {
      if (std::find(c.rows.begin(), c.rows.end(), g.r[x]) == c.rows.end()) c.rows.push_back(g.r[x]);
      if (std::find(c.cols.begin(), c.cols.end(), g.l[x]) == c.cols.end()) c.cols.push_back(g.l[x]);
    }
    c.grid.assign(c.rows.size(), std::vector<EggboxCell>(c.cols.size()));
    for (Index x : g.dMembers[dc]) {
      auto ri = std::find(c.rows.begin(), c.rows.end(), g.r[x]) - c.rows.begin();
      auto li = std::find(c.cols.begin(), c.cols.end(), g.l[x]) - c.cols.begin();
      auto& cell = c.grid[ri][li];
      cell.elements.push_back(x);
      if (g.idempotent[x]) cell.group = true;
    }
    pos[dc] = E.classes.size();
    E.classes.push_back(std::move(c));
  }
  for (auto [a, b] : g.dCovers()) E.covers.push_back({pos[a], pos[b]});
  return E;
}

namespace detail {
inline std::string htmlEscape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}
}  // namespace detail

struct DotOptions {
  std::function<std::string(Index)> elementLabel;  // cell text lists elements when set, else the cell size
  std::function<std::string(const EggboxClass&)> classLabel;  // defaults to D<position>
  std::string graphName = "eggbox";
};

inline std::string eggboxDot(const EggboxStructure& E, const DotOptions& opts = {}) {
  std::ostringstream os;
  os << "digraph " << opts.graphName << " {\n";
  os << "  node [shape=plaintext];\n";
  for (std::size_t i = 0; i < E.classes.size(); ++i) {
    const auto& c = E.classes[i];
    std::string label = opts.classLabel ? opts.classLabel(c) : "D" + std::to_string(i);
    os << "  subgraph cluster_D" << i << " {\n";
    os << "    label=\"" << label << "\";\n";
    os << "    D" << i << " [label=<<TABLE BORDER=\"0\" CELLBORDER=\"1\" CELLSPACING=\"0\">";
    for (std::size_t r = 0; r < c.grid.size(); ++r) {
      os << "<TR>";
      for (std::size_t l = 0; l < c.grid[r].size(); ++l) {
        const auto& cell = c.grid[r][l];
        os << "<TD PORT=\"H_" << r << "_" << l << "\"";
        if (cell.group) os << " BGCOLOR=\"#cccccc\"";
        os << ">";
        if (opts.elementLabel) {
          for (std::size_t k = 0; k < cell.elements.size(); ++k)
            os << (k ? "<BR/>" : "") << detail::htmlEscape(opts.elementLabel(cell.elements[k]));
        } else {
          os << cell.elements.size();
        }
        os << "</TD>";
      }
      os << "</TR>";
    }
    os << "</TABLE>>];\n";
    os << "  }\n";
  }
  for (auto [a, b] : E.covers) os << "  D" << a << " -> D" << b << ";\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Exact rank.

struct RankResult {
  std::size_t rank = 0;
  std::vector<Index> generators;
  std::size_t lowerBound = 0;
};

// Sum over maximal J-classes of max(|J/R|, |J/L|).
inline std::size_t rankLowerBound(const GreenStructure& g) {
  std::size_t lb = 0;
  for (uint32_t c : g.maximalD()) lb += std::max(g.rClassesIn(c), g.lClassesIn(c));
  return lb;
}

namespace detail {

// A generating set meets each J-class J in a set Y with J inside <Y ∪ above(J)>, and these
// conditions are independent across classes; so the rank is a sum of per-class minima.
template <class S>
RankResult exactRankSearch(const S& s, const GreenStructure& g, const std::vector<Index>& mustInclude, bool idemOnly,
                           std::size_t nodeBudget) {
  const std::size_t n = s.size();
  const std::size_t k = g.gens.size();
  RankResult res;
  res.lowerBound = rankLowerBound(g);
  std::vector<char> coveredR(g.numR, 0), coveredL(g.numL, 0);
  for (Index i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      Index x = g.right[i * k + j];
      if (g.d[x] != g.d[i]) coveredR[g.r[x]] = 1;
      x = g.left[i * k + j];
      if (g.d[x] != g.d[i]) coveredL[g.l[x]] = 1;
    }
  std::vector<char> must(n, 0);
  for (Index x : mustInclude) must[x] = 1;

  std::vector<Index> gen;
  std::vector<char> inCl(n, 0);
  std::vector<Index> clList;
  auto addGenerators = [&](const std::vector<Index>& ys) {
    std::size_t old = clList.size();
    std::deque<Index> queue;
    auto visit = [&](Index z) {
      if (!inCl[z]) {
        inCl[z] = 1;
        clList.push_back(z);
        queue.push_back(z);
      }
    };
    for (Index y : ys) gen.push_back(y);
    for (Index y : ys) visit(y);
    for (std::size_t i = 0; i < old; ++i)
      for (Index y : ys) visit(s.product(clList[i], y));
    while (!queue.empty()) {
      Index z = queue.front();
      queue.pop_front();
      for (Index h : gen) visit(s.product(z, h));
    }
  };

  std::vector<int32_t> local(n, -1);
  std::mt19937 rng(20240917);
  std::size_t nodes = 0;
  for (uint32_t D : g.dOrder) {
    const auto& members = g.dMembers[D];
    if (std::all_of(members.begin(), members.end(), [&](Index x) { return inCl[x] != 0; })) continue;
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = int32_t(i);
    std::vector<Index> above;
    for (Index y : gen)
      if (g.d[y] != D && g.dLeq(D, g.d[y])) above.push_back(y);

    std::vector<Index> cand;
    for (Index x : members)
      if (!idemOnly || g.idempotent[x]) cand.push_back(x);
    std::shuffle(cand.begin(), cand.end(), rng);
    std::stable_sort(cand.begin(), cand.end(), [&](Index a, Index b) { return must[a] > must[b]; });

    std::map<uint32_t, int> rSlot, lSlot;  // uncovered classes of D -> slot
    for (Index x : members) {
      if (!coveredR[g.r[x]]) rSlot.emplace(g.r[x], int(rSlot.size()));
      if (!coveredL[g.l[x]]) lSlot.emplace(g.l[x], int(lSlot.size()));
    }
    std::vector<std::vector<Index>> rCand(rSlot.size()), lCand(lSlot.size());
    for (Index x : cand) {
      if (auto it = rSlot.find(g.r[x]); it != rSlot.end()) rCand[it->second].push_back(x);
      if (auto it = lSlot.find(g.l[x]); it != lSlot.end()) lCand[it->second].push_back(x);
    }
    for (const auto& v : rCand)
      if (v.empty()) fail(ErrorKind::NotIdempotentGenerated, "an R-class without idempotents needs a generator");
    for (const auto& v : lCand)
      if (v.empty()) fail(ErrorKind::NotIdempotentGenerated, "an L-class without idempotents needs a generator");

    std::vector<char> inJ(members.size());
    auto closeJ = [&](const std::vector<Index>& Y) {
      std::fill(inJ.begin(), inJ.end(), 0);
      std::vector<Index> queue;
      auto visit = [&](Index z) {
        if (g.d[z] != D) return;
        auto li = std::size_t(local[z]);
        if (!inJ[li]) {
          inJ[li] = 1;
          queue.push_back(z);
        }
      };
      for (Index x : members)
        if (inCl[x]) visit(x);
      for (Index y : Y) visit(y);
      for (std::size_t q = 0; q < queue.size(); ++q) {
        Index x = queue[q];
        for (Index a : above) {
          visit(s.product(x, a));
          visit(s.product(a, x));
        }
        for (Index y : Y) visit(s.product(x, y));
      }
      return queue.size();
    };

    std::vector<Index> Y;
    std::vector<int> hitR(rSlot.size(), 0), hitL(lSlot.size(), 0);
    std::vector<std::size_t> candPos(n, 0);
    for (std::size_t i = 0; i < cand.size(); ++i) candPos[cand[i]] = i;
    auto push = [&](Index x) {
      Y.push_back(x);
      if (auto it = rSlot.find(g.r[x]); it != rSlot.end()) ++hitR[it->second];
      if (auto it = lSlot.find(g.l[x]); it != lSlot.end()) ++hitL[it->second];
    };
    auto pop = [&] {
      Index x = Y.back();
      Y.pop_back();
      if (auto it = rSlot.find(g.r[x]); it != rSlot.end()) --hitR[it->second];
      if (auto it = lSlot.find(g.l[x]); it != lSlot.end()) --hitL[it->second];
    };

    std::function<bool(std::size_t, std::ptrdiff_t)> dfs = [&](std::size_t target, std::ptrdiff_t lastFree) -> bool {
      if (++nodes > nodeBudget) fail(ErrorKind::BoundExceeded, "rank search exceeded its node budget");
      if (closeJ(Y) == members.size()) return true;
      if (Y.size() >= target) return false;
      std::size_t rem = target - Y.size();
      std::size_t needR = std::count(hitR.begin(), hitR.end(), 0);
      std::size_t needL = std::count(hitL.begin(), hitL.end(), 0);
      if (std::max(needR, needL) > rem) return false;
      std::vector<char> closed(inJ.begin(), inJ.end());
      auto fresh = [&](Index x) { return !closed[std::size_t(local[x])]; };
      auto branch = [&](const std::vector<std::vector<Index>>& pools, const std::vector<int>& hits,
                        const std::map<uint32_t, int>& otherSlot, const std::vector<int>& otherHits,
                        const std::vector<uint32_t>& otherIds) {
        int best = -1;
        std::size_t bestCount = SIZE_MAX;
        for (std::size_t i = 0; i < pools.size(); ++i) {
          if (hits[i]) continue;
          std::size_t c = std::count_if(pools[i].begin(), pools[i].end(), fresh);
          if (c < bestCount) {
            bestCount = c;
            best = int(i);
          }
        }
        std::vector<Index> opts;
        for (Index x : pools[std::size_t(best)])
          if (fresh(x)) opts.push_back(x);
        std::stable_partition(opts.begin(), opts.end(), [&](Index x) {
          auto it = otherSlot.find(otherIds[x]);
          return it != otherSlot.end() && otherHits[it->second] == 0;
        });
        for (Index x : opts) {
          push(x);
          if (dfs(target, lastFree)) return true;
          pop();
        }
        return false;
      };
      if (needR > 0) return branch(rCand, hitR, lSlot, hitL, g.l);
      if (needL > 0) return branch(lCand, hitL, rSlot, hitR, g.r);
      for (std::size_t i = std::size_t(lastFree + 1); i < cand.size(); ++i) {
        if (!fresh(cand[i])) continue;
        push(cand[i]);
        if (dfs(target, std::ptrdiff_t(i))) return true;
        pop();
      }
      return false;
    };

    for (Index x : cand)
      if (must[x]) push(x);
    std::size_t lb = std::max({rSlot.size(), lSlot.size(), std::size_t(1), Y.size()});
    bool found = false;
    for (std::size_t target = lb; target <= cand.size() && !found; ++target) found = dfs(target, -1);
    if (!found) {
      if (idemOnly) fail(ErrorKind::NotIdempotentGenerated, "a J-class is not generated by idempotents");
      fail(ErrorKind::NotClosed, "rank search failed to generate a J-class");
    }
    addGenerators(Y);
    for (Index x : members) local[x] = -1;
  }
  res.generators = gen;
  res.rank = gen.size();
  return res;
}

}  // namespace detail

template <class S>
RankResult exactRank(const S& s, const GreenStructure& g, const std::vector<Index>& mustInclude = {},
                     std::size_t nodeBudget = 200000) {
  if (s.size() > 20000) fail(ErrorKind::BoundExceeded, "exactRank limited to 20000 elements");
  return detail::exactRankSearch(s, g, mustInclude, false, nodeBudget);
}

template <class S>
RankResult exactIdempotentRank(const S& s, const GreenStructure& g, std::size_t nodeBudget = 200000) {
  if (s.size() > 20000) fail(ErrorKind::BoundExceeded, "exactIdempotentRank limited to 20000 elements");
  std::vector<Index> E;
  for (Index i = 0; i < s.size(); ++i)
    if (g.idempotent[i]) E.push_back(i);
  if (generatedSubset(s, E).size() != s.size())
    fail(ErrorKind::NotIdempotentGenerated, "the semigroup is not generated by its idempotents");
  return detail::exactRankSearch(s, g, {}, true, nodeBudget);
}

// ---------------------------------------------------------------------------
// Isomorphism.

enum class IsoMode { Iso, AntiIso };

namespace detail {

inline std::vector<uint64_t> elementColours(const TableSemigroup& s) {
  auto g = greenStructure(s);
  const std::size_t n = s.size();
  std::vector<uint64_t> col(n);
  auto mix = [](uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  };
  for (Index x = 0; x < n; ++x) {
    uint32_t dc = g.d[x];
    std::size_t dIdem = 0;
    for (Index y : g.dMembers[dc]) dIdem += g.idempotent[y];
    std::size_t above = 0, below = 0;
    for (uint32_t o = 0; o < g.numD; ++o) {
      if (o == dc) continue;
      if (g.dLeq(dc, o)) ++above;
      if (g.dLeq(o, dc)) ++below;
    }
    // index and period of x
    std::vector<Index> powers{x};
    std::map<Index, std::size_t> seen{{x, 0}};
    std::size_t index = 0, period = 0;
    while (true) {
      Index nx = s.product(powers.back(), x);
      if (auto it = seen.find(nx); it != seen.end()) {
        index = it->second;
        period = powers.size() - it->second;
        break;
      }
      seen[nx] = powers.size();
      powers.push_back(nx);
    }
    uint64_t h = 1;
    for (uint64_t v : {uint64_t(g.idempotent[x]), uint64_t(g.dMembers[dc].size()), uint64_t(g.rClassesIn(dc)),
                       uint64_t(g.lClassesIn(dc)), uint64_t(g.hMembers[g.h[x]].size()), uint64_t(dIdem),
                       uint64_t(above), uint64_t(below), uint64_t(index), uint64_t(period),
                       uint64_t(g.rMembers[g.r[x]].size()), uint64_t(g.lMembers[g.l[x]].size())})
      h = mix(h, v);
    col[x] = h;
  }
  return col;
}

inline void refineColours(const TableSemigroup& s, std::vector<uint64_t>& col, int rounds) {
  const std::size_t n = s.size();
  for (int round = 0; round < rounds; ++round) {
    std::vector<uint64_t> next(n);
    for (Index x = 0; x < n; ++x) {
      std::vector<uint64_t> sig;
      sig.reserve(n);
      for (Index y = 0; y < n; ++y)
        sig.push_back(col[y] * 1000003ull ^ (col[s.product(x, y)] * 998244353ull) ^ (col[s.product(y, x)] << 1));
      std::sort(sig.begin(), sig.end());
      uint64_t h = col[x];
      for (uint64_t v : sig) h = (h ^ v) * 1099511628211ull;
      next[x] = h;
    }
    col.swap(next);
  }
}

inline bool tablesIsomorphic(const TableSemigroup& a, const TableSemigroup& b) {
  const std::size_t n = a.size();
  if (n != b.size()) return false;
  if (n == 0) return true;
  auto ca = elementColours(a), cb = elementColours(b);
  refineColours(a, ca, 2);
  refineColours(b, cb, 2);
  {
    auto sa = ca, sb = cb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::map<uint64_t, std::size_t> freq;
  for (auto c : ca) ++freq[c];
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return freq[ca[x]] < freq[ca[y]]; });
  auto gens = greedyGenerators(n, order, [&](Index x, Index y) { return a.product(x, y); });

  std::vector<Index> image(gens.size());
  std::function<bool(std::size_t)> dfs = [&](std::size_t level) -> bool {
    // Extend the map over the closure of the assigned generators, checking consistency.
    std::vector<Index> f(n, UINT32_MAX);
    std::vector<char> used(n, 0);
    std::vector<Index> known;
    auto assign = [&](Index x, Index y) {
      if (f[x] != UINT32_MAX) return f[x] == y;
      if (used[y] || ca[x] != cb[y]) return false;
      f[x] = y;
      used[y] = 1;
      known.push_back(x);
      return true;
    };
    for (std::size_t i = 0; i < level; ++i)
      if (!assign(gens[i], image[i])) return false;
    for (std::size_t q = 0; q < known.size(); ++q)
      for (std::size_t i = 0; i < level; ++i)
        if (!assign(a.product(known[q], gens[i]), b.product(f[known[q]], image[i]))) return false;
    if (level == gens.size()) return known.size() == n;
    for (Index y = 0; y < n; ++y) {
      if (used[y] || cb[y] != ca[gens[level]]) continue;
      image[level] = y;
      if (dfs(level + 1)) return true;
    }
    return false;
  };
  return dfs(0);
}

}  // namespace detail

template <class S, class T>
bool isomorphic(const S& s, const T& t, IsoMode mode = IsoMode::Iso, std::size_t bound = 500) {
  if (s.size() != t.size()) return false;
  if (s.size() > bound) fail(ErrorKind::BoundExceeded, "isomorphism test limited to " + std::to_string(bound) + " elements");
  auto a = TableSemigroup::fromProduct(s.size(), [&](Index x, Index y) { return s.product(x, y); });
  auto b = TableSemigroup::fromProduct(t.size(), [&](Index x, Index y) {
    return mode == IsoMode::Iso ? t.product(x, y) : t.product(y, x);
  });
  return detail::tablesIsomorphic(a, b);
}

}  // namespace diagramcat
