#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diagrams.hpp"
#include "homsets.hpp"
#include "numbers.hpp"
#include "semigroups.hpp"

namespace diagramcat {

// K_mn under a ⋆ b = a σ b, with σ ∈ K_nm.
struct SandwichContext {
  Tag tag = Tag::P;
  uint32_t m = 0, n = 0;
  Partition sigma;
  Partition sigmaStar;
  long r = 0;
  Partition tau;       // in K_rn, transversals ordered by least upper vertex
  Partition tauSigma;  // τσ, reused by psi
  std::shared_ptr<const HomSet> homset;
  std::vector<long> Q;  // admissible ranks of Reg, increasing

  const std::vector<Partition>& elements() const { return homset->elements; }
  std::size_t size() const { return homset->size(); }
  const Partition& element(Index i) const { return homset->elements[i]; }
  Index indexOf(const Partition& p) const {
    auto i = homset->indexOf(p);
    if (!i) fail(ErrorKind::ShapeMismatch, "partition is not in the hom-set: " + toText(p));
    return *i;
  }
};

namespace detail {

inline Partition buildTau(const Partition& sigma, long r) {
  const uint32_t n = sigma.m();
  std::vector<Block> trans, ups;
  for (const auto& blk : sigma.blocks()) {
    Block up;
    bool lower = false;
    for (int v : blk) (v > 0 ? up.push_back(v) : void(lower = true));
    if (up.empty()) continue;
    (lower ? trans : ups).push_back(up);
  }
  std::vector<uint8_t> lab(std::size_t(r) + n);
  for (long i = 0; i < r; ++i) lab[std::size_t(i)] = uint8_t(i);
  for (std::size_t i = 0; i < trans.size(); ++i)
    for (int v : trans[i]) lab[std::size_t(r) + std::size_t(v - 1)] = uint8_t(i);
  for (std::size_t j = 0; j < ups.size(); ++j)
    for (int v : ups[j]) lab[std::size_t(r) + std::size_t(v - 1)] = uint8_t(std::size_t(r) + j);
  return Partition::fromLabels(uint32_t(r), n, lab);
}

}  // namespace detail

inline std::vector<long> admissibleQ(Tag tag, long r) {
  std::vector<long> q;
  for (long p = hasParityRule(tag) ? r % 2 : 0; p <= r; p += hasParityRule(tag) ? 2 : 1) q.push_back(p);
  return q;
}

inline SandwichContext makeContext(Tag tag, uint32_t m, uint32_t n, const Partition& sigma,
                                   std::shared_ptr<const HomSet> homset = nullptr) {
  if (sigma.m() != n || sigma.n() != m)
    fail(ErrorKind::ShapeMismatch, "sandwich element must lie in K_" + std::to_string(n) + "," + std::to_string(m));
  if (!inCategory(tag, sigma)) fail(ErrorKind::NotInCategory, toText(sigma) + " is not in " + tagName(tag));
  SandwichContext c;
  c.tag = tag;
  c.m = m;
  c.n = n;
  c.sigma = sigma;
  c.sigmaStar = involution(sigma);
  c.r = long(sigma.rank());
  c.tau = detail::buildTau(sigma, c.r);
  c.tauSigma = compose(c.tau, sigma);
  if (homset && (homset->tag != tag || homset->m != m || homset->n != n))
    fail(ErrorKind::ShapeMismatch, "hom-set does not match the context");
  c.homset = homset ? std::move(homset) : std::make_shared<const HomSet>(enumerate(tag, m, n));
  c.Q = admissibleQ(tag, c.r);
  return c;
}

inline Partition starProduct(const SandwichContext& c, const Partition& a, const Partition& b) {
  if (a.m() != c.m || a.n() != c.n || b.m() != c.m || b.n() != c.n)
    fail(ErrorKind::ShapeMismatch, "⋆ operands must lie in K_mn");
  return compose(compose(a, c.sigma), b);
}

inline Index starIndex(const SandwichContext& c, Index a, Index b) {
  return c.indexOf(compose(compose(c.element(a), c.sigma), c.element(b)));
}

// Dense-index view of K_mn^σ (or of a closed subset given by sorted indices) for the engine templates.
class StarView {
 public:
  explicit StarView(const SandwichContext& c) : c_(&c) {}
  std::size_t size() const { return c_->size(); }
  Index product(Index a, Index b) const { return starIndex(*c_, a, b); }

 private:
  const SandwichContext* c_;
};

// Engine semigroup over the given members (all of K_mn by default), generators tried by decreasing rank.
inline FiniteSemigroup<Partition, PartitionHash> starSemigroup(const SandwichContext& c,
                                                                std::vector<Index> members = {}) {
  if (members.empty()) {
    members.resize(c.size());
    std::iota(members.begin(), members.end(), 0);
  }
  std::vector<Partition> elems;
  elems.reserve(members.size());
  for (Index i : members) elems.push_back(c.element(i));
  std::vector<Index> order(elems.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return elems[a].rank() > elems[b].rank(); });
  Partition sigma = c.sigma;
  return FiniteSemigroup<Partition, PartitionHash>::fromMultiplication(
      std::move(elems), [sigma](const Partition& a, const Partition& b) { return compose(compose(a, sigma), b); },
      EngineOptions{}, order);
}

// ---------------------------------------------------------------------------
// P-sets.

struct PSets {
  std::vector<char> p1, p2, p3, p;
  std::size_t size1 = 0, size2 = 0, size3 = 0, size = 0;
  // B and TL only: the join-separation description, and whether it agreed with the rank test.
  std::optional<bool> joinAgrees;

  std::vector<Index> members() const {
    std::vector<Index> out;
    for (Index i = 0; i < p.size(); ++i)
      if (p[i]) out.push_back(i);
    return out;
  }
};

namespace detail {

// The join of the lower kernel of a with the upper kernel of b (both on n points)
// meets each lower transversal end of a at most once.
inline bool joinSeparates(const Partition& a, const Partition& b) {
  const std::size_t n = a.n();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto joinBy = [&](auto labelOf) {
    std::map<uint8_t, std::size_t> first;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, fresh] = first.emplace(labelOf(i), i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  };
  joinBy([&](std::size_t i) { return a.label(a.m() + i); });
  joinBy([&](std::size_t i) { return b.label(i); });
  std::vector<char> upperHit(a.numBlocks(), 0);
  for (std::size_t i = 0; i < a.m(); ++i) upperHit[a.label(i)] = 1;
  std::vector<char> seen(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!upperHit[a.label(a.m() + i)]) continue;
    std::size_t root = find(i);
    if (seen[root]) return false;
    seen[root] = 1;
  }
  return true;
}

}  // namespace detail

inline bool inP1(const SandwichContext& c, const Partition& a) { return compose(a, c.sigma).rank() == a.rank(); }
inline bool inP2(const SandwichContext& c, const Partition& a) { return compose(c.sigma, a).rank() == a.rank(); }
inline bool isRegularElement(const SandwichContext& c, const Partition& a) { return inP1(c, a) && inP2(c, a); }

inline PSets pSets(const SandwichContext& c) {
  PSets s;
  const std::size_t N = c.size();
  s.p1.assign(N, 0);
  s.p2.assign(N, 0);
  s.p3.assign(N, 0);
  s.p.assign(N, 0);
  bool agree = true;
  for (Index i = 0; i < N; ++i) {
    const auto& a = c.element(i);
    const std::size_t q = a.rank();
    auto as = compose(a, c.sigma);
    s.p1[i] = as.rank() == q;
    s.p2[i] = compose(c.sigma, a).rank() == q;
    s.p3[i] = compose(c.sigma, as).rank() == q;
    s.p[i] = s.p1[i] && s.p2[i];
    s.size1 += s.p1[i];
    s.size2 += s.p2[i];
    s.size3 += s.p3[i];
    s.size += s.p[i];
    if (hasParityRule(c.tag)) {
      bool j1 = detail::joinSeparates(a, c.sigma);
      bool j2 = detail::joinSeparates(involution(a), c.sigmaStar);
      agree = agree && j1 == bool(s.p1[i]) && j2 == bool(s.p2[i]);
    }
  }
  if (hasParityRule(c.tag)) s.joinAgrees = agree;
  return s;
}

// Equational description: x*x ⋅ σσ* ⋅ x*x = x*x for P1, and dually for P2.
inline bool inP1Equational(const SandwichContext& c, const Partition& x) {
  auto xx = compose(involution(x), x);
  return compose(compose(xx, compose(c.sigma, c.sigmaStar)), xx) == xx;
}
inline bool inP2Equational(const SandwichContext& c, const Partition& x) {
  auto xx = compose(x, involution(x));
  return compose(compose(xx, compose(c.sigmaStar, c.sigma)), xx) == xx;
}

// ---------------------------------------------------------------------------
// Ψ : Reg(K_mn^σ) -> K_r.

inline Partition psi(const SandwichContext& c, const Partition& a) {
  if (a.m() != c.m || a.n() != c.n) fail(ErrorKind::ShapeMismatch, "psi argument must lie in K_mn");
  if (!isRegularElement(c, a)) fail(ErrorKind::NotRegularElement, toText(a) + " is not regular in the sandwich");
  return compose(compose(c.tauSigma, a), involution(c.tau));
}

// ---------------------------------------------------------------------------
// Green's structure from the categorical data and the P-sets.

struct SandwichGreen {
  std::vector<uint32_t> r, l, h, d;  // per element; J^σ = D^σ
  std::size_t numR = 0, numL = 0, numH = 0, numD = 0;
  std::vector<long> dRank;          // per D-class
  std::vector<char> dRegular;       // per D-class
  std::map<long, uint32_t> regularD;  // q -> id of D_q^σ
  // Classes of Reg pulled back from K_r through Ψ; UINT32_MAX outside Reg.
  std::vector<uint32_t> rHat, lHat, hHat;
  std::size_t numRHat = 0, numLHat = 0, numHHat = 0;
  const std::vector<uint32_t>& j() const { return d; }
};

namespace detail {

template <class Key>
class IdAssigner {
 public:
  uint32_t of(const Key& k) {
    auto [it, fresh] = ids_.emplace(k, next_);
    if (fresh) ++next_;
    return it->second;
  }
  uint32_t fresh() { return next_++; }
  uint32_t count() const { return next_; }

 private:
  std::map<Key, uint32_t> ids_;
  uint32_t next_ = 0;
};

}  // namespace detail

inline SandwichGreen sandwichGreen(const SandwichContext& c, const PSets& ps) {
  SandwichGreen g;
  const std::size_t N = c.size();
  using Key = std::vector<uint8_t>;
  detail::IdAssigner<Key> rId, lId, rhId, lhId;
  detail::IdAssigner<std::pair<uint32_t, uint32_t>> hId, hhId;
  detail::IdAssigner<std::pair<int, long>> dId;
  g.r.resize(N);
  g.l.resize(N);
  g.h.resize(N);
  g.d.resize(N);
  g.rHat.assign(N, UINT32_MAX);
  g.lHat.assign(N, UINT32_MAX);
  g.hHat.assign(N, UINT32_MAX);
  std::vector<uint32_t> rawR(N), rawL(N);
  // R- and L-classes are numbered in a first pass so that D-classes of one-sided elements can refer to them.
  for (Index i = 0; i < N; ++i) {
    const auto& a = c.element(i);
    g.r[i] = ps.p1[i] ? rId.of(rKey(a)) : rId.fresh();
    g.l[i] = ps.p2[i] ? lId.of(lKey(a)) : lId.fresh();
  }
  for (Index i = 0; i < N; ++i) {
    const auto& a = c.element(i);
    g.h[i] = ps.p[i] ? hId.of({g.r[i], g.l[i]}) : hId.fresh();
    long rank = long(a.rank());
    if (ps.p[i])
      g.d[i] = dId.of({0, rank});
    else if (ps.p2[i])
      g.d[i] = dId.of({1, long(g.l[i])});
    else if (ps.p1[i])
      g.d[i] = dId.of({2, long(g.r[i])});
    else
      g.d[i] = dId.fresh();
    if (g.d[i] == g.dRank.size()) {
      g.dRank.push_back(rank);
      g.dRegular.push_back(ps.p[i]);
      if (ps.p[i]) g.regularD[rank] = g.d[i];
    }
    if (ps.p[i]) {
      auto image = psi(c, a);
      g.rHat[i] = rhId.of(rKey(image));
      g.lHat[i] = lhId.of(lKey(image));
      g.hHat[i] = hhId.of({g.rHat[i], g.lHat[i]});
    }
  }
  g.numR = rId.count();
  g.numL = lId.count();
  g.numH = hId.count();
  g.numD = dId.count();
  g.numRHat = rhId.count();
  g.numLHat = lhId.count();
  g.numHHat = hhId.count();
  return g;
}

inline SandwichGreen sandwichGreen(const SandwichContext& c) { return sandwichGreen(c, pSets(c)); }

// Preorders of K_mn^σ read off from the category.
inline bool sandwichLeq(const SandwichContext& c, Rel rel, const Partition& x, const Partition& y) {
  if (x == y) return true;
  switch (rel) {
    case Rel::R: return catLeq(c.tag, Rel::R, x, compose(y, c.sigma));
    case Rel::L: return catLeq(c.tag, Rel::L, x, compose(c.sigma, y));
    case Rel::J: {
      auto ys = compose(y, c.sigma);
      auto sy = compose(c.sigma, y);
      return catLeq(c.tag, Rel::R, x, ys) || catLeq(c.tag, Rel::L, x, sy) ||
             catLeq(c.tag, Rel::J, x, compose(c.sigma, ys));
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Pre-inverses, post-inverses and one-sided identities of σ.

struct InverseSets {
  std::vector<Index> pre, post, v, ri, li;
};

inline InverseSets inverseSets(const SandwichContext& c) {
  InverseSets s;
  const std::size_t N = c.size();
  for (Index i = 0; i < N; ++i) {
    const auto& b = c.element(i);
    auto sb = compose(c.sigma, b);
    auto bs = compose(b, c.sigma);
    bool pre = compose(sb, c.sigma) == c.sigma;
    bool post = compose(bs, b) == b;
    if (pre) s.pre.push_back(i);
    if (post) s.post.push_back(i);
    if (pre && post) s.v.push_back(i);
    bool right = true, left = true;
    for (Index k = 0; k < N && right; ++k) right = compose(c.element(k), sb) == c.element(k);
    for (Index k = 0; k < N && left; ++k) left = compose(bs, c.element(k)) == c.element(k);
    if (right) s.ri.push_back(i);
    if (left) s.li.push_back(i);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Maximal J^σ-classes.

struct MaximalClasses {
  std::vector<Index> trivial;                   // singletons {a} with rank(a) > r
  std::optional<std::vector<Index>> nontrivial;  // D_r^σ when it is maximal
  std::string shape;  // left-group, right-group, left-zero, right-zero, or empty
};

inline std::vector<Index> classOfRank(const SandwichContext& c, const PSets& ps, long q) {
  std::vector<Index> out;
  for (Index i = 0; i < c.size(); ++i)
    if (ps.p[i] && long(c.element(i).rank()) == q) out.push_back(i);
  return out;
}

inline MaximalClasses maximalJClasses(const SandwichContext& c, const PSets& ps, const InverseSets& inv) {
  MaximalClasses mc;
  for (Index i = 0; i < c.size(); ++i)
    if (long(c.element(i).rank()) > c.r) mc.trivial.push_back(i);
  const long k = std::min<long>(c.m, c.n);
  const bool general = c.tag == Tag::P || c.tag == Tag::PB || c.tag == Tag::B;
  if (c.r == k) {
    mc.nontrivial = classOfRank(c, ps, c.r);
    if (general)
      mc.shape = c.m >= c.n ? "left-group" : "right-group";
    else
      mc.shape = c.m >= c.n ? "left-zero" : "right-zero";
    return mc;
  }
  if (general) return mc;
  bool preInTop = std::all_of(inv.pre.begin(), inv.pre.end(),
                              [&](Index i) { return long(c.element(i).rank()) == c.r; });
  if (preInTop) mc.nontrivial = classOfRank(c, ps, c.r);
  return mc;
}

inline MaximalClasses maximalJClasses(const SandwichContext& c) {
  auto ps = pSets(c);
  return maximalJClasses(c, ps, inverseSets(c));
}

// The minimal ideal D_z, z the least rank present in K_mn.
inline std::vector<Index> minimalIdeal(const SandwichContext& c) {
  std::vector<Index> out;
  if (c.size() == 0) return out;
  std::size_t z = SIZE_MAX;
  for (const auto& a : c.elements()) z = std::min(z, a.rank());
  for (Index i = 0; i < c.size(); ++i)
    if (c.element(i).rank() == z) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Ideals of Reg and idempotent generation.

inline void checkAdmissible(const SandwichContext& c, long q) {
  if (std::find(c.Q.begin(), c.Q.end(), q) == c.Q.end())
    fail(ErrorKind::RankNotAdmissible, "rank " + std::to_string(q) + " is not admissible for r=" + std::to_string(c.r));
}

inline std::vector<Index> ideal(const SandwichContext& c, const PSets& ps, long q) {
  checkAdmissible(c, q);
  std::vector<Index> out;
  for (Index i = 0; i < c.size(); ++i)
    if (ps.p[i] && long(c.element(i).rank()) <= q) out.push_back(i);
  return out;
}

// Closure under ⋆ of a set of indices, as a membership mask; generators are kept only when new.
inline std::vector<char> starClosure(const SandwichContext& c, const std::vector<Index>& gens) {
  std::vector<char> in;
  greedyGenerators(c.size(), gens, [&](Index a, Index b) { return starIndex(c, a, b); }, &in);
  return in;
}

inline std::vector<Index> maskToList(const std::vector<char>& mask) {
  std::vector<Index> out;
  for (Index i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

struct IdealStatus {
  std::size_t idealSize = 0;
  std::size_t eClosureSize = 0;    // |⟨E(I_q)⟩|
  std::size_t topClosureSize = 0;  // |⟨E(D_q^σ)⟩|
  bool isEGenerated = false;
  bool byTopClass = false;
};

inline IdealStatus idealIdempotentStatus(const SandwichContext& c, const PSets& ps, long q) {
  auto I = ideal(c, ps, q);
  IdealStatus st;
  st.idealSize = I.size();
  std::vector<Index> E, top;
  for (Index i : I)
    if (starIndex(c, i, i) == i) {
      E.push_back(i);
      if (long(c.element(i).rank()) == q) top.push_back(i);
    }
  auto count = [](const std::vector<char>& v) { return std::size_t(std::count(v.begin(), v.end(), 1)); };
  st.eClosureSize = count(starClosure(c, E));
  st.topClosureSize = count(starClosure(c, top));
  st.isEGenerated = st.eClosureSize == st.idealSize;
  st.byTopClass = st.topClosureSize == st.idealSize;
  return st;
}

// Threshold below which every ideal I_q(K_r) is idempotent-generated, as tabulated for r >= 2.
inline long muTable(Tag tag, long r) {
  switch (tag) {
    case Tag::PP:
    case Tag::TL: return r;
    case Tag::P: return r - 1;
    case Tag::PB:
    case Tag::B: return r - 2;
    case Tag::M: return r / 2 - 1;
  }
  return r;
}

// For r <= 1 every K_r is a band, so every ideal is idempotent-generated.
inline long muEffective(Tag tag, long r) { return r <= 1 ? r : muTable(tag, r); }

struct IdempotentGenerated {
  std::vector<Index> closure;                    // ⟨E(K_mn^σ)⟩ computed by closure
  std::vector<Index> psiPreimage;                // Ψ^{-1}(⟨E(K_r)⟩)
  std::optional<std::vector<Index>> closedForm;  // tag-specific description, absent for M
  std::string description;
};

inline IdempotentGenerated idempotentGenerated(const SandwichContext& c, const PSets& ps, const InverseSets& inv) {
  IdempotentGenerated res;
  res.closure = maskToList(starClosure(c, inv.post));

  auto kr = enumerate(c.tag, uint32_t(c.r), uint32_t(c.r));
  std::vector<Index> eKr;
  for (Index i = 0; i < kr.size(); ++i)
    if (compose(kr.elements[i], kr.elements[i]) == kr.elements[i]) eKr.push_back(i);
  std::vector<char> inEKr;
  greedyGenerators(kr.size(), eKr, [&](Index a, Index b) { return *kr.indexOf(compose(kr.elements[a], kr.elements[b])); },
                   &inEKr);
  for (Index i = 0; i < c.size(); ++i)
    if (ps.p[i] && inEKr[*kr.indexOf(psi(c, c.element(i)))]) res.psiPreimage.push_back(i);

  std::vector<char> inV(c.size(), 0), post(c.size(), 0);
  for (Index i : inv.v) inV[i] = 1;
  for (Index i : inv.post) post[i] = 1;
  std::vector<Index> form;
  switch (c.tag) {
    case Tag::PP:
    case Tag::TL:
      res.description = "Reg";
      form = ps.members();
      break;
    case Tag::P:
    case Tag::B:
      res.description = "V(sigma) + (Reg - D_r)";
      for (Index i = 0; i < c.size(); ++i)
        if (ps.p[i] && (inV[i] || long(c.element(i).rank()) != c.r)) form.push_back(i);
      break;
    case Tag::PB:
      res.description = "E(D_r + D_{r-1}) + I_{r-2}";
      for (Index i = 0; i < c.size(); ++i) {
        if (!ps.p[i]) continue;
        long q = long(c.element(i).rank());
        if (q <= c.r - 2 || post[i]) form.push_back(i);
      }
      break;
    case Tag::M:
      res.description = "Psi-preimage of the idempotent-generated part of M_r";
      break;
  }
  if (c.tag != Tag::M) res.closedForm = form;
  return res;
}

}  // namespace diagramcat
