#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "diagrams.hpp"
#include "homsets.hpp"
#include "numbers.hpp"
#include "sandwich.hpp"

namespace diagramcat {

struct BrauerParams {
  long m = 0, n = 0, r = 0;
  friend bool operator==(const BrauerParams&, const BrauerParams&) = default;
};

inline void validate(const BrauerParams& p) {
  if (p.m < 0 || p.n < 0 || p.r < 0 || p.r > std::min(p.m, p.n))
    fail(ErrorKind::ArgOutOfRange, "need 0 <= r <= min(m,n)");
  if ((p.m - p.n) % 2 != 0 || (p.n - p.r) % 2 != 0) fail(ErrorKind::ParityViolation, "need r = n = m mod 2");
}

inline BrauerParams swapped(const BrauerParams& p) { return {p.n, p.m, p.r}; }
inline BrauerParams oriented(const BrauerParams& p) { return p.m >= p.n ? p : swapped(p); }

// Canonical element of B_nm of rank r: i joined to i' for i <= r, then consecutive pairs in each row.
inline Partition canonicalSigma(const BrauerParams& p) {
  validate(p);
  const long n = p.n, m = p.m, r = p.r;
  std::vector<uint8_t> lab(std::size_t(n + m));
  uint8_t next = 0;
  for (long i = 0; i < r; ++i) {
    lab[std::size_t(i)] = next;
    lab[std::size_t(n + i)] = next++;
  }
  for (long i = r; i < n; i += 2) lab[std::size_t(i)] = lab[std::size_t(i + 1)] = next++;
  for (long i = r; i < m; i += 2) lab[std::size_t(n + i)] = lab[std::size_t(n + i + 1)] = next++;
  return Partition::fromLabels(uint32_t(n), uint32_t(m), lab);
}

struct Normalized {
  Partition sigma;  // canonical
  Partition pi1;    // in S_n
  Partition pi2;    // in S_m
};

// σ = π1 σ' π2 with σ' canonical; α ↦ π2 α π1 is then an isomorphism B_mn^σ -> B_mn^σ'.
inline Normalized normalizeSigma(const Partition& sigma) {
  if (!inCategory(Tag::B, sigma)) fail(ErrorKind::NotBrauer, toText(sigma) + " is not a Brauer diagram");
  const uint32_t n = sigma.m(), m = sigma.n();
  std::vector<std::pair<int, int>> trans;
  std::vector<Block> ups, downs;
  for (const auto& blk : sigma.blocks()) {
    if (blk[0] > 0 && blk[1] < 0)
      trans.emplace_back(blk[0], -blk[1]);
    else if (blk[0] > 0)
      ups.push_back(blk);
    else
      downs.push_back({-blk[0], -blk[1]});
  }
  std::sort(trans.begin(), trans.end());
  std::sort(downs.begin(), downs.end());
  const uint32_t r = uint32_t(trans.size());
  std::vector<uint32_t> p(n), q(m);
  for (uint32_t i = 0; i < r; ++i) {
    p[uint32_t(trans[i].first - 1)] = i;
    q[i] = uint32_t(trans[i].second - 1);
  }
  for (std::size_t k = 0; k < ups.size(); ++k) {
    p[uint32_t(ups[k][0] - 1)] = r + 2 * uint32_t(k);
    p[uint32_t(ups[k][1] - 1)] = r + 2 * uint32_t(k) + 1;
  }
  for (std::size_t k = 0; k < downs.size(); ++k) {
    q[r + 2 * k] = uint32_t(downs[k][0] - 1);
    q[r + 2 * k + 1] = uint32_t(downs[k][1] - 1);
  }
  return {canonicalSigma({long(m), long(n), long(r)}), permutation(p), permutation(q)};
}

// The four clauses of the isomorphism classification.
inline bool isoEquivalent(const BrauerParams& a, const BrauerParams& b) {
  validate(a);
  validate(b);
  if (a == b) return true;
  if (a.m + a.n <= 2 && b.m + b.n <= 2) return true;
  auto clause = [](const BrauerParams& x, const BrauerParams& y) {
    for (long q = 1; 2 * q <= x.m + x.n; ++q) {
      if (x == BrauerParams{2 * q, 0, 0} && y == BrauerParams{2 * q - 1, 1, 1}) return true;
      if (x == BrauerParams{0, 2 * q, 0} && y == BrauerParams{1, 2 * q - 1, 1}) return true;
    }
    return false;
  };
  return clause(a, b) || clause(b, a);
}

// rank(B_n) for the monoid case r = m = n.
inline Integer brauerMonoidRank(long n) { return n >= 3 ? 3 : n == 2 ? 2 : 1; }

inline Integer sandwichRank(const BrauerParams& params) {
  validate(params);
  auto p = oriented(params);
  if (p.r < p.n) {
    Integer s = 0;
    for (long q = p.r + 2; q <= p.n; q += 2)
      s += binomial(p.m, q) * binomial(p.n, q) * dfact(p.m - q - 1) * dfact(p.n - q - 1) * factorial(q);
    return s;
  }
  if (p.n < p.m) return binomial(p.m, p.n) * dfact(p.m - p.n - 1);
  return brauerMonoidRank(p.n);
}

struct RegProfile {
  Integer rHatClasses, rPerRHat, lHatClasses, lPerLHat, hSize;
  Integer rClasses, lClasses;  // κ(m,r,q), κ(n,r,q)
  Integer hClasses, dSize;
  std::pair<Integer, Integer> rectDims;
};

inline RegProfile regProfile(const BrauerParams& p, long q) {
  validate(p);
  if (q < 0 || q > p.r) fail(ErrorKind::ArgOutOfRange, "q outside [0, r]");
  if ((p.r - q) % 2 != 0) fail(ErrorKind::ParityViolation, "q must have the parity of r");
  RegProfile x;
  const Integer hat = binomial(p.r, q) * dfact(p.r - q - 1);
  const Integer den = dfact(p.r + q - 1);
  x.rHatClasses = hat;
  x.lHatClasses = hat;
  x.rPerRHat = dfact(p.m + q - 1) / den;
  x.lPerLHat = dfact(p.n + q - 1) / den;
  x.hSize = factorial(q);
  x.rClasses = kappaJoin(p.m, p.r, q);
  x.lClasses = kappaJoin(p.n, p.r, q);
  x.hClasses = x.rClasses * x.lClasses;
  x.dSize = x.hClasses * x.hSize;
  x.rectDims = {x.rPerRHat, x.lPerLHat};
  return x;
}

inline Integer regSize(const BrauerParams& p) {
  validate(p);
  Integer s = 0;
  for (long q = p.r % 2; q <= p.r; q += 2) s += kappaJoin(p.m, p.r, q) * kappaJoin(p.n, p.r, q) * factorial(q);
  return s;
}

// Idempotents of rank q, for each admissible q.
inline std::map<long, Integer> idempotentCountByRank(const BrauerParams& p) {
  validate(p);
  std::map<long, Integer> out;
  for (long q = p.r % 2; q <= p.r; q += 2)
    out[q] = binomial(p.r, q) * dfact(p.r - q - 1) * dfact(p.m + q - 1) * dfact(p.n + q - 1) /
             (dfact(p.r + q - 1) * dfact(2 * q - 1));
  return out;
}

inline Integer idempotentCount(const BrauerParams& p) {
  Integer s = 0;
  for (const auto& [q, v] : idempotentCountByRank(p)) s += v;
  return s;
}

inline Integer regRank(const BrauerParams& params) {
  validate(params);
  auto p = oriented(params);
  if (p.r == p.m && p.r == p.n) return brauerMonoidRank(p.n);
  return dfact(p.m + p.r - 1) / dfact(2 * p.r - 1) + (p.r >= 2 ? 1 : 0);
}

struct EGenRanks {
  Integer rank, idrank;
};

inline EGenRanks eGenRanks(const BrauerParams& params) {
  validate(params);
  auto p = oriented(params);
  Integer v = dfact(p.m + p.r - 1) / dfact(2 * p.r - 1) + binomial(p.r, 2);
  return {v, v};
}

inline Integer idealRank(const BrauerParams& params, long q) {
  validate(params);
  if (q < 0 || q >= params.r || (params.r - q) % 2 != 0)
    fail(ErrorKind::RankNotAdmissible, "ideal rank needs q < r with the parity of r");
  auto p = oriented(params);
  return kappaJoin(p.m, p.r, q);
}

// For α of rank q < n (with m >= n, σ canonical and not the monoid case r = m = n), β and γ of rank q+2 with α = β σ γ.
inline std::pair<Partition, Partition> factorThroughHigherRank(const Partition& alpha) {
  const long m = alpha.m(), n = alpha.n();
  std::vector<std::pair<int, int>> trans;
  std::vector<Block> ups, downs;
  for (const auto& blk : alpha.blocks()) {
    if (blk[0] > 0 && blk[1] < 0)
      trans.emplace_back(blk[0], -blk[1]);
    else if (blk[0] > 0)
      ups.push_back(blk);
    else
      downs.push_back({-blk[0], -blk[1]});
  }
  const long q = long(trans.size());
  if (ups.empty() || downs.empty()) fail(ErrorKind::ArgOutOfRange, "factorisation needs rank below both row sizes");
  std::vector<Block> beta, gamma;
  for (long i = 0; i < q; ++i) beta.push_back({trans[i].first, -int(i + 1)});
  beta.push_back({ups.back()[0], -int(n - 1)});
  beta.push_back({ups.back()[1], -int(n)});
  for (std::size_t k = 0; k + 1 < ups.size(); ++k) beta.push_back(ups[k]);
  for (long v = q + 1; v + 1 <= n - 2; v += 2) beta.push_back({-int(v), -int(v + 1)});
  for (long i = 0; i < q; ++i) gamma.push_back({int(i + 1), -trans[i].second});
  gamma.push_back({int(m - 1), -downs.back()[0]});
  gamma.push_back({int(m), -downs.back()[1]});
  for (long v = q + 1; v + 1 <= m - 2; v += 2) gamma.push_back({int(v), int(v + 1)});
  for (std::size_t k = 0; k + 1 < downs.size(); ++k) gamma.push_back({-downs[k][0], -downs[k][1]});
  return {makePartition(uint32_t(m), uint32_t(n), beta), makePartition(uint32_t(m), uint32_t(n), gamma)};
}

// ---------------------------------------------------------------------------
// Formula-versus-enumeration suite.

struct VerifyRow {
  std::string tag = "B";
  long m = 0, n = 0, r = 0;
  std::string formula;
  std::string formulaValue;
  std::string bruteValue;
  bool match = false;
  std::string check;  // what the brute-force column counts
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool allPass() const {
    return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.match; });
  }
  std::string csv() const {
    std::ostringstream os;
    os << "tag,m,n,r,formula,bruteforce,match,check\n";
    for (const auto& x : rows)
      os << x.tag << ',' << x.m << ',' << x.n << ',' << x.r << ',' << x.formulaValue << ',' << x.bruteValue << ','
         << (x.match ? "true" : "false") << ',' << x.formula << '\n';
    return os.str();
  }
};

namespace detail {

inline void addRow(VerifyReport& rep, const BrauerParams& p, std::string name, const Integer& formula,
                   const Integer& brute, std::string check) {
  VerifyRow row;
  row.m = p.m;
  row.n = p.n;
  row.r = p.r;
  row.formula = std::move(name);
  row.formulaValue = formula.str();
  row.bruteValue = brute.str();
  row.match = formula == brute;
  row.check = std::move(check);
  rep.rows.push_back(std::move(row));
}

}  // namespace detail

// Every Brauer (m,n,r) with m+n <= maxSize: Reg size, idempotent counts and R/L-class counts per
// rank, checked against the canonical σ; the higher-rank factorisation is checked for each α.
inline VerifyReport verifySuite(long maxSize) {
  VerifyReport rep;
  for (long total = 0; total <= maxSize; total += 2) {
    for (long m = 0; m <= total; ++m) {
      const long n = total - m;
      auto hs = std::make_shared<const HomSet>(enumerate(Tag::B, uint32_t(m), uint32_t(n)));
      for (long r = n % 2; r <= std::min(m, n); r += 2) {
        BrauerParams p{m, n, r};
        auto ctx = makeContext(Tag::B, uint32_t(m), uint32_t(n), canonicalSigma(p), hs);
        auto ps = pSets(ctx);
        std::map<long, Integer> eBrute;
        std::map<long, std::set<std::vector<uint8_t>>> rk, lk;
        for (Index i = 0; i < ctx.size(); ++i) {
          const auto& a = ctx.element(i);
          long q = long(a.rank());
          if (ps.p[i]) {
            rk[q].insert(rKey(a));
            lk[q].insert(lKey(a));
          }
          if (compose(compose(a, ctx.sigma), a) == a) eBrute[q] += 1;
        }
        detail::addRow(rep, p, "regSize", regSize(p), Integer(ps.size), "|Reg| by rank test");
        detail::addRow(rep, p, "joinCriterion", Integer(1), Integer(ps.joinAgrees.value_or(false) ? 1 : 0),
                       "join separation agrees with rank test");
        Integer eTotal = 0;
        auto byRank = idempotentCountByRank(p);
        for (const auto& [q, v] : byRank) {
          detail::addRow(rep, p, "idempotents[q=" + std::to_string(q) + "]", v, eBrute[q], "idempotents of rank q");
          detail::addRow(rep, p, "rClasses[q=" + std::to_string(q) + "]", kappaJoin(m, r, q),
                         Integer(rk[q].size()), "distinct kernels in D_q of Reg");
          detail::addRow(rep, p, "lClasses[q=" + std::to_string(q) + "]", kappaJoin(n, r, q),
                         Integer(lk[q].size()), "distinct cokernels in D_q of Reg");
          eTotal += eBrute[q];
        }
        detail::addRow(rep, p, "idempotentCount", idempotentCount(p), eTotal, "idempotents");
        if (m >= n && !(r == m && r == n)) {
          std::size_t good = 0, tried = 0;
          for (Index i = 0; i < ctx.size(); ++i) {
            const auto& a = ctx.element(i);
            long q = long(a.rank());
            if (q > r || q >= n) continue;
            ++tried;
            auto [b, c] = factorThroughHigherRank(a);
            if (long(b.rank()) == q + 2 && long(c.rank()) == q + 2 && starProduct(ctx, b, c) == a) ++good;
          }
          detail::addRow(rep, p, "higherRankFactorisation", Integer(tried), Integer(good),
                         "elements of rank q<=r, q<n factored through rank q+2");
        }
      }
    }
  }
  return rep;
}

}  // namespace diagramcat
