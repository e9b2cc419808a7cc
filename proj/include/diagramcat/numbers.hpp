#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

#include "diagrams.hpp"
#include "error.hpp"

namespace diagramcat {

using Integer = boost::multiprecision::cpp_int;

enum class SeqKind { Stirling2, Bell, DoubleFactorial, Involutions, Catalan, MotzkinTriangle, Motzkin };

// Memoized sequences, filled eagerly up to `bound` and read-only afterwards.
class SequenceTable {
 public:
  explicit SequenceTable(int bound = 200) : bound_(bound) {
    const auto N = static_cast<std::size_t>(bound) + 1;
    stirling_.assign(N, std::vector<Integer>(N, 0));
    stirling_[0][0] = 1;
    for (std::size_t n = 1; n < N; ++n)
      for (std::size_t k = 1; k <= n; ++k) stirling_[n][k] = stirling_[n - 1][k - 1] + k * stirling_[n - 1][k];
    bell_.assign(N, 0);
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t k = 0; k <= n; ++k) bell_[n] += stirling_[n][k];
    dfact_.assign(N + 1, 0);  // dfact_[k+1] = k!!
    dfact_[0] = 1;
    for (std::size_t k = 1; k < N; k += 2) dfact_[k + 1] = (k == 1 ? Integer(1) : dfact_[k - 1] * k);
    invol_.assign(N, 0);
    invol_[0] = 1;
    if (N > 1) invol_[1] = 1;
    for (std::size_t n = 2; n < N; ++n) invol_[n] = invol_[n - 1] + (n - 1) * invol_[n - 2];
    catalan_.assign(N, 0);
    catalan_[0] = 1;
    for (std::size_t n = 1; n < N; ++n)
      for (std::size_t i = 0; i < n; ++i) catalan_[n] += catalan_[i] * catalan_[n - 1 - i];
    motzkin_.assign(N, std::vector<Integer>(N + 1, 0));
    motzkin_[0][0] = 1;
    for (std::size_t n = 1; n < N; ++n)
      for (std::size_t k = 0; k <= n; ++k) {
        Integer v = motzkin_[n - 1][k] + motzkin_[n - 1][k + 1];
        if (k > 0) v += motzkin_[n - 1][k - 1];
        motzkin_[n][k] = v;
      }
    binom_.assign(N + 1, std::vector<Integer>(N + 1, 0));
    for (std::size_t n = 0; n <= N; ++n) {
      binom_[n][0] = 1;
      for (std::size_t k = 1; k <= n; ++k) binom_[n][k] = binom_[n - 1][k - 1] + (k <= n - 1 ? binom_[n - 1][k] : Integer(0));
    }
    fact_.assign(N, 1);
    for (std::size_t n = 1; n < N; ++n) fact_[n] = fact_[n - 1] * n;
  }

  int bound() const noexcept { return bound_; }

  const Integer& stirling2(long n, long k) const {
    check(n);
    if (k < 0) fail(ErrorKind::ArgOutOfRange, "stirling2 k=" + std::to_string(k));
    return k > n ? zero() : stirling_[n][k];
  }
  const Integer& bell(long n) const { return check(n), bell_[n]; }
  // k!! with (-1)!! = 1 and k!! = 0 for even k >= 0.
  const Integer& doubleFactorial(long k) const {
    if (k < -1) fail(ErrorKind::ArgOutOfRange, "double factorial of " + std::to_string(k));
    check(k < 0 ? 0 : k);
    return dfact_[k + 1];
  }
  const Integer& involutions(long n) const { return check(n), invol_[n]; }
  const Integer& catalan(long n) const { return check(n), catalan_[n]; }
  const Integer& motzkinTriangle(long n, long k) const {
    check(n);
    if (k < 0) fail(ErrorKind::ArgOutOfRange, "motzkin triangle k=" + std::to_string(k));
    return k > n ? zero() : motzkin_[n][k];
  }
  const Integer& motzkin(long n) const { return motzkinTriangle(n, 0); }
  const Integer& binomial(long n, long k) const {
    check(n);
    if (k < 0 || k > n) return zero();
    return binom_[n][k];
  }
  const Integer& factorial(long n) const { return check(n), fact_[n]; }

 private:
  void check(long n) const {
    if (n < 0 || n > bound_)
      fail(ErrorKind::ArgOutOfRange, "argument " + std::to_string(n) + " outside [0," + std::to_string(bound_) + "]");
  }
  static const Integer& zero() {
    static const Integer z = 0;
    return z;
  }

  int bound_;
  std::vector<std::vector<Integer>> stirling_;
  std::vector<Integer> bell_;
  std::vector<Integer> dfact_;
  std::vector<Integer> invol_;
  std::vector<Integer> catalan_;
  std::vector<std::vector<Integer>> motzkin_;
  std::vector<std::vector<Integer>> binom_;
  std::vector<Integer> fact_;
};

inline const SequenceTable& sequences() {
  static const SequenceTable table(200);
  return table;
}

inline Integer seq(SeqKind kind, const std::vector<long>& args) {
  auto need = [&](std::size_t k) {
    if (args.size() != k) fail(ErrorKind::ArgOutOfRange, "expected " + std::to_string(k) + " arguments");
  };
  const auto& t = sequences();
  switch (kind) {
    case SeqKind::Stirling2: need(2); return t.stirling2(args[0], args[1]);
    case SeqKind::Bell: need(1); return t.bell(args[0]);
    case SeqKind::DoubleFactorial: need(1); return t.doubleFactorial(args[0]);
    case SeqKind::Involutions: need(1); return t.involutions(args[0]);
    case SeqKind::Catalan: need(1); return t.catalan(args[0]);
    case SeqKind::MotzkinTriangle: need(2); return t.motzkinTriangle(args[0], args[1]);
    case SeqKind::Motzkin: need(1); return t.motzkin(args[0]);
  }
  return 0;
}

inline Integer binomial(long n, long k) { return sequences().binomial(n, k); }
inline Integer factorial(long n) { return sequences().factorial(n); }
inline Integer dfact(long k) { return sequences().doubleFactorial(k); }

// Number of 1-2-equivalences of rank q on an m-set.
inline Integer kappa(long m, long q) {
  if (q < 0 || q > m || (m - q) % 2 != 0) return 0;
  return binomial(m, q) * dfact(m - q - 1);
}

namespace detail {
inline void checkKappaJoin(long m, long r, long q) {
  if (q < 0 || q > r || r > m) fail(ErrorKind::ArgOutOfRange, "kappaJoin needs q <= r <= m");
  if ((r - q) % 2 != 0 || (m - r) % 2 != 0) fail(ErrorKind::ParityViolation, "kappaJoin needs q = r = m mod 2");
}
}  // namespace detail

inline Integer kappaJoin(long m, long r, long q) {
  detail::checkKappaJoin(m, r, q);
  return binomial(r, q) * dfact(r - q - 1) * dfact(m + q - 1) / dfact(r + q - 1);
}

inline Integer kappaJoinRecurrence(long m, long r, long q) {
  detail::checkKappaJoin(m, r, q);
  if (q == 0) return dfact(m - 1);
  if (m == r) return binomial(m, q) * dfact(m - q - 1);
  if (r == q) return dfact(m + r - 1) / dfact(2 * r - 1);
  return kappaJoinRecurrence(m - 1, r - 1, q - 1) + (r - 1) * kappaJoinRecurrence(m - 2, r - 2, q) +
         (m - r) * kappaJoinRecurrence(m - 2, r, q);
}

inline Integer homsetCardinality(Tag tag, long m, long n) {
  const long s = m + n;
  switch (tag) {
    case Tag::P: return sequences().bell(s);
    case Tag::PB: return sequences().involutions(s);
    case Tag::B: return s % 2 ? Integer(0) : dfact(s - 1);
    case Tag::PP: return sequences().catalan(s);
    case Tag::M: return sequences().motzkin(s);
    case Tag::TL: return s % 2 ? Integer(0) : sequences().catalan(s / 2);
  }
  return 0;
}

// Ranks that occur in K_mn, in increasing order.
inline std::vector<long> admissibleRanks(Tag tag, long m, long n) {
  std::vector<long> out;
  if (hasParityRule(tag) && (m + n) % 2 != 0) return out;
  for (long r = 0; r <= std::min(m, n); ++r)
    if (!hasParityRule(tag) || (m - r) % 2 == 0) out.push_back(r);
  return out;
}

struct DClassProfile {
  Integer rClasses;
  Integer lClasses;
  Integer hSize;
  Integer dSize;
};

namespace detail {
inline Integer rClassCount(Tag tag, long m, long r) {
  const auto& t = sequences();
  switch (tag) {
    case Tag::P: {
      Integer s = 0;
      for (long q = r; q <= m; ++q) s += binomial(q, r) * t.stirling2(m, q);
      return s;
    }
    case Tag::PB: return binomial(m, r) * t.involutions(m - r);
    case Tag::B: return binomial(m, r) * dfact(m - r - 1);
    case Tag::PP: return Integer(2 * r + 1) * binomial(2 * m + 1, m - r) / (2 * m + 1);
    case Tag::M: return t.motzkinTriangle(m, r);
    case Tag::TL: return Integer(r + 1) * binomial(m + 1, (m - r) / 2) / (m + 1);
  }
  return 0;
}
}  // namespace detail

inline DClassProfile dclassProfile(Tag tag, long m, long n, long r) {
  if (m < 0 || n < 0 || r < 0 || r > std::min(m, n))
    fail(ErrorKind::ArgOutOfRange, "rank " + std::to_string(r) + " outside [0, min(m,n)]");
  if (hasParityRule(tag) && ((m - r) % 2 != 0 || (n - r) % 2 != 0))
    fail(ErrorKind::ParityViolation, std::string("rank parity for ") + tagName(tag));
  DClassProfile p;
  p.rClasses = detail::rClassCount(tag, m, r);
  p.lClasses = detail::rClassCount(tag, n, r);
  p.hSize = (tag == Tag::P || tag == Tag::PB || tag == Tag::B) ? factorial(r) : Integer(1);
  p.dSize = p.rClasses * p.lClasses * p.hSize;
  return p;
}

}  // namespace diagramcat
