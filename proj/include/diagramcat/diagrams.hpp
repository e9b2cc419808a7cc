#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace diagramcat {

enum class Tag { P, PB, B, PP, M, TL };

inline constexpr std::array<Tag, 6> kAllTags = {Tag::P, Tag::PB, Tag::B, Tag::PP, Tag::M, Tag::TL};

inline const char* tagName(Tag t) {
  switch (t) {
    case Tag::P: return "P";
    case Tag::PB: return "PB";
    case Tag::B: return "B";
    case Tag::PP: return "PP";
    case Tag::M: return "M";
    case Tag::TL: return "TL";
  }
  return "?";
}

inline Tag parseTag(std::string_view s) {
  for (Tag t : kAllTags)
    if (s == tagName(t)) return t;
  fail(ErrorKind::ParseError, "unknown category tag '" + std::string(s) + "'");
}

inline bool isPlanarTag(Tag t) { return t == Tag::PP || t == Tag::M || t == Tag::TL; }
inline bool hasParityRule(Tag t) { return t == Tag::B || t == Tag::TL; }

using Block = std::vector<int>;

// A set partition of [m] ∪ [n]'. Vertex v < m is upper vertex v+1, vertex m+j is lower
// vertex (j+1)'. Labels form a restricted growth string, so blocks are numbered by least vertex.
class Partition {
 public:
  static constexpr std::size_t kMaxVertices = 255;

  Partition() = default;

  static Partition fromLabels(uint32_t m, uint32_t n, const std::vector<uint8_t>& labels) {
    Partition p;
    p.m_ = m;
    p.n_ = n;
    p.lab_ = labels;
    p.canonicalize();
    return p;
  }

  uint32_t m() const noexcept { return m_; }
  uint32_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return lab_.size(); }
  std::size_t numBlocks() const noexcept { return nb_; }
  const std::vector<uint8_t>& labels() const noexcept { return lab_; }
  uint8_t label(std::size_t v) const { return lab_[v]; }

  int signedVertex(std::size_t v) const {
    return v < m_ ? static_cast<int>(v) + 1 : -static_cast<int>(v - m_ + 1);
  }

  std::vector<Block> blocks() const {
    std::vector<Block> out(nb_);
    for (std::size_t v = 0; v < lab_.size(); ++v) out[lab_[v]].push_back(signedVertex(v));
    return out;
  }

  std::size_t rank() const {
    std::array<uint8_t, 256> seen{};
    std::size_t r = 0;
    for (std::size_t v = 0; v < m_; ++v) seen[lab_[v]] = 1;
    for (std::size_t v = m_; v < lab_.size(); ++v) {
      if (seen[lab_[v]] == 1) {
        seen[lab_[v]] = 2;
        ++r;
      }
    }
    return r;
  }

  std::size_t hash() const noexcept {
    std::size_t h = 1469598103934665603ull ^ (std::size_t(m_) << 32 | n_);
    for (uint8_t c : lab_) h = (h ^ c) * 1099511628211ull;
    return h;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    if (auto c = a.m_ <=> b.m_; c != 0) return c;
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.lab_ <=> b.lab_;
  }

 private:
  void canonicalize() {
    std::array<uint16_t, 256> map;
    map.fill(0xFFFF);
    uint16_t next = 0;
    for (auto& c : lab_) {
      if (map[c] == 0xFFFF) map[c] = next++;
      c = static_cast<uint8_t>(map[c]);
    }
    nb_ = static_cast<uint8_t>(next);
  }

  uint32_t m_ = 0;
  uint32_t n_ = 0;
  std::vector<uint8_t> lab_;
  uint8_t nb_ = 0;

  friend Partition compose(const Partition&, const Partition&);
};

struct PartitionHash {
  std::size_t operator()(const Partition& p) const noexcept { return p.hash(); }
};

inline Partition makePartition(uint32_t m, uint32_t n, const std::vector<Block>& rawBlocks) {
  if (std::size_t(m) + n > Partition::kMaxVertices)
    fail(ErrorKind::OutOfRange, "m+n exceeds " + std::to_string(Partition::kMaxVertices));
  std::vector<int> lab(m + n, -1);
  int b = 0;
  for (const auto& blk : rawBlocks) {
    if (blk.empty()) fail(ErrorKind::OutOfRange, "empty block");
    for (int v : blk) {
      std::size_t idx;
      if (v > 0 && static_cast<uint32_t>(v) <= m)
        idx = static_cast<std::size_t>(v - 1);
      else if (v < 0 && static_cast<uint32_t>(-v) <= n)
        idx = m + static_cast<std::size_t>(-v - 1);
      else
        fail(ErrorKind::OutOfRange, "vertex " + std::to_string(v));
      if (lab[idx] >= 0) fail(ErrorKind::DuplicateVertex, "vertex " + std::to_string(v));
      lab[idx] = b;
    }
    ++b;
  }
  std::vector<uint8_t> labels(m + n);
  for (std::size_t i = 0; i < lab.size(); ++i) {
    if (lab[i] < 0) {
      int v = i < m ? static_cast<int>(i) + 1 : -static_cast<int>(i - m + 1);
      fail(ErrorKind::MissingVertex, "vertex " + std::to_string(v));
    }
    labels[i] = static_cast<uint8_t>(lab[i]);
  }
  return Partition::fromLabels(m, n, labels);
}

inline Partition identity(uint32_t n) {
  std::vector<uint8_t> lab(2 * n);
  for (uint32_t i = 0; i < n; ++i) lab[i] = lab[n + i] = static_cast<uint8_t>(i);
  return Partition::fromLabels(n, n, lab);
}

// images[i] = j means upper vertex i+1 is joined to lower vertex (j+1)'.
inline Partition permutation(const std::vector<uint32_t>& images) {
  uint32_t n = static_cast<uint32_t>(images.size());
  std::vector<uint8_t> lab(2 * n);
  for (uint32_t i = 0; i < n; ++i) {
    lab[i] = static_cast<uint8_t>(i);
    lab[n + images[i]] = static_cast<uint8_t>(i);
  }
  return Partition::fromLabels(n, n, lab);
}

inline Partition compose(const Partition& a, const Partition& b) {
  if (a.n_ != b.m_)
    fail(ErrorKind::ShapeMismatch,
         "cannot compose " + std::to_string(a.m_) + "x" + std::to_string(a.n_) + " with " +
             std::to_string(b.m_) + "x" + std::to_string(b.n_));
  const std::size_t na = a.nb_;
  std::array<uint16_t, 512> parent;
  for (std::size_t i = 0; i < na + b.nb_; ++i) parent[i] = static_cast<uint16_t>(i);
  auto find = [&](uint16_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t j = 0; j < a.n_; ++j) {
    uint16_t x = find(a.lab_[a.m_ + j]);
    uint16_t y = find(static_cast<uint16_t>(na + b.lab_[j]));
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
  Partition p;
  p.m_ = a.m_;
  p.n_ = b.n_;
  p.lab_.resize(a.m_ + b.n_);
  std::array<uint16_t, 512> map;
  std::fill(map.begin(), map.begin() + static_cast<std::ptrdiff_t>(na + b.nb_), 0xFFFF);
  uint16_t next = 0;
  auto assign = [&](uint16_t root) {
    if (map[root] == 0xFFFF) map[root] = next++;
    return static_cast<uint8_t>(map[root]);
  };
  for (std::size_t i = 0; i < a.m_; ++i) p.lab_[i] = assign(find(a.lab_[i]));
  for (std::size_t j = 0; j < b.n_; ++j)
    p.lab_[a.m_ + j] = assign(find(static_cast<uint16_t>(na + b.lab_[b.m_ + j])));
  p.nb_ = static_cast<uint8_t>(next);
  return p;
}

inline Partition involution(const Partition& a) {
  std::vector<uint8_t> lab;
  lab.reserve(a.size());
  lab.insert(lab.end(), a.labels().begin() + a.m(), a.labels().end());
  lab.insert(lab.end(), a.labels().begin(), a.labels().begin() + a.m());
  return Partition::fromLabels(a.n(), a.m(), lab);
}

struct PartitionStats {
  std::size_t rank = 0;
  std::vector<int> dom;
  std::vector<int> codom;
  std::vector<Block> ker;
  std::vector<Block> coker;
  std::vector<Block> upperNontransversals;
  std::vector<Block> lowerNontransversals;
};

// Lower-row vertices appear as positive integers in codom, coker and lowerNontransversals.
inline PartitionStats statistics(const Partition& a) {
  PartitionStats s;
  for (const auto& blk : a.blocks()) {
    Block up, down;
    for (int v : blk) (v > 0 ? up : down).push_back(v > 0 ? v : -v);
    if (!up.empty() && !down.empty()) {
      ++s.rank;
      s.dom.insert(s.dom.end(), up.begin(), up.end());
      s.codom.insert(s.codom.end(), down.begin(), down.end());
    } else if (!up.empty()) {
      s.upperNontransversals.push_back(up);
    } else {
      s.lowerNontransversals.push_back(down);
    }
    if (!up.empty()) s.ker.push_back(up);
    if (!down.empty()) s.coker.push_back(down);
  }
  std::sort(s.dom.begin(), s.dom.end());
  std::sort(s.codom.begin(), s.codom.end());
  std::sort(s.coker.begin(), s.coker.end());
  std::sort(s.lowerNontransversals.begin(), s.lowerNontransversals.end());
  return s;
}

namespace detail {

inline bool separated(const Block& x, const Block& y) { return x.back() < y.front() || y.back() < x.front(); }

// x lies strictly between two consecutive points of y.
inline bool nestedBy(const Block& x, const Block& y) {
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    if (y[i] < x.front() && x.back() < y[i + 1]) return true;
  return false;
}

inline bool laminar(const std::vector<Block>& blocks) {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j)
      if (!separated(blocks[i], blocks[j]) && !nestedBy(blocks[i], blocks[j]) &&
          !nestedBy(blocks[j], blocks[i]))
        return false;
  return true;
}

inline bool outsideOrNested(const std::vector<Block>& halves, const std::vector<Block>& nontrans) {
  for (const auto& h : halves)
    for (const auto& c : nontrans)
      if (!separated(h, c) && !nestedBy(c, h)) return false;
  return true;
}

}  // namespace detail

inline bool isPlanar(const Partition& a) {
  std::vector<Block> A, B, C, D;
  for (const auto& blk : a.blocks()) {
    Block up, down;
    for (int v : blk) (v > 0 ? up : down).push_back(v > 0 ? v : -v);
    std::sort(down.begin(), down.end());
    if (!up.empty() && !down.empty()) {
      A.push_back(up);
      B.push_back(down);
    } else if (!up.empty()) {
      C.push_back(up);
    } else {
      D.push_back(down);
    }
  }
  for (std::size_t i = 0; i + 1 < A.size(); ++i)
    if (!(A[i].back() < A[i + 1].front()) || !(B[i].back() < B[i + 1].front())) return false;
  return detail::laminar(C) && detail::laminar(D) && detail::outsideOrNested(A, C) &&
         detail::outsideOrNested(B, D);
}

inline bool inCategory(Tag tag, const Partition& a) {
  if (tag == Tag::P) return true;
  if (tag == Tag::PP) return isPlanar(a);
  std::array<uint16_t, 256> sz{};
  for (uint8_t c : a.labels()) ++sz[c];
  bool sizeOk = true;
  for (std::size_t b = 0; b < a.numBlocks(); ++b) {
    if (tag == Tag::B || tag == Tag::TL)
      sizeOk = sizeOk && sz[b] == 2;
    else
      sizeOk = sizeOk && sz[b] <= 2;
  }
  if (!sizeOk) return false;
  return tag == Tag::PB || tag == Tag::B || isPlanar(a);
}

// PP_mn -> TL_{2m,2n}: each vertex splits into two points and every block is traced around
// its boundary, following the cyclic order 1, ..., m, n', ..., 1'.
inline Partition ppToTl(const Partition& a) {
  if (!isPlanar(a)) fail(ErrorKind::NotPlanar, "ppToTl requires a planar partition");
  const uint32_t m = a.m(), n = a.n();
  const uint32_t M = 2 * m;
  auto cyclicPos = [&](int v) { return v > 0 ? v - 1 : static_cast<int>(m + n) + v; };
  auto first = [&](int v) -> std::size_t {
    return v > 0 ? static_cast<std::size_t>(2 * v - 2) : M + static_cast<std::size_t>(-2 * v - 1);
  };
  auto second = [&](int v) -> std::size_t {
    return v > 0 ? static_cast<std::size_t>(2 * v - 1) : M + static_cast<std::size_t>(-2 * v - 2);
  };
  std::vector<uint8_t> lab(2 * (m + n));
  uint8_t next = 0;
  for (auto blk : a.blocks()) {
    std::sort(blk.begin(), blk.end(), [&](int x, int y) { return cyclicPos(x) < cyclicPos(y); });
    for (std::size_t i = 0; i < blk.size(); ++i) {
      lab[second(blk[i])] = next;
      lab[first(blk[(i + 1) % blk.size()])] = next;
      ++next;
    }
  }
  return Partition::fromLabels(M, 2 * n, lab);
}

inline std::string toText(const Partition& a) {
  std::string s = std::to_string(a.m()) + " " + std::to_string(a.n());
  for (const auto& blk : a.blocks()) {
    s += " | ";
    for (std::size_t i = 0; i < blk.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(blk[i]);
    }
  }
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const Partition& a) { return os << toText(a); }

// Parses `m n | b1 | b2 | ...`; errors report the 1-based column of the offending token.
inline Partition parseText(std::string_view text) {
  std::size_t pos = 0;
  auto where = [&](std::size_t p) { return " at column " + std::to_string(p + 1); };
  auto skipSpace = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' || text[pos] == '\n'))
      ++pos;
  };
  auto readInt = [&](bool allowSign) -> long {
    skipSpace();
    std::size_t start = pos;
    if (allowSign && pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    std::size_t digits = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == digits) fail(ErrorKind::ParseError, "expected integer" + where(start));
    if (pos - digits > 6) fail(ErrorKind::ParseError, "integer too large" + where(start));
    return std::stol(std::string(text.substr(start, pos - start)));
  };
  long m = readInt(false);
  long n = readInt(false);
  if (m + n > static_cast<long>(Partition::kMaxVertices))
    fail(ErrorKind::OutOfRange, "m+n exceeds " + std::to_string(Partition::kMaxVertices));
  std::vector<Block> blocks;
  skipSpace();
  while (pos < text.size()) {
    if (text[pos] != '|') fail(ErrorKind::ParseError, "expected '|'" + where(pos));
    ++pos;
    Block blk;
    while (true) {
      long v = readInt(true);
      blk.push_back(static_cast<int>(v));
      skipSpace();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      break;
    }
    blocks.push_back(std::move(blk));
    skipSpace();
  }
  return makePartition(static_cast<uint32_t>(m), static_cast<uint32_t>(n), blocks);
}

}  // namespace diagramcat

template <>
struct std::hash<diagramcat::Partition> {
  std::size_t operator()(const diagramcat::Partition& p) const noexcept { return p.hash(); }
};
