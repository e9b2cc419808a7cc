#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "brauer.hpp"
#include "diagrams.hpp"
#include "homsets.hpp"
#include "io.hpp"
#include "sandwich.hpp"
#include "semigroups.hpp"

namespace diagramcat::cli {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

inline std::string integerString(const Integer& x) { return x.str(); }

struct AnalyzeOptions {
  bool oracle = false;
  bool exactRank = false;
  std::size_t maxReg = 6000;
};

// JSON report for one sandwich context; `ok` turns false when a requested cross-check disagrees.
inline Json analyzeContext(const SandwichContext& c, const AnalyzeOptions& opt, bool& ok) {
  Json rep;
  rep["schema"] = 1;
  rep["tag"] = tagName(c.tag);
  rep["m"] = c.m;
  rep["n"] = c.n;
  rep["sigma"] = toText(c.sigma);
  rep["r"] = c.r;
  rep["homsetSize"] = c.size();
  auto ps = pSets(c);
  Json pj{{"p1", ps.size1}, {"p2", ps.size2}, {"p3", ps.size3}, {"p", ps.size}};
  if (ps.joinAgrees) {
    pj["joinAgrees"] = *ps.joinAgrees;
    ok = ok && *ps.joinAgrees;
  }
  rep["pSets"] = pj;

  auto g = sandwichGreen(c, ps);
  auto inv = inverseSets(c);
  std::vector<char> idem(c.size(), 0);
  for (Index i : inv.post) idem[i] = 1;
  Json classes = Json::array();
  for (auto [q, dc] : g.regularD) {
    std::set<uint32_t> rs, ls, hs, rh, lh;
    std::size_t size = 0, e = 0;
    for (Index i = 0; i < c.size(); ++i) {
      if (g.d[i] != dc) continue;
      ++size;
      e += idem[i];
      rs.insert(g.r[i]);
      ls.insert(g.l[i]);
      hs.insert(g.h[i]);
      rh.insert(g.rHat[i]);
      lh.insert(g.lHat[i]);
    }
    classes.push_back({{"q", q}, {"size", size}, {"rClasses", rs.size()}, {"lClasses", ls.size()},
                       {"hClasses", hs.size()}, {"rHatClasses", rh.size()}, {"lHatClasses", lh.size()},
                       {"idempotents", e}});
  }
  rep["green"] = {{"numR", g.numR}, {"numL", g.numL}, {"numH", g.numH}, {"numD", g.numD}, {"regularClasses", classes}};
  rep["idempotents"] = inv.post.size();
  rep["inverseSets"] = {{"pre", inv.pre.size()},
                        {"post", inv.post.size()},
                        {"v", inv.v.size()},
                        {"ri", inv.ri.size()},
                        {"li", inv.li.size()}};

  auto mc = maximalJClasses(c, ps, inv);
  Json mj{{"trivial", mc.trivial.size()}};
  mj["nontrivial"] = mc.nontrivial ? Json(mc.nontrivial->size()) : Json(nullptr);
  if (!mc.shape.empty()) mj["shape"] = mc.shape;
  rep["maximalClasses"] = mj;
  auto minimal = minimalIdeal(c);
  rep["minimalIdeal"] = {{"rank", minimal.empty() ? Json(nullptr) : Json(c.element(minimal[0]).rank())},
                         {"size", minimal.size()}};

  if (ps.size > 0 && ps.size <= opt.maxReg) {
    auto reg = starSemigroup(c, ps.members());
    auto rg = greenStructure(reg);
    rep["miDominated"] = isMIDominated(reg, rg).dominated;
    rep["midIdentities"] = midIdentities(reg).size();
    Json ideals = Json::array();
    for (long q : c.Q) {
      auto st = idealIdempotentStatus(c, ps, q);
      ideals.push_back({{"q", q},
                        {"size", st.idealSize},
                        {"isEGenerated", st.isEGenerated},
                        {"byTopClass", st.byTopClass},
                        {"topClosureSize", st.topClosureSize}});
    }
    rep["ideals"] = ideals;
    rep["mu"] = {{"table", muTable(c.tag, c.r)}, {"effective", muEffective(c.tag, c.r)}};
    auto eg = idempotentGenerated(c, ps, inv);
    Json ej{{"size", eg.closure.size()},
            {"description", eg.description},
            {"matchesPsiPreimage", eg.closure == eg.psiPreimage}};
    if (eg.closedForm) {
      ej["matchesClosedForm"] = *eg.closedForm == eg.closure;
      ok = ok && *eg.closedForm == eg.closure;
    }
    ok = ok && eg.closure == eg.psiPreimage;
    rep["idempotentGenerated"] = ej;
    if (opt.exactRank) rep["regRankExact"] = exactRank(reg, rg).rank;
  }

  if (c.tag == Tag::B) {
    BrauerParams p{long(c.m), long(c.n), c.r};
    Json bj{{"regSize", integerString(regSize(p))},
            {"idempotentCount", integerString(idempotentCount(p))},
            {"sandwichRank", integerString(sandwichRank(p))},
            {"regRank", integerString(regRank(p))}};
    auto eg = eGenRanks(p);
    bj["eGenRank"] = integerString(eg.rank);
    bj["eGenIdrank"] = integerString(eg.idrank);
    Json ir = Json::object();
    for (long q : c.Q)
      if (q < c.r) ir[std::to_string(q)] = integerString(idealRank(p, q));
    bj["idealRanks"] = ir;
    rep["brauer"] = bj;
  }

  if (opt.oracle) {
    auto s = starSemigroup(c);
    auto e = greenStructure(s);
    bool agree = e.r == g.r && e.l == g.l && e.h == g.h && e.d == g.d;
    rep["oracle"] = {{"agrees", agree}};
    ok = ok && agree;
  }
  return rep;
}

inline std::string eggboxForContext(const SandwichContext& c, bool regularOnly, bool labels, const std::string& name) {
  std::vector<Index> members;
  if (regularOnly) members = pSets(c).members();
  auto s = starSemigroup(c, members);
  auto g = greenStructure(s);
  auto E = eggbox(g);
  DotOptions opts;
  opts.graphName = name;
  if (labels) opts.elementLabel = [&](Index i) { return toText(s.element(i)); };
  opts.classLabel = [&](const EggboxClass& k) {
    return "D" + std::to_string(s.element(g.dMembers[k.dId][0]).rank());
  };
  return eggboxDot(E, opts);
}

inline std::string eggboxForMonoid(Tag tag, uint32_t n, bool regularOnly, bool labels) {
  return eggboxForContext(makeContext(tag, n, n, identity(n)), regularOnly, labels, "eggbox");
}

inline std::vector<Partition> elementsOfRank(Tag tag, uint32_t rows, uint32_t cols, long rank) {
  std::vector<Partition> out;
  for (const auto& x : enumerate(tag, rows, cols).elements)
    if (long(x.rank()) == rank) out.push_back(x);
  return out;
}

// Groups of positions whose semigroups are isomorphic (or anti-isomorphic when `anti`).
inline std::vector<std::vector<std::size_t>> isoClasses(const std::vector<SandwichContext>& cs, bool anti) {
  std::vector<FiniteSemigroup<Partition, PartitionHash>> sg;
  for (const auto& c : cs) sg.push_back(starSemigroup(c));
  std::vector<std::vector<std::size_t>> classes;
  std::vector<char> placed(cs.size(), 0);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (placed[i]) continue;
    classes.push_back({i});
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      if (placed[j]) continue;
      if (isomorphic(sg[i], sg[j]) || (anti && isomorphic(sg[i], sg[j], IsoMode::AntiIso))) {
        placed[j] = 1;
        classes.back().push_back(j);
      }
    }
  }
  return classes;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diagram categories and their sandwich semigroups"};
  app.require_subcommand(1);

  std::string lhs, rhs;
  bool composeJson = false;
  auto* composeCmd = app.add_subcommand("compose", "Compose two partitions");
  composeCmd->add_option("alpha", lhs, "first partition, text or JSON")->required();
  composeCmd->add_option("beta", rhs, "second partition, text or JSON")->required();
  composeCmd->add_flag("--json", composeJson, "print JSON");

  std::string tagText;
  uint32_t em = 0, en = 0;
  bool countOnly = false, enumJson = false;
  auto* enumCmd = app.add_subcommand("enumerate", "List a hom-set");
  enumCmd->add_option("tag", tagText, "P, PB, B, PP, M or TL")->required();
  enumCmd->add_option("m", em)->required();
  enumCmd->add_option("n", en)->required();
  enumCmd->add_flag("--count", countOnly, "print only the size");
  enumCmd->add_flag("--json", enumJson, "print a JSON array");

  std::string specPath;
  AnalyzeOptions aopt;
  auto* analyzeCmd = app.add_subcommand("analyze", "Report on a sandwich semigroup");
  analyzeCmd->add_option("spec", specPath, "context spec JSON file")->required();
  analyzeCmd->add_flag("--oracle", aopt.oracle, "cross-check Green classes against the Cayley graphs");
  analyzeCmd->add_flag("--exact-rank", aopt.exactRank, "compute the rank of Reg by search");
  analyzeCmd->add_option("--max-reg", aopt.maxReg, "skip engine checks above this size of Reg");

  std::string eggSpec, outDir, eggTag;
  std::vector<std::string> eggMonoid;
  uint32_t eggRows = 0, eggCols = 0;
  long sigmaRank = -1;
  bool regularOnly = false, labels = false;
  auto* eggCmd = app.add_subcommand("eggbox", "Eggbox diagram in DOT");
  eggCmd->add_option("spec", eggSpec, "context spec JSON file");
  eggCmd->add_option("--monoid", eggMonoid, "diagram monoid given as TAG N")->expected(2);
  eggCmd->add_option("--tag", eggTag, "tag for --sigma-rank");
  eggCmd->add_option("--m", eggRows, "m for --sigma-rank");
  eggCmd->add_option("--n", eggCols, "n for --sigma-rank");
  eggCmd->add_option("--sigma-rank", sigmaRank, "one diagram per sandwich element of this rank");
  eggCmd->add_option("--out-dir", outDir, "directory for --sigma-rank output");
  eggCmd->add_flag("--regular-only", regularOnly, "restrict to the regular elements");
  eggCmd->add_flag("--labels", labels, "list elements in cells");

  std::string vTag = "B", report = "csv";
  long maxSize = 12;
  auto* verifyCmd = app.add_subcommand("verify", "Formula-versus-enumeration checks");
  verifyCmd->add_option("--tag", vTag, "category (B)");
  verifyCmd->add_option("--max-size", maxSize, "largest m+n");
  verifyCmd->add_option("--report", report, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> isoSpecs;
  bool withAnti = false;
  std::string isoTag;
  uint32_t isoRows = 0, isoCols = 0;
  long isoRank = -1;
  auto* isoCmd = app.add_subcommand("classify-iso", "Group sandwich semigroups by isomorphism");
  isoCmd->add_option("specs", isoSpecs, "context spec files");
  isoCmd->add_flag("--anti", withAnti, "also identify anti-isomorphic semigroups");
  isoCmd->add_option("--tag", isoTag, "tag for --sigma-rank");
  isoCmd->add_option("--m", isoRows, "m for --sigma-rank");
  isoCmd->add_option("--n", isoCols, "n for --sigma-rank");
  isoCmd->add_option("--sigma-rank", isoRank, "use every sandwich element of this rank");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*composeCmd) {
      auto p = compose(parsePartition(lhs), parsePartition(rhs));
      out << (composeJson ? toJson(p).dump() : toText(p)) << '\n';
      return kOk;
    }
    if (*enumCmd) {
      auto hs = enumerate(parseTag(tagText), em, en);
      if (countOnly) {
        out << hs.size() << '\n';
      } else if (enumJson) {
        Json arr = Json::array();
        for (const auto& x : hs.elements) arr.push_back(toJson(x));
        out << arr.dump() << '\n';
      } else {
        for (const auto& x : hs.elements) out << toText(x) << '\n';
      }
      return kOk;
    }
    if (*analyzeCmd) {
      bool ok = true;
      auto specs = readContextSpecs(specPath);
      Json reports = Json::array();
      for (const auto& s : specs) {
        AnalyzeOptions o = aopt;
        o.oracle = o.oracle || s.oracle;
        reports.push_back(analyzeContext(makeContext(s), o, ok));
      }
      out << (reports.size() == 1 ? reports[0] : reports).dump(2) << '\n';
      return ok ? kOk : kCheckFailed;
    }
    if (*eggCmd) {
      if (sigmaRank >= 0) {
        if (eggTag.empty() || outDir.empty()) {
          err << "--sigma-rank needs --tag, --m, --n and --out-dir\n";
          return kUsage;
        }
        Tag tag = parseTag(eggTag);
        std::filesystem::create_directories(outDir);
        auto hs = std::make_shared<const HomSet>(enumerate(tag, eggRows, eggCols));
        auto sigmas = elementsOfRank(tag, eggCols, eggRows, sigmaRank);
        for (std::size_t k = 0; k < sigmas.size(); ++k) {
          auto c = makeContext(tag, eggRows, eggCols, sigmas[k], hs);
          std::string name = "variant_" + std::to_string(k + 1);
          std::ofstream f(std::filesystem::path(outDir) / (name + ".dot"));
          f << "// sigma = " << toText(sigmas[k]) << '\n' << eggboxForContext(c, regularOnly, labels, name);
          out << name << ".dot " << toText(sigmas[k]) << '\n';
        }
        return kOk;
      }
      if (!eggMonoid.empty()) {
        uint32_t degree = 0;
        try {
          degree = uint32_t(std::stoul(eggMonoid[1]));
        } catch (const std::exception&) {
          err << "--monoid expects TAG N\n";
          return kUsage;
        }
        out << eggboxForMonoid(parseTag(eggMonoid[0]), degree, regularOnly, labels);
        return kOk;
      }
      if (eggSpec.empty()) {
        err << "eggbox needs a spec file, --monoid or --sigma-rank\n";
        return kUsage;
      }
      auto specs = readContextSpecs(eggSpec);
      for (const auto& s : specs) out << eggboxForContext(makeContext(s), regularOnly, labels, "eggbox");
      return kOk;
    }
    if (*verifyCmd) {
      if (parseTag(vTag) != Tag::B) {
        err << "verify supports --tag B only\n";
        return kUsage;
      }
      auto rep = verifySuite(maxSize);
      if (report == "csv") {
        out << rep.csv();
      } else {
        Json rows = Json::array();
        for (const auto& r : rep.rows)
          rows.push_back({{"tag", r.tag},
                          {"m", r.m},
                          {"n", r.n},
                          {"r", r.r},
                          {"check", r.formula},
                          {"formula", r.formulaValue},
                          {"bruteforce", r.bruteValue},
                          {"match", r.match},
                          {"counts", r.check}});
        out << Json{{"schema", 1}, {"pass", rep.allPass()}, {"rows", rows}}.dump(2) << '\n';
      }
      return rep.allPass() ? kOk : kCheckFailed;
    }
    if (*isoCmd) {
      std::vector<SandwichContext> cs;
      std::vector<std::string> names;
      if (isoRank >= 0) {
        if (isoTag.empty()) {
          err << "--sigma-rank needs --tag, --m and --n\n";
          return kUsage;
        }
        Tag tag = parseTag(isoTag);
        auto hs = std::make_shared<const HomSet>(enumerate(tag, isoRows, isoCols));
        for (const auto& s : elementsOfRank(tag, isoCols, isoRows, isoRank)) {
          cs.push_back(makeContext(tag, isoRows, isoCols, s, hs));
          names.push_back(toText(s));
        }
      }
      for (const auto& path : isoSpecs)
        for (const auto& s : readContextSpecs(path)) {
          cs.push_back(makeContext(s));
          names.push_back(s.name.empty() ? toText(s.sigma) : s.name);
        }
      if (cs.empty()) {
        err << "classify-iso needs spec files or --sigma-rank\n";
        return kUsage;
      }
      Json classes = Json::array();
      for (const auto& cls : isoClasses(cs, withAnti)) {
        Json members = Json::array();
        for (std::size_t i : cls) members.push_back(names[i]);
        classes.push_back(members);
      }
      out << Json{{"count", classes.size()}, {"anti", withAnti}, {"classes", classes}}.dump(2) << '\n';
      return kOk;
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace diagramcat::cli
