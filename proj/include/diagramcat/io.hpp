#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "diagrams.hpp"
#include "error.hpp"
#include "sandwich.hpp"

namespace diagramcat {

using Json = nlohmann::json;

inline Json toJson(const Partition& a) {
  return Json{{"m", a.m()}, {"n", a.n()}, {"blocks", a.blocks()}};
}

inline Partition partitionFromJson(const Json& j) {
  if (j.is_string()) return parseText(j.get<std::string>());
  if (!j.is_object() || !j.contains("m") || !j.contains("n") || !j.contains("blocks"))
    fail(ErrorKind::ParseError, "partition object needs m, n and blocks");
  try {
    return makePartition(j.at("m").get<uint32_t>(), j.at("n").get<uint32_t>(),
                         j.at("blocks").get<std::vector<Block>>());
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, e.what());
  }
}

// Text form when the argument does not start with '{', JSON otherwise.
inline Partition parsePartition(const std::string& s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && s[first] == '{') {
    try {
      return partitionFromJson(Json::parse(s));
    } catch (const Json::parse_error& e) {
      fail(ErrorKind::ParseError, e.what());
    }
  }
  return parseText(s);
}

struct ContextSpec {
  Tag tag = Tag::P;
  uint32_t m = 0, n = 0;
  Partition sigma;
  bool oracle = false;
  std::string name;
};

inline ContextSpec contextSpecFromJson(const Json& j) {
  ContextSpec s;
  try {
    s.tag = parseTag(j.at("tag").get<std::string>());
    s.m = j.at("m").get<uint32_t>();
    s.n = j.at("n").get<uint32_t>();
    s.sigma = partitionFromJson(j.at("sigma"));
    s.oracle = j.value("oracle", false);
    s.name = j.value("name", std::string());
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, std::string("context spec: ") + e.what());
  }
  return s;
}

inline Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
}

// A file holding one spec object or an array of them.
inline std::vector<ContextSpec> readContextSpecs(const std::string& path) {
  Json j = readJsonFile(path);
  std::vector<ContextSpec> out;
  if (j.is_array())
    for (const auto& x : j) out.push_back(contextSpecFromJson(x));
  else
    out.push_back(contextSpecFromJson(j));
  return out;
}

inline SandwichContext makeContext(const ContextSpec& s) { return makeContext(s.tag, s.m, s.n, s.sigma); }

}  // namespace diagramcat
