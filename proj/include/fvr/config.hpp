#pragma once

// Experiment configuration: JSON schema parsing with per-field validation.
// Every validation failure names the path of the offending field.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fvr/expansion.hpp"
#include "fvr/sp_graph.hpp"

namespace fvr {

class config_error : public error {
 public:
  config_error(const std::string& path, const std::string& what)
      : error("config error at " + path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct set_descriptor {
  std::string kind = "random-units";  // random-units | geometric | interval | explicit | all
  std::size_t size = 4;               // random-units, interval
  std::uint64_t base = 2;             // geometric
  bool has_start = false;
  std::uint64_t start = 0;  // geometric (optional), interval
  std::size_t length = 8;   // geometric
  bool units_only = true;   // interval
  std::vector<std::uint64_t> codes;  // explicit
};

struct func_descriptor {
  std::string kind = "identity";  // identity | monomial | constant | table | random-table
  unsigned k = 2;                 // monomial
  std::uint64_t value = 1;        // constant
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;  // table
};

struct domain_descriptor {
  std::string kind = "units";  // units | subgroup | random-subgroup
  std::uint64_t generator = 0;
};

struct experiment_config {
  std::vector<std::string> rings;
  std::vector<theorem_id> theorems;  // empty: certify-only run
  std::vector<std::uint64_t> seeds;
  set_descriptor set_a, set_b, set_c;
  func_descriptor func_g, func_h;
  domain_descriptor domain;
  std::string out_dir = "out";
  std::uint64_t max_n = sp_graph::default_materialize_cap;
  std::uint64_t enum_cap = ring::default_enum_cap;
  unsigned jobs = 1;
  std::string source_text;  // raw bytes, hashed into the manifest
};

namespace detail {

inline set_descriptor parse_set_descriptor(const nlohmann::json& j, const std::string& path) {
  set_descriptor d;
  if (!j.is_object()) throw config_error(path, "expected an object");
  if (j.contains("kind")) d.kind = j.at("kind").get<std::string>();
  if (d.kind != "random-units" && d.kind != "geometric" && d.kind != "interval" &&
      d.kind != "explicit" && d.kind != "all")
    throw config_error(path + "/kind", "unknown set kind \"" + d.kind + "\"");
  if (j.contains("size")) {
    if (!j.at("size").is_number_unsigned() || j.at("size").get<std::uint64_t>() == 0)
      throw config_error(path + "/size", "size must be a positive integer");
    d.size = j.at("size").get<std::size_t>();
  }
  if (j.contains("base")) d.base = j.at("base").get<std::uint64_t>();
  if (j.contains("start")) {
    d.has_start = true;
    d.start = j.at("start").get<std::uint64_t>();
  }
  if (j.contains("length")) d.length = j.at("length").get<std::size_t>();
  if (j.contains("units_only")) d.units_only = j.at("units_only").get<bool>();
  if (j.contains("codes")) {
    if (!j.at("codes").is_array()) throw config_error(path + "/codes", "expected an array");
    for (const auto& c : j.at("codes")) d.codes.push_back(c.get<std::uint64_t>());
  }
  if (d.kind == "explicit" && !j.contains("codes"))
    throw config_error(path + "/codes", "explicit set needs a codes array");
  return d;
}

inline func_descriptor parse_func_descriptor(const nlohmann::json& j, const std::string& path) {
  func_descriptor d;
  if (!j.is_object()) throw config_error(path, "expected an object");
  if (j.contains("func")) d.kind = j.at("func").get<std::string>();
  if (d.kind != "identity" && d.kind != "monomial" && d.kind != "constant" && d.kind != "table" &&
      d.kind != "random-table")
    throw config_error(path + "/func", "unknown function kind \"" + d.kind + "\"");
  if (j.contains("k")) d.k = j.at("k").get<unsigned>();
  if (j.contains("value")) d.value = j.at("value").get<std::uint64_t>();
  if (j.contains("pairs")) {
    if (!j.at("pairs").is_array()) throw config_error(path + "/pairs", "expected an array");
    for (const auto& pr : j.at("pairs")) {
      if (!pr.is_array() || pr.size() != 2)
        throw config_error(path + "/pairs", "each entry must be a [key, value] pair");
      d.pairs.emplace_back(pr[0].get<std::uint64_t>(), pr[1].get<std::uint64_t>());
    }
  }
  if (d.kind == "table" && d.pairs.empty())
    throw config_error(path + "/pairs", "table function needs a non-empty pairs array");
  return d;
}

}  // namespace detail

inline experiment_config parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error("/", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("/", "top level must be an object");

  experiment_config cfg;
  cfg.source_text = text;

  if (j.contains("ring")) cfg.rings.push_back(j.at("ring").get<std::string>());
  if (j.contains("rings"))
    for (const auto& r : j.at("rings")) cfg.rings.push_back(r.get<std::string>());
  if (cfg.rings.empty()) throw config_error("/rings", "missing required field: ring or rings");
  for (std::size_t i = 0; i < cfg.rings.size(); ++i) {
    try {
      (void)ring::parse(cfg.rings[i]);
    } catch (const error& e) {
      throw config_error("/rings[" + std::to_string(i) + "]", e.what());
    }
  }

  if (j.contains("theorem")) cfg.theorems.push_back(parse_theorem(j.at("theorem").get<std::string>()));
  if (j.contains("theorems")) {
    for (const auto& t : j.at("theorems")) {
      try {
        cfg.theorems.push_back(parse_theorem(t.get<std::string>()));
      } catch (const error& e) {
        throw config_error("/theorems", e.what());
      }
    }
  }

  if (j.contains("seeds")) {
    for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
    if (cfg.seeds.empty()) throw config_error("/seeds", "seed list must be non-empty");
  } else if (j.contains("seed")) {
    const std::uint64_t base = j.at("seed").get<std::uint64_t>();
    std::uint64_t instances = 1;
    if (j.contains("instances")) instances = j.at("instances").get<std::uint64_t>();
    if (instances == 0) throw config_error("/instances", "instances must be positive");
    for (std::uint64_t i = 0; i < instances; ++i) cfg.seeds.push_back(base + i);
  } else {
    throw config_error("/seed", "missing required field: seed (or seeds)");
  }

  if (j.contains("sets")) {
    const auto& sets = j.at("sets");
    if (sets.contains("A")) cfg.set_a = detail::parse_set_descriptor(sets.at("A"), "/sets/A");
    if (sets.contains("B")) cfg.set_b = detail::parse_set_descriptor(sets.at("B"), "/sets/B");
    if (sets.contains("C")) cfg.set_c = detail::parse_set_descriptor(sets.at("C"), "/sets/C");
  }
  if (j.contains("functions")) {
    const auto& fns = j.at("functions");
    if (fns.contains("g")) cfg.func_g = detail::parse_func_descriptor(fns.at("g"), "/functions/g");
    if (fns.contains("h")) cfg.func_h = detail::parse_func_descriptor(fns.at("h"), "/functions/h");
  } else {
    // default h = 1 pairs naturally with the default g = identity
    cfg.func_h.kind = "constant";
    cfg.func_h.value = 1;
  }
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    if (d.contains("kind")) cfg.domain.kind = d.at("kind").get<std::string>();
    if (cfg.domain.kind != "units" && cfg.domain.kind != "subgroup" &&
        cfg.domain.kind != "random-subgroup")
      throw config_error("/domain/kind", "unknown domain kind \"" + cfg.domain.kind + "\"");
    if (cfg.domain.kind == "subgroup") {
      if (!d.contains("generator"))
        throw config_error("/domain/generator", "subgroup domain needs a generator");
      cfg.domain.generator = d.at("generator").get<std::uint64_t>();
    }
  }

  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("jobs")) {
    cfg.jobs = j.at("jobs").get<unsigned>();
    if (cfg.jobs == 0) throw config_error("/jobs", "jobs must be positive");
  }
  if (j.contains("caps")) {
    const auto& caps = j.at("caps");
    if (caps.contains("max_n")) cfg.max_n = caps.at("max_n").get<std::uint64_t>();
    if (caps.contains("enumeration")) cfg.enum_cap = caps.at("enumeration").get<std::uint64_t>();
  }
  return cfg;
}

}  // namespace fvr
