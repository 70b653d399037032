#pragma once

// Batch experiment driver.  Expands the (ring x theorem x seed) matrix,
// evaluates instances on a bounded worker pool, and persists one CSV row per
// instance plus a JSON mirror, per-ring certificates, and a run manifest.
// One bad instance is recorded and skipped; a violated proof chain makes the
// whole run report failure.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fvr/config.hpp"
#include "fvr/report_io.hpp"

namespace fvr {

struct instance_result {
  std::size_t index = 0;
  std::string ring_text;
  theorem_id thm = theorem_id::mult;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error_text;
  expansion_report report;  // meaningful when ok
  double wall_ms = 0.0;
  // provenance for the JSON mirror
  std::string g_name, h_name;
  std::size_t domain_size = 0;
  std::vector<std::uint64_t> a_codes, b_codes, c_codes;
};

struct run_manifest {
  std::string config_hash;
  bool all_chains_ok = true;
  std::size_t instance_count = 0;
  std::size_t error_count = 0;
  double total_wall_ms = 0.0;
  std::vector<std::string> files;
  std::vector<instance_result> instances;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seeded partial Fisher-Yates draw of `size` codes from a pool.
inline std::vector<std::uint64_t> sample_pool(std::vector<std::uint64_t> pool, std::size_t size,
                                              std::uint64_t seed) {
  if (size > pool.size())
    throw domain_violation_error("sample size " + std::to_string(size) +
                                 " exceeds population " + std::to_string(pool.size()));
  std::uint64_t state = seed;
  auto next = [&state]() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t j = i + static_cast<std::size_t>(next() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(size);
  return pool;
}

struct ring_context {
  ring R;
  std::shared_ptr<sp_graph> graph;
  spectral_cert cert;
  std::string error_text;  // non-empty when the ring could not be certified
};

inline elem_set build_domain(const ring& R, const domain_descriptor& d, std::uint64_t seed,
                             std::uint64_t enum_cap) {
  if (d.kind == "units") {
    std::vector<std::uint64_t> codes;
    for (auto u : R.units(enum_cap)) codes.push_back(u.code);
    return elem_set(R, std::move(codes), set_provenance::subgroup);
  }
  if (d.kind == "subgroup") return subgroup_generate(R, R.elem(d.generator)).closure;
  // random-subgroup: closure of a seeded random unit
  auto pool = R.units(enum_cap);
  const std::uint64_t pick = mix_seed(seed, 0) % pool.size();
  return subgroup_generate(R, pool[pick]).closure;
}

inline elem_set build_set(const ring& R, const set_descriptor& d, const elem_set& population,
                          std::uint64_t seed, const std::string& role) {
  elem_set out = [&]() -> elem_set {
    if (d.kind == "random-units")
      return elem_set(R, sample_pool(population.codes(), d.size, seed),
                      set_provenance::random_units);
    if (d.kind == "all") return population;
    if (d.kind == "geometric")
      return geometric_set(R, R.elem(d.base), d.length,
                           d.has_start ? std::optional<ring_elem>(R.elem(d.start)) : std::nullopt);
    if (d.kind == "interval") return interval_set(R, d.start, d.size, d.units_only);
    return elem_set(R, d.codes);  // explicit
  }();
  if (!out.subset_of(population))
    throw domain_violation_error("set " + role + " is not contained in its population");
  return out;
}

inline func_table build_func(const elem_set& domain, const func_descriptor& d,
                             std::uint64_t seed) {
  const ring& R = domain.owner();
  if (d.kind == "identity") return func_table::identity_on(domain);
  if (d.kind == "monomial") return func_table::monomial_on(domain, d.k);
  if (d.kind == "constant") return func_table::constant_on(domain, R.elem(d.value));
  if (d.kind == "table") return func_table::from_pairs(domain, d.pairs);
  // random-table: seeded random unit values
  auto pool = R.units();
  std::vector<std::uint64_t> vals;
  vals.reserve(domain.size());
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    state = mix_seed(state, i + 1);
    vals.push_back(pool[state % pool.size()].code);
  }
  return func_table(domain, std::move(vals), "random-table");
}

inline std::string sanitize_filename(std::string s) {
  for (char& c : s)
    if (c == ':' || c == ',') c = '_';
  return s;
}

inline std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

inline instance_result run_instance(const experiment_config& cfg,
                                    const detail::ring_context& ctx, theorem_id thm,
                                    std::uint64_t seed) {
  instance_result res;
  res.ring_text = ctx.R.to_string();
  res.thm = thm;
  res.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (!ctx.error_text.empty()) throw error(ctx.error_text);
    const ring& R = ctx.R;
    elem_set G = detail::build_domain(R, cfg.domain, detail::mix_seed(seed, 11), cfg.enum_cap);
    func_table g = detail::build_func(G, cfg.func_g, detail::mix_seed(seed, 21));
    func_table h = detail::build_func(G, cfg.func_h, detail::mix_seed(seed, 22));

    // A always lives inside G; B and C are unit sets, constrained to G only
    // for the theorem that requires all three sets inside the subgroup.
    std::vector<std::uint64_t> unit_codes;
    for (auto u : R.units(cfg.enum_cap)) unit_codes.push_back(u.code);
    elem_set units(R, std::move(unit_codes), set_provenance::subgroup);
    const elem_set& bc_pop = thm == theorem_id::three_sets ? G : units;

    elem_set A = detail::build_set(R, cfg.set_a, G, detail::mix_seed(seed, 1), "A");
    elem_set B = detail::build_set(R, cfg.set_b, bc_pop, detail::mix_seed(seed, 2), "B");
    elem_set C = detail::build_set(R, cfg.set_c, bc_pop, detail::mix_seed(seed, 3), "C");
    res.g_name = g.name();
    res.h_name = h.name();
    res.domain_size = G.size();
    res.a_codes = A.codes();
    res.b_codes = B.codes();
    res.c_codes = C.codes();

    res.report = evaluate_theorem(*ctx.graph, ctx.cert, thm, g, &h, A, B, C);
    res.ok = true;
  } catch (const std::exception& e) {
    res.ok = false;
    res.error_text = e.what();
  }
  res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return res;
}

inline run_manifest run_experiment(const experiment_config& cfg) {
  namespace fs = std::filesystem;
  const auto t_start = std::chrono::steady_clock::now();
  run_manifest manifest;
  manifest.config_hash = [&] {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(cfg.source_text)));
    return std::string(buf);
  }();

  fs::create_directories(cfg.out_dir);

  // one graph + certificate per distinct ring
  std::vector<detail::ring_context> contexts;
  for (const std::string& text : cfg.rings) {
    detail::ring_context ctx{ring::parse(text), nullptr, {}, {}};
    try {
      ctx.graph = std::make_shared<sp_graph>(
          ctx.R,
          ctx.R.order() * ctx.R.order() <= cfg.max_n ? adjacency_mode::materialized
                                                     : adjacency_mode::implicit,
          std::max<std::uint64_t>(cfg.max_n, 1));
      ctx.cert = certify(*ctx.graph, cfg.max_n);
    } catch (const std::exception& e) {
      ctx.error_text = std::string("ring setup failed: ") + e.what();
    }
    contexts.push_back(std::move(ctx));
  }

  // write certificates for the rings that produced one
  for (const auto& ctx : contexts) {
    if (!ctx.error_text.empty()) continue;
    const std::string name = "cert-" + detail::sanitize_filename(ctx.R.to_string()) + ".json";
    const fs::path path = fs::path(cfg.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw error("cannot write " + path.string());
    out << cert_to_json(ctx.cert).dump(2) << '\n';
    manifest.files.push_back(name);
  }

  // instance matrix in config order: ring-major, then theorem, then seed
  struct job {
    std::size_t ring_index;
    theorem_id thm;
    std::uint64_t seed;
  };
  std::vector<job> jobs;
  for (std::size_t ri = 0; ri < contexts.size(); ++ri)
    for (theorem_id thm : cfg.theorems)
      for (std::uint64_t seed : cfg.seeds) jobs.push_back({ri, thm, seed});

  manifest.instances.resize(jobs.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) break;
      instance_result res = run_instance(cfg, contexts[jobs[i].ring_index], jobs[i].thm,
                                         jobs[i].seed);
      res.index = i;
      manifest.instances[i] = std::move(res);
    }
  };
  if (cfg.jobs <= 1 || jobs.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const unsigned count = std::min<std::size_t>(cfg.jobs, jobs.size());
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  manifest.instance_count = manifest.instances.size();
  for (const auto& res : manifest.instances) {
    if (!res.ok)
      ++manifest.error_count;
    else if (!res.report.chain_ok)
      manifest.all_chains_ok = false;
  }

  // CSV + JSON mirror (only when the run evaluates theorems).  An I/O
  // failure here still leaves a partial manifest behind.
  std::optional<error> io_failure;
  try {
    if (!cfg.theorems.empty()) {
      const fs::path csv_path = fs::path(cfg.out_dir) / "report.csv";
      std::ofstream csv(csv_path);
      if (!csv) throw error("cannot write " + csv_path.string());
      csv << "# fvr run " << detail::timestamp_utc() << '\n';
      csv << csv_header() << '\n';
      for (const auto& res : manifest.instances)
        if (res.ok) csv << csv_row(res.report) << '\n';
      manifest.files.push_back("report.csv");

      json mirror = json::array();
      for (const auto& res : manifest.instances) {
        json item;
        item["instance"] = {{"ring", res.ring_text},
                            {"theorem", theorem_name(res.thm)},
                            {"seed", res.seed}};
        if (res.ok) {
          item["instance"]["domain_size"] = res.domain_size;
          item["instance"]["g"] = res.g_name;
          item["instance"]["h"] = res.h_name;
          item["instance"]["A"] = res.a_codes;
          item["instance"]["B"] = res.b_codes;
          item["instance"]["C"] = res.c_codes;
        }
        item["status"] = res.ok ? "ok" : "error";
        if (res.ok)
          item["report"] = report_to_json(res.report);
        else
          item["error"] = res.error_text;
        mirror.push_back(std::move(item));
      }
      const fs::path json_path = fs::path(cfg.out_dir) / "report.json";
      std::ofstream js(json_path);
      if (!js) throw error("cannot write " + json_path.string());
      js << mirror.dump(2) << '\n';
      manifest.files.push_back("report.json");
    }
  } catch (const error& e) {
    io_failure = e;
  }

  manifest.total_wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
          .count();

  // manifest last: it lists exactly the files written above
  {
    json m;
    m["config_hash"] = manifest.config_hash;
    m["created"] = detail::timestamp_utc();
    m["all_chains_ok"] = manifest.all_chains_ok;
    m["instance_count"] = manifest.instance_count;
    m["error_count"] = manifest.error_count;
    m["total_wall_ms"] = manifest.total_wall_ms;
    json items = json::array();
    for (const auto& res : manifest.instances) {
      json it;
      it["index"] = res.index;
      it["ring"] = res.ring_text;
      it["theorem"] = theorem_name(res.thm);
      it["seed"] = res.seed;
      it["status"] = res.ok ? "ok" : "error";
      if (!res.ok) it["error"] = res.error_text;
      if (res.ok) it["chain_ok"] = res.report.chain_ok;
      it["wall_ms"] = res.wall_ms;
      items.push_back(std::move(it));
    }
    m["instances"] = std::move(items);
    m["files"] = manifest.files;
    const fs::path mpath = fs::path(cfg.out_dir) / "manifest.json";
    std::ofstream out(mpath);
    if (!out) throw error("cannot write " + mpath.string());
    m["files"].push_back("manifest.json");
    manifest.files.push_back("manifest.json");
    if (io_failure) m["io_failure"] = io_failure->what();
    out << m.dump(2) << '\n';
  }
  if (io_failure) throw *io_failure;
  return manifest;
}

}  // namespace fvr
