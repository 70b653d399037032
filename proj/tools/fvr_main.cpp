// fvr: finite valuation rings, sum-product graph certification, and
// expanding-bound experiments.
//
//   fvr certify         --ring zpr:5,2 --out cert.json
//   fvr experiment      --config cfg.json [--out dir] [--jobs N]
//   fvr probe-sharpness --ring zpr:101,1 --base 2 --length 21
//   fvr vinh-check      --ring zpr:101,1 --size 10 --count 100 --seed 7

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fvr/report_io.hpp"
#include "fvr/runner.hpp"

namespace {

int do_certify(const std::string& ring_text, const std::string& mode_text,
               const std::string& out_path, std::uint64_t max_n) {
  fvr::ring R = fvr::ring::parse(ring_text);
  const fvr::adjacency_mode mode = mode_text == "implicit" ? fvr::adjacency_mode::implicit
                                                           : fvr::adjacency_mode::materialized;
  fvr::sp_graph graph(R, mode, max_n);
  fvr::spectral_cert cert = fvr::certify(graph, max_n);
  fvr::json j = fvr::cert_to_json(cert);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << j.dump(2) << '\n';
  } else {
    std::cout << j.dump(2) << '\n';
  }
  std::cout << "certified " << ring_text << ": n=" << cert.n << " d=" << cert.d
            << " lambda=" << fvr::format_double(cert.lambda)
            << " bound=" << fvr::format_double(cert.bound)
            << (cert.bound_nontrivial ? " (nontrivial)" : " (trivial at this size)")
            << " loops=" << cert.loops << '\n';
  return cert.bound_holds ? 0 : 1;
}

int do_experiment(const std::string& config_path, const std::string& out_override,
                  unsigned jobs_override, bool has_seed_override, std::uint64_t seed_override,
                  std::uint64_t max_n_override, bool has_max_n) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot read config " << config_path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  fvr::experiment_config cfg = fvr::parse_config(buf.str());
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (jobs_override != 0) cfg.jobs = jobs_override;
  if (has_seed_override) cfg.seeds = {seed_override};
  if (has_max_n) cfg.max_n = max_n_override;
  if (const char* cap = std::getenv("FVR_ENUM_CAP")) cfg.enum_cap = std::strtoull(cap, nullptr, 10);

  fvr::run_manifest manifest = fvr::run_experiment(cfg);
  std::cout << "instances: " << manifest.instance_count << " errors: " << manifest.error_count
            << " chains: " << (manifest.all_chains_ok ? "ok" : "VIOLATED") << '\n';
  for (const auto& f : manifest.files) std::cout << "  wrote " << cfg.out_dir << "/" << f << '\n';
  return manifest.all_chains_ok ? 0 : 1;
}

int do_sharpness(const std::string& ring_text, std::uint64_t base, std::size_t length,
                 std::int64_t start, const std::string& out_path) {
  fvr::ring R = fvr::ring::parse(ring_text);
  std::optional<fvr::ring_elem> start_elem;
  if (start >= 0) start_elem = R.elem(static_cast<std::uint64_t>(start));
  fvr::sharpness_report rep = fvr::sharpness_probe(R, R.elem(base), length, start_elem);
  fvr::json j = fvr::sharpness_to_json(rep);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << j.dump(2) << '\n';
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int do_vinh(const std::string& ring_text, std::size_t size, unsigned count, std::uint64_t seed,
            const std::string& out_path) {
  fvr::ring R = fvr::ring::parse(ring_text);
  fvr::json rows = fvr::json::array();
  unsigned violations = 0;
  double min_slack = 0.0;
  bool first = true;
  for (unsigned i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    const std::size_t draw = size > 0 ? size : 1 + s % R.order();
    fvr::elem_set A = fvr::random_subset(R, std::min<std::size_t>(draw, R.order()), s);
    fvr::vinh_report rep = fvr::vinh_field_check(A);
    if (!rep.ok) ++violations;
    if (first || rep.slack < min_slack) min_slack = rep.slack;
    first = false;
    fvr::json j = fvr::vinh_to_json(rep);
    j["seed"] = s;
    rows.push_back(std::move(j));
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << rows.dump(2) << '\n';
  }
  std::cout << "vinh-check " << ring_text << ": " << count << " subsets, " << violations
            << " violations, min slack " << fvr::format_double(min_slack) << '\n';
  return violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sum-product graphs over finite valuation rings: exact structure checks, "
               "spectral certificates, and expanding-bound experiments"};
  app.require_subcommand(1);

  std::string ring_text, mode_text = "materialized", out_path, config_path;
  std::uint64_t max_n = fvr::sp_graph::default_materialize_cap;
  unsigned jobs = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;

  auto* certify = app.add_subcommand("certify", "build the graph and certify its spectrum");
  certify->add_option("--ring", ring_text, "ring spec, e.g. zpr:5,2 or polyq:3,2,0,1")->required();
  certify->add_option("--mode", mode_text, "adjacency mode: implicit|materialized")
      ->check(CLI::IsMember({"implicit", "materialized"}));
  certify->add_option("--out", out_path, "certificate JSON path");
  certify->add_option("--max-n", max_n, "vertex cap for dense spectra")->envname("FVR_MAX_N");

  std::string exp_out;
  auto* experiment = app.add_subcommand("experiment", "run a config-driven experiment matrix");
  experiment->add_option("--config", config_path, "JSON experiment config")->required();
  experiment->add_option("--out", exp_out, "output directory (overrides config)");
  experiment->add_option("--jobs", jobs, "worker threads (overrides config)");
  auto* seed_opt =
      experiment->add_option("--seed", seed, "replace the config seed list with one seed");
  std::uint64_t exp_max_n = 0;
  auto* max_n_opt = experiment->add_option("--max-n", exp_max_n, "vertex cap override")
                        ->envname("FVR_MAX_N");

  std::uint64_t base = 2;
  std::size_t length = 0;
  std::int64_t start = -1;
  auto* sharp = app.add_subcommand("probe-sharpness",
                                   "geometric-progression ratio probe for f = xy(x+y)");
  sharp->add_option("--ring", ring_text, "prime field, e.g. zpr:101,1")->required();
  sharp->add_option("--base", base, "progression base");
  sharp->add_option("--length", length, "progression length")->required();
  sharp->add_option("--start", start, "progression start (defaults to base)");
  sharp->add_option("--out", out_path, "report JSON path");

  std::size_t vsize = 0;
  unsigned vcount = 100;
  auto* vinh = app.add_subcommand("vinh-check",
                                  "field sum-product inequality over seeded subsets");
  vinh->add_option("--ring", ring_text, "prime field, e.g. zpr:101,1")->required();
  vinh->add_option("--size", vsize, "subset size (0: seeded random sizes)");
  vinh->add_option("--count", vcount, "number of subsets");
  vinh->add_option("--seed", seed, "base seed")->required();
  vinh->add_option("--out", out_path, "per-subset JSON path");

  CLI11_PARSE(app, argc, argv);
  seed_given = seed_opt->count() > 0;

  try {
    if (certify->parsed()) return do_certify(ring_text, mode_text, out_path, max_n);
    if (experiment->parsed())
      return do_experiment(config_path, exp_out, jobs, seed_given, seed,
                           exp_max_n, max_n_opt->count() > 0 || exp_max_n != 0);
    if (sharp->parsed()) return do_sharpness(ring_text, base, length, start, out_path);
    if (vinh->parsed()) return do_vinh(ring_text, vsize, vcount, seed, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
