// Acceptance suite: every release criterion in one binary, one pass/fail
// line per criterion, nonzero exit if any fails.  Time limits are asserted
// alongside the numeric checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fvr/runner.hpp"

using namespace fvr;

namespace {

struct criterion_outcome {
  bool pass = true;
  std::string detail;
};

struct check_context {
  criterion_outcome out;
  void require(bool cond, const std::string& what) {
    if (!cond && out.pass) {
      out.pass = false;
      out.detail = what;
    }
  }
};

int g_failures = 0;

void run_criterion(int index, const char* name, double limit_seconds,
                   const std::function<void(check_context&)>& body) {
  check_context ctx;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(ctx);
  } catch (const std::exception& e) {
    ctx.require(false, std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > limit_seconds)
    ctx.require(false, "time limit exceeded");
  const bool pass = ctx.out.pass;
  if (!pass) ++g_failures;
  std::printf("[%s] criterion %d: %s (%.2fs < %.0fs)%s%s\n", pass ? "PASS" : "FAIL", index, name,
              secs, limit_seconds, pass ? "" : " -- ", pass ? "" : ctx.out.detail.c_str());
  std::fflush(stdout);
}

ring f3x2() { return ring::polynomial_quotient(3, 2, {0, 1}); }
ring f5x2() { return ring::polynomial_quotient(5, 2, {0, 1}); }

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t acc = 1;
  while (e--) acc *= b;
  return acc;
}

// deterministic helper for seeded subsets of arbitrary vertex/element pools
std::vector<std::uint64_t> sample(std::vector<std::uint64_t> pool, std::size_t size,
                                  std::uint64_t seed) {
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

void criterion_ring_correctness(check_context& ctx) {
  for (ring R : {ring::integer_modular(3, 2), ring::integer_modular(3, 3), f3x2(), f5x2()}) {
    const std::string name = R.to_string();
    ctx.require(R.order() == ipow(R.q(), R.r()), name + ": |R| != q^r");
    ctx.require(R.unit_count() == ipow(R.q(), R.r()) - ipow(R.q(), R.r() - 1),
                name + ": |R*| != q^r - q^{r-1}");
    auto all = R.elements();
    ctx.require(all.size() == R.order(), name + ": enumeration size");
    ctx.require(R.units().size() == R.unit_count(), name + ": unit enumeration size");
    for (unsigned k = 0; k <= R.r(); ++k) {
      std::size_t count = 0;
      for (auto x : all)
        if (R.valuation(x) >= k) ++count;
      ctx.require(count == ipow(R.q(), R.r() - k), name + ": ideal size at k=" + std::to_string(k));
    }
    for (auto x : all) {
      if (x.code == 0) continue;
      const unsigned vx = R.valuation(x);
      for (auto y : all) {
        if (y.code == 0) continue;
        const unsigned expected = std::min(vx + R.valuation(y), R.r());
        if (R.valuation(R.mul(x, y)) != expected) {
          ctx.require(false, name + ": valuation product law failed");
          return;
        }
      }
    }
  }
}

void criterion_common_neighbors(check_context& ctx) {
  for (ring R : {ring::integer_modular(3, 2), f3x2()}) {
    sp_graph g(R, adjacency_mode::implicit);
    for (std::uint64_t u = 0; u < g.n(); ++u)
      for (std::uint64_t v = 0; v < g.n(); ++v)
        if (g.common_neighbors_closed_form(u, v) != g.common_neighbors_bruteforce(u, v)) {
          ctx.require(false, R.to_string() + ": mismatch at (" + std::to_string(u) + "," +
                                 std::to_string(v) + ")");
          return;
        }
  }
}

void criterion_a2_identity(check_context& ctx) {
  for (ring R : {ring::integer_modular(3, 1), ring::integer_modular(3, 2),
                 ring::integer_modular(5, 2), f3x2()}) {
    sp_graph g(R, adjacency_mode::materialized);
    auto rep = verify_a2_identity(g);
    ctx.require(rep.identity_ok && rep.max_deviation == 0,
                R.to_string() + ": A^2 identity deviation " + std::to_string(rep.max_deviation));
    ctx.require(rep.row_sum_bounds_ok, R.to_string() + ": E/F row sum bound violated");
  }
}

void criterion_spectral_cert(check_context& ctx) {
  {
    sp_graph g(ring::integer_modular(5, 2), adjacency_mode::materialized);
    auto cert = certify(g);
    ctx.require(cert.lambda <= std::sqrt(500.0) + 1e-8, "Z/25: lambda above sqrt(500)");
    ctx.require(cert.bound_nontrivial, "Z/25: bound should be nontrivial");
    ctx.require(cert.residual <= 1e-8 * static_cast<double>(cert.d), "Z/25: residual too large");
    const double nd = static_cast<double>(cert.n) * static_cast<double>(cert.d);
    ctx.require(std::abs(cert.trace_sum - static_cast<double>(cert.loops)) <= 1e-6 * nd,
                "Z/25: trace(A) != loop count");
    ctx.require(std::abs(cert.trace_square - nd) <= 1e-6 * nd, "Z/25: trace(A^2) != n d");
    ctx.require(cert.connected && cert.non_bipartite, "Z/25: connectivity flags");
  }
  {
    sp_graph g(ring::integer_modular(7, 1), adjacency_mode::materialized);
    auto cert = certify(g);
    ctx.require(cert.lambda <= std::sqrt(14.0) + 1e-8, "Z/7: lambda above sqrt(14)");
    ctx.require(cert.residual <= 1e-8 * static_cast<double>(cert.d), "Z/7: residual too large");
    const double nd = static_cast<double>(cert.n) * static_cast<double>(cert.d);
    ctx.require(std::abs(cert.trace_sum - static_cast<double>(cert.loops)) <= 1e-6 * nd,
                "Z/7: trace(A) != loop count");
    ctx.require(std::abs(cert.trace_square - nd) <= 1e-6 * nd, "Z/7: trace(A^2) != n d");
  }
}

void criterion_mixing(check_context& ctx) {
  sp_graph g(ring::integer_modular(5, 2), adjacency_mode::materialized);
  auto cert = certify(g);
  std::vector<std::uint64_t> all(g.n());
  std::iota(all.begin(), all.end(), 0);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const std::uint64_t bs = 1 + sample(all, 1, 7000 + trial)[0] % g.n();
    const std::uint64_t cs = 1 + sample(all, 1, 9000 + trial)[0] % g.n();
    auto B = sample(all, bs, 2 * trial + 1);
    auto C = sample(all, cs, 3 * trial + 2);
    double slack = 0.0;
    if (!mixing_check(g, cert, B, C, &slack)) {
      ctx.require(false, "mixing violated at trial " + std::to_string(trial) + " slack " +
                             std::to_string(slack));
      return;
    }
  }
}

void criterion_proof_chains(check_context& ctx) {
  for (ring R : {ring::integer_modular(5, 2), f3x2()}) {
    sp_graph graph(R, adjacency_mode::materialized);
    auto cert = certify(graph);
    std::vector<std::uint64_t> unit_codes;
    for (auto u : R.units()) unit_codes.push_back(u.code);
    elem_set units(R, unit_codes, set_provenance::subgroup);

    auto make_func = [&](const elem_set& dom, unsigned which, std::uint64_t seed) {
      switch (which % 4) {
        case 0: return func_table::identity_on(dom);
        case 1: return func_table::monomial_on(dom, 3);
        case 2: return func_table::constant_on(dom, R.one());
        default: {
          std::vector<std::uint64_t> vals;
          auto pool = unit_codes;
          for (std::size_t i = 0; i < dom.size(); ++i)
            vals.push_back(sample(pool, 1, seed * 97 + i)[0]);
          return func_table(dom, std::move(vals), "seeded-table");
        }
      }
    };

    for (theorem_id thm :
         {theorem_id::mult, theorem_id::add, theorem_id::three_sets, theorem_id::special}) {
      for (std::uint64_t k = 0; k < 50; ++k) {
        elem_set G = units;
        if (thm == theorem_id::three_sets) {
          const std::uint64_t gen = sample(unit_codes, 1, 500 + k)[0];
          G = subgroup_generate(R, R.elem(gen)).closure;
        }
        func_table g = make_func(G, static_cast<unsigned>(k), k + 1);
        func_table h = make_func(G, static_cast<unsigned>(k / 4 + 1), 2 * k + 1);

        auto pick = [&](const std::vector<std::uint64_t>& pool, std::uint64_t seed) {
          const std::size_t cap = std::min<std::size_t>(8, pool.size());
          const std::size_t sz = 1 + static_cast<std::size_t>(seed % cap);
          return elem_set(R, sample(pool, sz, seed));
        };
        const auto& bc_pool = thm == theorem_id::three_sets ? G.codes() : unit_codes;
        elem_set A = pick(G.codes(), 11 * k + 3);
        elem_set B = pick(bc_pool, 13 * k + 5);
        elem_set C = pick(bc_pool, 17 * k + 7);

        auto rep = evaluate_theorem(graph, cert, thm, g, &h, A, B, C);
        if (!rep.chain_lower_ok || !rep.chain_mixing_ok) {
          ctx.require(false, R.to_string() + " " + theorem_name(thm) + " instance " +
                                 std::to_string(k) + ": chain violated");
          return;
        }
      }
    }
  }
}

void criterion_vinh(check_context& ctx) {
  ring R = ring::integer_modular(101, 1);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const std::size_t size = 1 + static_cast<std::size_t>((trial * 37 + 11) % R.order());
    elem_set A = random_subset(R, size, trial);
    auto rep = vinh_field_check(A);
    if (!rep.ok) {
      ctx.require(false, "inequality violated at trial " + std::to_string(trial));
      return;
    }
  }
}

void criterion_sharpness(check_context& ctx) {
  {
    ring R = ring::integer_modular(101, 1);
    auto rep = sharpness_probe(R, R.elem(2), 21);
    ctx.require(rep.a_size == 21, "Z/101: progression collided");
    ctx.require(rep.f_size == 100, "Z/101: |f(A,A)| drifted from baseline 100");
    ctx.require(rep.aa_size == 41, "Z/101: |A.A| drifted from baseline 41");
    ctx.require(std::isfinite(rep.ratio) && std::abs(rep.ratio - 4100.0 / 2121.0) < 1e-12,
                "Z/101: ratio drifted");
  }
  {
    ring R = ring::integer_modular(199, 1);
    auto rep = sharpness_probe(R, R.elem(2), 34);
    ctx.require(rep.a_size == 34, "Z/199: progression collided");
    ctx.require(rep.f_size == 194, "Z/199: |f(A,A)| drifted from baseline 194");
    ctx.require(rep.aa_size == 67, "Z/199: |A.A| drifted from baseline 67");
    ctx.require(std::isfinite(rep.ratio) && std::abs(rep.ratio - 12998.0 / 6766.0) < 1e-12,
                "Z/199: ratio drifted");
  }
}

void criterion_determinism(check_context& ctx) {
  namespace fs = std::filesystem;
  const std::string config_text = R"({
    "rings": ["zpr:3,2", "polyq:3,2,0,1"],
    "theorems": ["T-mult", "T-add", "T-three-sets", "T-special"],
    "seed": 20, "instances": 5,
    "functions": {"g": {"func":"random-table"}, "h": {"func":"random-table"}},
    "sets": {"A": {"kind":"random-units","size":4},
             "B": {"kind":"random-units","size":4},
             "C": {"kind":"random-units","size":4}}
  })";
  auto run_once = [&](const std::string& dir) {
    fs::remove_all(dir);
    auto cfg = parse_config(config_text);
    cfg.out_dir = dir;
    run_experiment(cfg);
    std::ifstream in(fs::path(dir) / "report.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    const auto nl = text.find('\n');  // drop the timestamp comment line
    return text.substr(nl + 1);
  };
  const std::string d1 = (fs::temp_directory_path() / "fvr_acc_det1").string();
  const std::string d2 = (fs::temp_directory_path() / "fvr_acc_det2").string();
  const std::string body1 = run_once(d1), body2 = run_once(d2);
  ctx.require(!body1.empty(), "first run produced no CSV");
  ctx.require(body1 == body2, "CSV bodies differ between identical runs");
  fs::remove_all(d1);
  fs::remove_all(d2);
}

}  // namespace

int main() {
  run_criterion(1, "ring correctness (orders, units, ideals, valuation law)", 1.0,
                criterion_ring_correctness);
  run_criterion(2, "common-neighbor closed form vs brute force", 5.0, criterion_common_neighbors);
  run_criterion(3, "A^2 identity, exact integer equality", 30.0, criterion_a2_identity);
  run_criterion(4, "spectral certificates (Z/25, Z/7) with trace identities", 60.0,
                criterion_spectral_cert);
  run_criterion(5, "mixing inequality on 100 seeded set pairs", 10.0, criterion_mixing);
  run_criterion(6, "proof chains, 50 seeded instances per theorem and ring", 120.0,
                criterion_proof_chains);
  run_criterion(7, "field inequality on 100 seeded subsets of Z/101", 5.0, criterion_vinh);
  run_criterion(8, "sharpness probe regression baselines", 5.0, criterion_sharpness);
  run_criterion(9, "byte-identical CSV across identical runs", 60.0, criterion_determinism);
  if (g_failures != 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
