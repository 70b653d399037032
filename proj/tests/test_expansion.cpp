#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "fvr/expansion.hpp"

using fvr::adjacency_mode;
using fvr::construct_st;
using fvr::elem_set;
using fvr::f_form;
using fvr::func_table;
using fvr::ring;
using fvr::sp_graph;
using fvr::theorem_id;

namespace {

ring f3x2() { return ring::polynomial_quotient(3, 2, {0, 1}); }

elem_set make_set(const ring& R, std::initializer_list<std::uint64_t> codes) {
  return elem_set(R, std::vector<std::uint64_t>(codes));
}

struct fixture {
  ring R;
  sp_graph graph;
  fvr::spectral_cert cert;
  explicit fixture(ring r) : R(r), graph(R, adjacency_mode::materialized), cert(certify(graph)) {}
};

}  // namespace

TEST_CASE("construct_st reproduces the worked T-mult instance") {
  ring z9 = ring::integer_modular(3, 2);
  elem_set units(z9, {1, 2, 4, 5, 7, 8});
  func_table g = func_table::identity_on(units);
  func_table h = func_table::constant_on(units, z9.elem(1));
  elem_set A = make_set(z9, {1, 2}), B = make_set(z9, {1, 4}), C = make_set(z9, {2});

  auto pc = construct_st(z9, theorem_id::mult, g, &h, A, B, C);
  CHECK(pc.m == 1);
  // S = {(2,2), (2,1)}
  std::vector<std::uint64_t> expect_s{2 * 9 + 1, 2 * 9 + 2};
  CHECK(pc.s_vertices == expect_s);
  CHECK(pc.s_vertices.size() <= A.size() * C.size());

  sp_graph graph(z9, adjacency_mode::implicit);
  auto bound = verify_edge_lower_bound(pc, graph);
  CHECK(bound.triple_count == 4);
  CHECK(bound.e_st >= 4);
  CHECK(bound.ok);
}

TEST_CASE("construct_st singleton instances") {
  ring z9 = ring::integer_modular(3, 2);
  elem_set one = make_set(z9, {1});
  func_table g = func_table::identity_on(one);
  func_table h = func_table::constant_on(one, z9.elem(1));
  sp_graph graph(z9, adjacency_mode::implicit);

  for (theorem_id thm :
       {theorem_id::mult, theorem_id::add, theorem_id::three_sets, theorem_id::special}) {
    auto pc = construct_st(z9, thm, g, &h, one, one, one);
    CHECK(pc.s_vertices.size() == 1);
    CHECK(pc.t_vertices.size() == 1);
    auto bound = verify_edge_lower_bound(pc, graph);
    CHECK(bound.e_st >= 1);  // the defining triple is itself an edge
    CHECK(bound.ok);
  }

  // T-special with g = id: S = {(1, f(1,1))} = {(1,2)}, T = {(1,1)}
  auto pc = construct_st(z9, theorem_id::special, g, nullptr, one, one, one);
  CHECK(pc.s_vertices == std::vector<std::uint64_t>{1 * 9 + 2});
  CHECK(pc.t_vertices == std::vector<std::uint64_t>{1 * 9 + 1});
}

TEST_CASE("construct_st validates inputs") {
  ring z9 = ring::integer_modular(3, 2);
  elem_set units(z9, {1, 2, 4, 5, 7, 8});
  func_table g = func_table::identity_on(units);
  func_table h = func_table::constant_on(units, z9.elem(1));
  elem_set empty(z9, {});
  elem_set nonunit = make_set(z9, {1, 3});
  elem_set A = make_set(z9, {1, 2});

  CHECK_THROWS_AS(construct_st(z9, theorem_id::mult, g, &h, empty, A, A),
                  fvr::domain_violation_error);
  CHECK_THROWS_AS(construct_st(z9, theorem_id::mult, g, &h, A, nonunit, A),
                  fvr::domain_violation_error);
  CHECK_THROWS_AS(construct_st(z9, theorem_id::mult, g, &h, nonunit, A, A),
                  fvr::domain_violation_error);
}

TEST_CASE("full evaluation on Z/25 with A=B=C = units minus -1") {
  fixture fx(ring::integer_modular(5, 2));
  std::vector<std::uint64_t> codes;
  for (auto u : fx.R.units())
    if (u.code != 24) codes.push_back(u.code);
  elem_set A(fx.R, codes);
  elem_set units(fx.R, [&] {
    std::vector<std::uint64_t> all;
    for (auto u : fx.R.units()) all.push_back(u.code);
    return all;
  }());
  func_table g = func_table::identity_on(units);
  func_table h = func_table::constant_on(units, fx.R.elem(1));

  auto rep = evaluate_theorem(fx.graph, fx.cert, theorem_id::mult, g, &h, A, A, A);
  CHECK(rep.chain_lower_ok);
  CHECK(rep.chain_mixing_ok);
  CHECK(rep.chain_ok);
  CHECK(rep.caps_ok);
  CHECK(rep.m == 1);
  CHECK(rep.f_size > 0);
  CHECK(rep.pair_size > 0);
  CHECK(std::isfinite(rep.delta_emp));
}

TEST_CASE("three-sets hypothesis measurements on a subgroup of Z/9") {
  fixture fx(ring::integer_modular(3, 2));
  elem_set G = subgroup_generate(fx.R, fx.R.elem(2)).closure;
  func_table g = func_table::identity_on(G);
  func_table h = func_table::identity_on(G);
  elem_set A = make_set(fx.R, {1, 2}), B = make_set(fx.R, {2, 4}), C = make_set(fx.R, {1, 5});

  auto pc = construct_st(fx.R, theorem_id::three_sets, g, &h, A, B, C);
  // g = id: the ratio g(xz)/g(x) = z is a single value per z
  CHECK(pc.g_ratio_values == 1);
  CHECK(pc.h_ratio_values == 1);
  CHECK(pc.g_ratio_values <= G.size());
  CHECK(pc.printed_matches_simplified);
  // mu(g h_u id) = mu(u x^3): cubes on the units of Z/9 give fiber size 3
  CHECK(pc.m == 3);

  auto rep = evaluate_theorem(fx.graph, fx.cert, theorem_id::three_sets, g, &h, A, B, C);
  CHECK(rep.chain_ok);
  CHECK(rep.caps_ok);
  CHECK(rep.ac_size > 0);
}

TEST_CASE("chain holds across theorems and rings on seeded instances") {
  for (ring R : {ring::integer_modular(5, 2), f3x2()}) {
    fixture fx(R);
    elem_set units(fx.R, [&] {
      std::vector<std::uint64_t> all;
      for (auto u : fx.R.units()) all.push_back(u.code);
      return all;
    }());
    func_table gid = func_table::identity_on(units);
    func_table hconst = func_table::constant_on(units, fx.R.one());
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      elem_set A = fvr::random_units_set(fx.R, 1 + seed % 5, seed);
      elem_set B = fvr::random_units_set(fx.R, 1 + (seed * 3) % 6, seed + 50);
      elem_set C = fvr::random_units_set(fx.R, 1 + (seed * 7) % 4, seed + 99);
      for (theorem_id thm : {theorem_id::mult, theorem_id::add, theorem_id::special}) {
        auto rep = evaluate_theorem(fx.graph, fx.cert, thm, gid, &hconst, A, B, C);
        INFO(fx.R.to_string() << " " << fvr::theorem_name(thm) << " seed " << seed);
        CHECK(rep.chain_ok);
        CHECK(rep.caps_ok);
        CHECK(rep.explicit_st_ok);
      }
      // three-sets wants a common subgroup domain
      elem_set G = subgroup_generate(fx.R, A.owner().elem(A.codes()[0])).closure;
      func_table g3 = func_table::identity_on(G);
      func_table h3 = func_table::monomial_on(G, 2);
      std::vector<std::uint64_t> gcodes = G.codes();
      elem_set AG(fx.R, {gcodes[seed % gcodes.size()], gcodes[(2 * seed) % gcodes.size()]});
      elem_set BG(fx.R, {gcodes[(seed + 1) % gcodes.size()]});
      elem_set CG(fx.R, {gcodes[(3 * seed + 2) % gcodes.size()]});
      auto rep3 = evaluate_theorem(fx.graph, fx.cert, theorem_id::three_sets, g3, &h3, AG, BG, CG);
      CHECK(rep3.chain_ok);
      CHECK(rep3.caps_ok);
    }
  }
}

TEST_CASE("singleton instances keep the chain intact") {
  fixture fx(ring::integer_modular(3, 2));
  elem_set one(fx.R, {1});
  func_table g = func_table::identity_on(one);
  func_table h = func_table::constant_on(one, fx.R.one());
  for (theorem_id thm :
       {theorem_id::mult, theorem_id::add, theorem_id::three_sets, theorem_id::special}) {
    auto rep = evaluate_theorem(fx.graph, fx.cert, thm, g, &h, one, one, one);
    CHECK(rep.f_size >= 1);
    CHECK(rep.pair_size >= 1);
    CHECK(rep.chain_ok);
    CHECK(rep.caps_ok);
    CHECK(std::isnan(rep.delta_emp));  // |A| = 1: exponent undefined
  }
}

TEST_CASE("T-mult T vertices encode exactly the f image") {
  fixture fx(ring::integer_modular(5, 2));
  elem_set units(fx.R, [&] {
    std::vector<std::uint64_t> all;
    for (auto u : fx.R.units()) all.push_back(u.code);
    return all;
  }());
  func_table g = func_table::monomial_on(units, 3);
  func_table h = func_table::identity_on(units);
  elem_set A = fvr::random_units_set(fx.R, 6, 11);
  elem_set B = fvr::random_units_set(fx.R, 5, 12);
  elem_set C = fvr::random_units_set(fx.R, 4, 13);

  auto pc = construct_st(fx.R, theorem_id::mult, g, &h, A, B, C);
  std::set<std::uint64_t> second_coords;
  for (std::uint64_t v : pc.t_vertices) second_coords.insert(v % fx.R.order());
  CHECK(second_coords.size() == apply_f(f_form::gx_times_hx_plus_y, g, &h, A, B).size());
}

TEST_CASE("vinh inequality on prime fields") {
  ring z7 = ring::integer_modular(7, 1);
  auto rep = vinh_field_check(make_set(z7, {1, 2, 4}));
  CHECK(rep.sum_size == 6);
  CHECK(rep.product_size == 3);
  CHECK(rep.ok);

  // full field: m = n = q
  std::vector<std::uint64_t> all;
  for (std::uint64_t c = 0; c < 7; ++c) all.push_back(c);
  auto full = vinh_field_check(elem_set(z7, all));
  CHECK(full.sum_size == 7);
  CHECK(full.product_size == 7);
  CHECK(full.ok);

  ring z101 = ring::integer_modular(101, 1);
  auto geo = vinh_field_check(geometric_set(z101, z101.elem(2), 10));
  CHECK(geo.ok);
  CHECK(geo.slack >= 0.0);

  CHECK_THROWS_AS(vinh_field_check(make_set(ring::integer_modular(3, 2), {1, 2})),
                  fvr::domain_violation_error);
}

TEST_CASE("sharpness probe on geometric progressions") {
  ring z101 = ring::integer_modular(101, 1);
  auto rep = sharpness_probe(z101, z101.elem(2), 21);
  CHECK(rep.a_size == 21);
  CHECK(rep.ratio > 0.0);
  CHECK(std::isfinite(rep.ratio));

  auto tiny = sharpness_probe(z101, z101.elem(2), 1);
  CHECK(tiny.f_size == 1);
  CHECK(tiny.ratio <= 1.0);

  ring z199 = ring::integer_modular(199, 1);
  auto rep2 = sharpness_probe(z199, z199.elem(2), 34);
  CHECK(std::isfinite(rep2.ratio));

  CHECK_THROWS_AS(sharpness_probe(ring::integer_modular(3, 2), ring::integer_modular(3, 2).elem(2), 4),
                  fvr::domain_violation_error);
}

TEST_CASE("theorem names round trip") {
  for (theorem_id t :
       {theorem_id::mult, theorem_id::add, theorem_id::three_sets, theorem_id::special})
    CHECK(fvr::parse_theorem(fvr::theorem_name(t)) == t);
  CHECK_THROWS_AS(fvr::parse_theorem("T-bogus"), fvr::error);
}
