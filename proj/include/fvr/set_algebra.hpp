#pragma once

// Subsets of R and R*, cyclic subgroups of the unit group, and tabulated
// unit-valued functions with multiplicity statistics.  Functions are always
// explicit tables over their domain; monomials and constants are provided as
// table constructors.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fvr/ring.hpp"

namespace fvr {

// A set or function domain constraint was violated.
class domain_violation_error : public error {
 public:
  using error::error;
};

enum class set_provenance { random_units, geometric_progression, subgroup, interval, explicit_set };

inline const char* provenance_name(set_provenance p) {
  switch (p) {
    case set_provenance::random_units: return "random-units";
    case set_provenance::geometric_progression: return "geometric-progression";
    case set_provenance::subgroup: return "subgroup";
    case set_provenance::interval: return "interval";
    case set_provenance::explicit_set: return "explicit";
  }
  return "?";
}

// Sorted duplicate-free subset of one ring.
class elem_set {
 public:
  elem_set(ring R, std::vector<std::uint64_t> codes,
           set_provenance prov = set_provenance::explicit_set)
      : ring_(std::move(R)), codes_(std::move(codes)), prov_(prov) {
    for (std::uint64_t c : codes_)
      if (c >= ring_.order())
        throw domain_violation_error("set member code " + std::to_string(c) +
                                     " out of range for " + ring_.to_string());
    std::sort(codes_.begin(), codes_.end());
    codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
  }

  static elem_set of_elems(const ring& R, const std::vector<ring_elem>& members,
                           set_provenance prov = set_provenance::explicit_set) {
    std::vector<std::uint64_t> codes;
    codes.reserve(members.size());
    for (ring_elem e : members) codes.push_back(R.code(e));
    return elem_set(R, std::move(codes), prov);
  }

  const ring& owner() const { return ring_; }
  const std::vector<std::uint64_t>& codes() const { return codes_; }
  std::size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  set_provenance provenance() const { return prov_; }

  bool contains_code(std::uint64_t c) const {
    return std::binary_search(codes_.begin(), codes_.end(), c);
  }
  bool contains(ring_elem e) const { return e.tag == ring_.tag() && contains_code(e.code); }

  bool all_units() const {
    for (std::uint64_t c : codes_)
      if (!ring_.is_unit_code(c)) return false;
    return true;
  }

  bool subset_of(const elem_set& other) const {
    for (std::uint64_t c : codes_)
      if (!other.contains_code(c)) return false;
    return true;
  }

 private:
  ring ring_;
  std::vector<std::uint64_t> codes_;
  set_provenance prov_;
};

namespace detail {
inline void require_same_ring(const ring& a, const ring& b, const char* what) {
  if (a.tag() != b.tag())
    throw mixed_ring_error(std::string(what) + ": operands from different rings");
}
}  // namespace detail

inline elem_set sum_set(const elem_set& A, const elem_set& B) {
  detail::require_same_ring(A.owner(), B.owner(), "sum_set");
  const ring& R = A.owner();
  std::vector<std::uint64_t> out;
  out.reserve(A.size() * B.size());
  for (std::uint64_t a : A.codes())
    for (std::uint64_t b : B.codes()) out.push_back(R.add_code(a, b));
  return elem_set(R, std::move(out));
}

inline elem_set product_set(const elem_set& A, const elem_set& B) {
  detail::require_same_ring(A.owner(), B.owner(), "product_set");
  const ring& R = A.owner();
  std::vector<std::uint64_t> out;
  out.reserve(A.size() * B.size());
  for (std::uint64_t a : A.codes())
    for (std::uint64_t b : B.codes()) out.push_back(R.mul_code(a, b));
  return elem_set(R, std::move(out));
}

// Cyclic subgroup <g> of the unit group.
struct subgroup_set {
  ring_elem generator;
  elem_set closure;
};

inline subgroup_set subgroup_generate(const ring& R, ring_elem g) {
  if (!R.is_unit(g))
    throw non_unit_error("subgroup_generate: generator is not a unit");
  std::vector<std::uint64_t> members;
  std::uint64_t cur = R.code(R.one());
  do {
    members.push_back(cur);
    cur = R.mul_code(cur, g.code);
  } while (cur != R.one().code);
  return subgroup_set{g, elem_set(R, std::move(members), set_provenance::subgroup)};
}

// Unit-valued function tabulated over a fixed domain.
class func_table {
 public:
  func_table(elem_set domain, std::vector<std::uint64_t> values, std::string name)
      : domain_(std::move(domain)), values_(std::move(values)), name_(std::move(name)) {
    if (values_.size() != domain_.size())
      throw domain_violation_error("func_table: value count does not match domain size");
    const ring& R = domain_.owner();
    for (std::uint64_t v : values_)
      if (v >= R.order() || !R.is_unit_code(v))
        throw domain_violation_error("func_table \"" + name_ +
                                     "\": values must be units of " + R.to_string());
  }

  static func_table identity_on(elem_set domain) {
    if (!domain.all_units())
      throw domain_violation_error("identity_on: domain must consist of units");
    std::vector<std::uint64_t> vals(domain.codes().begin(), domain.codes().end());
    return func_table(std::move(domain), std::move(vals), "identity");
  }

  static func_table monomial_on(elem_set domain, unsigned k) {
    if (!domain.all_units())
      throw domain_violation_error("monomial_on: domain must consist of units");
    const ring& R = domain.owner();
    std::vector<std::uint64_t> vals;
    vals.reserve(domain.size());
    for (std::uint64_t c : domain.codes()) vals.push_back(R.pow_code(c, k));
    return func_table(std::move(domain), std::move(vals), "monomial-" + std::to_string(k));
  }

  static func_table constant_on(elem_set domain, ring_elem c) {
    const ring& R = domain.owner();
    if (!R.is_unit(c)) throw non_unit_error("constant_on: constant must be a unit");
    std::vector<std::uint64_t> vals(domain.size(), c.code);
    return func_table(std::move(domain), std::move(vals), "constant-" + std::to_string(c.code));
  }

  static func_table from_pairs(elem_set domain,
                               const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
    std::vector<std::uint64_t> vals(domain.size(), 0);
    std::vector<bool> seen(domain.size(), false);
    for (auto [x, v] : pairs) {
      const auto& codes = domain.codes();
      auto it = std::lower_bound(codes.begin(), codes.end(), x);
      if (it == codes.end() || *it != x)
        throw domain_violation_error("from_pairs: key " + std::to_string(x) + " not in domain");
      const std::size_t idx = static_cast<std::size_t>(it - codes.begin());
      vals[idx] = v;
      seen[idx] = true;
    }
    for (bool s : seen)
      if (!s) throw domain_violation_error("from_pairs: table is not total on the domain");
    return func_table(std::move(domain), std::move(vals), "table");
  }

  const elem_set& domain() const { return domain_; }
  const ring& owner() const { return domain_.owner(); }
  const std::string& name() const { return name_; }
  const std::vector<std::uint64_t>& values() const { return values_; }

  std::uint64_t value_code(std::uint64_t xcode) const {
    const auto& codes = domain_.codes();
    auto it = std::lower_bound(codes.begin(), codes.end(), xcode);
    if (it == codes.end() || *it != xcode)
      throw domain_violation_error("func_table \"" + name_ + "\": argument code " +
                                   std::to_string(xcode) + " outside domain");
    return values_[static_cast<std::size_t>(it - codes.begin())];
  }
  ring_elem value(ring_elem x) const { return owner().elem(value_code(owner().code(x))); }

 private:
  elem_set domain_;
  std::vector<std::uint64_t> values_;
  std::string name_;
};

// mu(g): maximum fiber size over the value table.
inline std::uint64_t multiplicity(const func_table& t) {
  std::unordered_map<std::uint64_t, std::uint64_t> fibers;
  std::uint64_t best = 0;
  for (std::uint64_t v : t.values()) best = std::max(best, ++fibers[v]);
  return best;
}

// (g*h)(x) = g(x) h(x); domains must coincide.
inline func_table pointwise_product(const func_table& g, const func_table& h) {
  detail::require_same_ring(g.owner(), h.owner(), "pointwise_product");
  if (g.domain().codes() != h.domain().codes())
    throw domain_violation_error("pointwise_product: domain mismatch");
  const ring& R = g.owner();
  std::vector<std::uint64_t> vals;
  vals.reserve(g.domain().size());
  for (std::size_t i = 0; i < g.domain().size(); ++i)
    vals.push_back(R.mul_code(g.values()[i], h.values()[i]));
  return func_table(g.domain(), std::move(vals), g.name() + "*" + h.name());
}

// h_u(x) = h(u x); requires u * domain to stay inside the domain of h.
inline func_table translate(const func_table& h, ring_elem u) {
  const ring& R = h.owner();
  if (!R.is_unit(u)) throw non_unit_error("translate: u must be a unit");
  std::vector<std::uint64_t> vals;
  vals.reserve(h.domain().size());
  for (std::uint64_t x : h.domain().codes()) vals.push_back(h.value_code(R.mul_code(u.code, x)));
  return func_table(h.domain(), std::move(vals), h.name() + "_u" + std::to_string(u.code));
}

// (g * h_u * id)(x) = g(x) h(ux) x
inline func_table product_translate_id(const func_table& g, const func_table& h, ring_elem u) {
  func_table hu = translate(h, u);
  if (g.domain().codes() != h.domain().codes())
    throw domain_violation_error("product_translate_id: domain mismatch");
  const ring& R = g.owner();
  std::vector<std::uint64_t> vals;
  vals.reserve(g.domain().size());
  for (std::size_t i = 0; i < g.domain().size(); ++i)
    vals.push_back(R.mul_code(R.mul_code(g.values()[i], hu.values()[i]), g.domain().codes()[i]));
  return func_table(g.domain(), std::move(vals), "g*h_u*id");
}

// (g^2 * id)(x) = g(x)^2 x
inline func_table square_times_id(const func_table& g) {
  const ring& R = g.owner();
  if (!g.domain().all_units())
    throw domain_violation_error("square_times_id: domain must consist of units");
  std::vector<std::uint64_t> vals;
  vals.reserve(g.domain().size());
  for (std::size_t i = 0; i < g.domain().size(); ++i) {
    std::uint64_t gg = R.mul_code(g.values()[i], g.values()[i]);
    vals.push_back(R.mul_code(gg, g.domain().codes()[i]));
  }
  return func_table(g.domain(), std::move(vals), "g^2*id");
}

// The two-variable maps evaluated by the theorem harness.
enum class f_form {
  gx_times_hx_plus_y,   // f(x,y) = g(x) (h(x) + y)
  gx_hy_times_x_plus_y, // f(x,y) = g(x) h(y) (x + y)
  xy_times_gx_plus_y,   // f(x,y) = x y (g(x) + y)
};

inline const char* f_form_name(f_form f) {
  switch (f) {
    case f_form::gx_times_hx_plus_y: return "g(x)(h(x)+y)";
    case f_form::gx_hy_times_x_plus_y: return "g(x)h(y)(x+y)";
    case f_form::xy_times_gx_plus_y: return "xy(g(x)+y)";
  }
  return "?";
}

// Image set {f(a,b) : a in A, b in B}.  B must consist of units; the image
// itself may contain non-units and lives in R.
inline elem_set apply_f(f_form form, const func_table& g, const func_table* h, const elem_set& A,
                        const elem_set& B) {
  const ring& R = g.owner();
  detail::require_same_ring(R, A.owner(), "apply_f");
  detail::require_same_ring(R, B.owner(), "apply_f");
  if (!A.subset_of(g.domain()))
    throw domain_violation_error("apply_f: A is not contained in the domain of g");
  if (!B.all_units()) throw domain_violation_error("apply_f: B must consist of units");
  if (form != f_form::xy_times_gx_plus_y) {
    if (h == nullptr) throw domain_violation_error("apply_f: this form requires h");
  }
  std::vector<std::uint64_t> out;
  out.reserve(A.size() * B.size());
  switch (form) {
    case f_form::gx_times_hx_plus_y:
      if (!A.subset_of(h->domain()))
        throw domain_violation_error("apply_f: A is not contained in the domain of h");
      for (std::uint64_t x : A.codes()) {
        const std::uint64_t gx = g.value_code(x), hx = h->value_code(x);
        for (std::uint64_t y : B.codes()) out.push_back(R.mul_code(gx, R.add_code(hx, y)));
      }
      break;
    case f_form::gx_hy_times_x_plus_y:
      if (!B.subset_of(h->domain()))
        throw domain_violation_error("apply_f: B is not contained in the domain of h");
      for (std::uint64_t x : A.codes()) {
        const std::uint64_t gx = g.value_code(x);
        for (std::uint64_t y : B.codes()) {
          const std::uint64_t hy = h->value_code(y);
          out.push_back(R.mul_code(R.mul_code(gx, hy), R.add_code(x, y)));
        }
      }
      break;
    case f_form::xy_times_gx_plus_y:
      for (std::uint64_t x : A.codes()) {
        const std::uint64_t gx = g.value_code(x);
        for (std::uint64_t y : B.codes())
          out.push_back(R.mul_code(R.mul_code(x, y), R.add_code(gx, y)));
      }
      break;
  }
  return elem_set(R, std::move(out));
}

// ---- deterministic set families ----

// size distinct units, drawn by a seeded partial Fisher-Yates shuffle.
inline elem_set random_units_set(const ring& R, std::size_t size, std::uint64_t seed,
                                 std::uint64_t enum_cap = ring::default_enum_cap) {
  auto pool = R.units(enum_cap);
  if (size > pool.size())
    throw domain_violation_error("random_units_set: requested size " + std::to_string(size) +
                                 " exceeds unit count " + std::to_string(pool.size()));
  std::uint64_t state = seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull;
  auto next = [&state]() {
    // splitmix64
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  std::vector<std::uint64_t> codes;
  codes.reserve(pool.size());
  for (ring_elem e : pool) codes.push_back(e.code);
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t j = i + static_cast<std::size_t>(next() % (codes.size() - i));
    std::swap(codes[i], codes[j]);
  }
  codes.resize(size);
  return elem_set(R, std::move(codes), set_provenance::random_units);
}

// Seeded sample of arbitrary ring elements (used for mixing-test vertex sets
// and field subsets; not restricted to units).
inline elem_set random_subset(const ring& R, std::size_t size, std::uint64_t seed,
                              std::uint64_t enum_cap = ring::default_enum_cap) {
  if (R.order() > enum_cap)
    throw cap_error("random_subset: ring too large to enumerate");
  if (size > R.order())
    throw domain_violation_error("random_subset: requested size exceeds ring order");
  std::uint64_t state = seed * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull;
  auto next = [&state]() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  std::vector<std::uint64_t> codes(R.order());
  for (std::uint64_t c = 0; c < R.order(); ++c) codes[c] = c;
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t j = i + static_cast<std::size_t>(next() % (codes.size() - i));
    std::swap(codes[i], codes[j]);
  }
  codes.resize(size);
  return elem_set(R, std::move(codes), set_provenance::explicit_set);
}

// {start * base^i : 0 <= i < length}; start defaults to base.  Collisions are
// dropped, so the resulting size is the measured distinct count.
inline elem_set geometric_set(const ring& R, ring_elem base, std::size_t length,
                              std::optional<ring_elem> start = std::nullopt) {
  if (!R.is_unit(base)) throw non_unit_error("geometric_set: base must be a unit");
  if (length == 0) throw domain_violation_error("geometric_set: length must be positive");
  std::uint64_t cur = start ? R.code(*start) : base.code;
  std::vector<std::uint64_t> codes;
  codes.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    codes.push_back(cur);
    cur = R.mul_code(cur, base.code);
  }
  return elem_set(R, std::move(codes), set_provenance::geometric_progression);
}

// size consecutive residues from start (integer-modular family only),
// optionally filtered to units.
inline elem_set interval_set(const ring& R, std::uint64_t start, std::size_t size,
                             bool units_only) {
  if (R.family() != ring_family::integer_modular)
    throw domain_violation_error("interval_set: only defined for the integer-modular family");
  if (size > R.order())
    throw domain_violation_error("interval_set: size exceeds ring order");
  std::vector<std::uint64_t> codes;
  codes.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    const std::uint64_t c = (start + i) % R.order();
    if (!units_only || R.is_unit_code(c)) codes.push_back(c);
  }
  return elem_set(R, std::move(codes), set_provenance::interval);
}

}  // namespace fvr
