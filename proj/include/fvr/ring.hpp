#pragma once

// Exact arithmetic for finite valuation rings of order q^r.
//
// Two families are supported, selected at construction:
//   * integers mod p^r                      text form  "zpr:<p>,<r>"
//   * F_p[x]/(f(x)^r) with f irreducible    text form  "polyq:<p>,<r>,<c0>,<c1>,...>"
// (coefficients of f are listed low-to-high; f must be monic).
//
// Elements travel as canonical codes in [0, q^r).  For the integer-modular
// family the code is the least nonnegative residue; for the polynomial
// family it is the base-p packing of the reduced coefficient vector.  All
// arithmetic is exact; there is no floating point anywhere in this header.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fvr {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands from two different rings were mixed in one operation.
class mixed_ring_error : public error {
 public:
  using error::error;
};

// A unit was required (inversion, subgroup generation, ...).
class non_unit_error : public error {
 public:
  using error::error;
};

// An enumeration or materialization cap was exceeded.
class cap_error : public error {
 public:
  using error::error;
};

enum class ring_family { integer_modular, polynomial_quotient };

// Value handle for a ring element: canonical code plus the fingerprint of
// the ring that owns it.  Equality is structural.
struct ring_elem {
  std::uint64_t code = 0;
  std::uint64_t tag = 0;

  friend bool operator==(const ring_elem&, const ring_elem&) = default;
  friend auto operator<=>(const ring_elem&, const ring_elem&) = default;
};

namespace detail {

// FNV-1a, used for ring fingerprints.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t checked_pow_u64(std::uint64_t base, unsigned exp, const char* what) {
  std::uint64_t acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (acc > (std::uint64_t{1} << 62) / base)
      throw error(std::string("ring too large: ") + what + " exceeds 2^62");
    acc *= base;
  }
  return acc;
}

// Dense polynomials over F_p, coefficients low-to-high, no trailing zeros.
using poly = std::vector<std::uint32_t>;

inline void poly_trim(poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline poly poly_mul(const poly& a, const poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      acc[i + j] += std::uint64_t{a[i]} * b[j] % p;
  poly out(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k) out[k] = static_cast<std::uint32_t>(acc[k] % p);
  poly_trim(out);
  return out;
}

// Remainder of a modulo a monic divisor.
inline poly poly_rem(poly a, const poly& mod, std::uint64_t p) {
  poly_trim(a);
  const std::size_t dm = mod.size() - 1;
  while (a.size() > dm) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    if (lead != 0) {
      for (std::size_t j = 0; j < dm; ++j) {
        std::uint64_t sub = lead * mod[j] % p;
        std::uint64_t cur = a[shift + j];
        a[shift + j] = static_cast<std::uint32_t>((cur + p - sub) % p);
      }
    }
    a.pop_back();
    poly_trim(a);
    if (a.size() <= dm) break;
  }
  return a;
}

// Exact quotient a / mod when mod (monic) divides a; nullopt otherwise.
inline bool poly_divide_exact(const poly& a, const poly& mod, std::uint64_t p, poly* quotient) {
  poly work = a;
  poly_trim(work);
  if (work.empty()) {
    if (quotient) quotient->clear();
    return true;
  }
  const std::size_t dm = mod.size() - 1;
  if (work.size() - 1 < dm) return false;
  poly q(work.size() - dm, 0);
  for (std::size_t step = work.size(); step-- > dm;) {
    if (work.size() <= step) continue;
    const std::uint64_t lead = work[step];
    if (lead == 0) continue;
    const std::size_t shift = step - dm;
    q[shift] = static_cast<std::uint32_t>(lead);
    for (std::size_t j = 0; j <= dm; ++j) {
      std::uint64_t sub = lead * mod[j] % p;
      std::uint64_t cur = work[shift + j];
      work[shift + j] = static_cast<std::uint32_t>((cur + p - sub) % p);
    }
  }
  poly_trim(work);
  if (!work.empty()) return false;
  if (quotient) {
    poly_trim(q);
    *quotient = std::move(q);
  }
  return true;
}

inline poly poly_powmod(poly base, std::uint64_t e, const poly& mod, std::uint64_t p) {
  poly result{1};
  base = poly_rem(std::move(base), mod, p);
  while (e != 0) {
    if (e & 1) result = poly_rem(poly_mul(result, base, p), mod, p);
    base = poly_rem(poly_mul(base, base, p), mod, p);
    e >>= 1;
  }
  return result;
}

// Trial division against every monic polynomial of degree 1..deg(f)/2.
inline bool poly_is_irreducible(const poly& f, std::uint64_t p) {
  const std::size_t deg = f.size() - 1;
  if (deg == 0) return false;
  if (deg == 1) return true;
  for (std::size_t d = 1; 2 * d <= deg; ++d) {
    const std::uint64_t count = checked_pow_u64(p, static_cast<unsigned>(d), "divisor enumeration");
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      poly g(d + 1, 0);
      std::uint64_t rest = idx;
      for (std::size_t j = 0; j < d; ++j) {
        g[j] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      g[d] = 1;
      if (poly_divide_exact(f, g, p, nullptr)) return false;
    }
  }
  return true;
}

}  // namespace detail

class ring {
 public:
  static constexpr std::uint64_t default_enum_cap = 1'000'000;

  static ring integer_modular(std::uint64_t p, unsigned r) {
    ring R;
    R.family_ = ring_family::integer_modular;
    R.p_ = p;
    R.r_ = r;
    R.validate_common();
    R.q_ = p;
    R.order_ = detail::checked_pow_u64(p, r, "q^r");
    R.finish_init();
    return R;
  }

  static ring polynomial_quotient(std::uint64_t p, unsigned r, std::vector<std::uint32_t> f) {
    ring R;
    R.family_ = ring_family::polynomial_quotient;
    R.p_ = p;
    R.r_ = r;
    R.f_ = std::move(f);
    R.validate_common();
    detail::poly_trim(R.f_);
    if (R.f_.size() < 2) throw error("construction check failed: f must have degree >= 1");
    if (R.f_.back() != 1) throw error("construction check failed: f must be monic");
    for (auto c : R.f_)
      if (c >= p) throw error("construction check failed: coefficient of f not reduced mod p");
    if (!detail::poly_is_irreducible(R.f_, p))
      throw error("construction check failed: f is reducible over Z/p");
    R.fdeg_ = static_cast<unsigned>(R.f_.size() - 1);
    R.q_ = detail::checked_pow_u64(p, R.fdeg_, "q = p^deg(f)");
    R.digits_ = R.r_ * R.fdeg_;
    R.order_ = detail::checked_pow_u64(p, R.digits_, "q^r");
    // modulus f^r and the reduction rows for x^D .. x^(2D-2)
    detail::poly m{1};
    for (unsigned i = 0; i < r; ++i) m = detail::poly_mul(m, R.f_, p);
    R.mod_ = std::move(m);
    R.build_reduction_rows();
    R.finish_init();
    return R;
  }

  // "zpr:<p>,<r>" or "polyq:<p>,<r>,<c0>,<c1>,..."
  static ring parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
      throw error("ring spec parse failed: missing ':' in \"" + std::string(text) + "\"");
    const std::string_view kind = text.substr(0, colon);
    std::vector<std::uint64_t> nums;
    {
      std::string_view rest = text.substr(colon + 1);
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view piece = rest.substr(0, comma);
        if (piece.empty()) throw error("ring spec parse failed: empty field");
        std::uint64_t v = 0;
        for (char c : piece) {
          if (c < '0' || c > '9')
            throw error("ring spec parse failed: non-numeric field \"" + std::string(piece) + "\"");
          v = v * 10 + static_cast<std::uint64_t>(c - '0');
        }
        nums.push_back(v);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    }
    if (kind == "zpr") {
      if (nums.size() != 2) throw error("ring spec parse failed: zpr expects p,r");
      return integer_modular(nums[0], static_cast<unsigned>(nums[1]));
    }
    if (kind == "polyq") {
      if (nums.size() < 4) throw error("ring spec parse failed: polyq expects p,r,c0,c1,...");
      std::vector<std::uint32_t> f(nums.begin() + 2, nums.end());
      return polynomial_quotient(nums[0], static_cast<unsigned>(nums[1]), std::move(f));
    }
    throw error("ring spec parse failed: unknown family \"" + std::string(kind) + "\"");
  }

  ring_family family() const { return family_; }
  std::uint64_t p() const { return p_; }
  unsigned r() const { return r_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t order() const { return order_; }
  std::uint64_t unit_count() const { return order_ - order_ / q_; }
  const std::vector<std::uint32_t>& modulus_poly() const { return f_; }
  std::uint64_t tag() const { return tag_; }

  std::string to_string() const {
    std::string s = family_ == ring_family::integer_modular ? "zpr:" : "polyq:";
    s += std::to_string(p_) + "," + std::to_string(r_);
    if (family_ == ring_family::polynomial_quotient)
      for (auto c : f_) s += "," + std::to_string(c);
    return s;
  }

  friend bool operator==(const ring& a, const ring& b) {
    return a.family_ == b.family_ && a.p_ == b.p_ && a.r_ == b.r_ && a.f_ == b.f_;
  }

  // ---- element factories ----

  ring_elem elem(std::uint64_t code) const {
    if (code >= order_) throw error("element code out of range for ring " + to_string());
    return ring_elem{code, tag_};
  }
  // Checked accessor: throws mixed_ring_error for foreign elements.
  std::uint64_t code(ring_elem a) const {
    check(a);
    return a.code;
  }
  ring_elem zero() const { return ring_elem{0, tag_}; }
  ring_elem one() const { return ring_elem{from_int_code(1), tag_}; }
  // v * 1_R (for the polynomial family this is the constant polynomial v mod p)
  ring_elem from_int(std::int64_t v) const { return ring_elem{from_int_code(v), tag_}; }
  ring_elem uniformizer() const { return ring_elem{uniformizer_code(), tag_}; }

  // ---- checked element operations ----

  ring_elem add(ring_elem a, ring_elem b) const { check2(a, b); return ring_elem{add_code(a.code, b.code), tag_}; }
  ring_elem sub(ring_elem a, ring_elem b) const { check2(a, b); return ring_elem{sub_code(a.code, b.code), tag_}; }
  ring_elem mul(ring_elem a, ring_elem b) const { check2(a, b); return ring_elem{mul_code(a.code, b.code), tag_}; }
  ring_elem neg(ring_elem a) const { check(a); return ring_elem{neg_code(a.code), tag_}; }
  ring_elem pow(ring_elem a, std::uint64_t e) const { check(a); return ring_elem{pow_code(a.code, e), tag_}; }
  bool is_unit(ring_elem a) const { check(a); return is_unit_code(a.code); }
  ring_elem invert(ring_elem a) const { check(a); return ring_elem{invert_code(a.code), tag_}; }
  unsigned valuation(ring_elem a) const { check(a); return valuation_code(a.code); }

  // ---- enumeration ----

  std::vector<ring_elem> elements(std::uint64_t cap = default_enum_cap) const {
    if (order_ > cap)
      throw cap_error("enumeration cap exceeded (order=" + std::to_string(order_) +
                      ", cap=" + std::to_string(cap) + "); use implicit adjacency paths");
    std::vector<ring_elem> out;
    out.reserve(order_);
    for (std::uint64_t c = 0; c < order_; ++c) out.push_back(ring_elem{c, tag_});
    return out;
  }

  std::vector<ring_elem> units(std::uint64_t cap = default_enum_cap) const {
    if (order_ > cap)
      throw cap_error("enumeration cap exceeded (order=" + std::to_string(order_) +
                      ", cap=" + std::to_string(cap) + "); use implicit adjacency paths");
    std::vector<ring_elem> out;
    out.reserve(unit_count());
    for (std::uint64_t c = 0; c < order_; ++c)
      if (is_unit_code(c)) out.push_back(ring_elem{c, tag_});
    return out;
  }

  // ---- raw code operations (hot paths: no ownership checks) ----

  std::uint64_t add_code(std::uint64_t a, std::uint64_t b) const {
    if (family_ == ring_family::integer_modular) {
      std::uint64_t s = a + b;
      return s >= order_ ? s - order_ : s;
    }
    std::uint64_t out = 0, mult = 1;
    for (unsigned i = 0; i < digits_; ++i) {
      std::uint64_t da = a % p_, db = b % p_;
      a /= p_;
      b /= p_;
      std::uint64_t s = da + db;
      if (s >= p_) s -= p_;
      out += s * mult;
      mult *= p_;
    }
    return out;
  }

  std::uint64_t neg_code(std::uint64_t a) const {
    if (family_ == ring_family::integer_modular) return a == 0 ? 0 : order_ - a;
    std::uint64_t out = 0, mult = 1;
    for (unsigned i = 0; i < digits_; ++i) {
      std::uint64_t da = a % p_;
      a /= p_;
      out += (da == 0 ? 0 : p_ - da) * mult;
      mult *= p_;
    }
    return out;
  }

  std::uint64_t sub_code(std::uint64_t a, std::uint64_t b) const { return add_code(a, neg_code(b)); }

  std::uint64_t mul_code(std::uint64_t a, std::uint64_t b) const {
    if (family_ == ring_family::integer_modular) {
      if (order_ <= 0xFFFFFFFFull) return a * b % order_;
      return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % order_);
    }
    std::array<std::uint32_t, 64> da{}, db{};
    decode(a, da);
    decode(b, db);
    std::array<std::uint64_t, 128> acc{};
    for (unsigned i = 0; i < digits_; ++i) {
      if (da[i] == 0) continue;
      const std::uint64_t ai = da[i];
      for (unsigned j = 0; j < digits_; ++j) acc[i + j] += ai * db[j];
    }
    // fold x^(D+k) back using the precomputed reduction rows
    for (unsigned k = 2 * digits_ - 2; k >= digits_ && k < 128; --k) {
      const std::uint64_t c = acc[k] % p_;
      if (c != 0) {
        const auto& row = xpow_red_[k - digits_];
        for (unsigned j = 0; j < digits_; ++j) acc[j] += c * row[j];
      }
      acc[k] = 0;
      if (k == digits_) break;
    }
    std::uint64_t out = 0, mult = 1;
    for (unsigned i = 0; i < digits_; ++i) {
      out += (acc[i] % p_) * mult;
      mult *= p_;
    }
    return out;
  }

  std::uint64_t pow_code(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t result = from_int_code(1), base = a;
    while (e != 0) {
      if (e & 1) result = mul_code(result, base);
      base = mul_code(base, base);
      e >>= 1;
    }
    return result;
  }

  bool is_unit_code(std::uint64_t a) const {
    if (family_ == ring_family::integer_modular) return a % p_ != 0;
    detail::poly pa = decode_poly(a);
    return !detail::poly_rem(std::move(pa), f_, p_).empty();
  }

  unsigned valuation_code(std::uint64_t a) const {
    if (a == 0) return r_;
    if (family_ == ring_family::integer_modular) {
      unsigned k = 0;
      while (a % p_ == 0) {
        a /= p_;
        ++k;
      }
      return k;
    }
    detail::poly pa = decode_poly(a);
    unsigned k = 0;
    detail::poly quotient;
    while (detail::poly_divide_exact(pa, f_, p_, &quotient)) {
      pa = quotient;
      ++k;
      if (pa.empty()) break;
    }
    return k;
  }

  std::uint64_t invert_code(std::uint64_t a) const {
    if (!is_unit_code(a))
      throw non_unit_error("invert: element with code " + std::to_string(a) + " in " + to_string() +
                           " is not a unit (valuation " + std::to_string(valuation_code(a)) + ")");
    std::uint64_t b;
    if (order_ < exhaustive_invert_threshold) {
      b = invert_exhaustive(a);
    } else {
      b = invert_hensel(a);
    }
    if (mul_code(a, b) != from_int_code(1)) throw error("invert: postcondition a*b == 1 failed");
    return b;
  }

  // Exposed so tests can cross-check the two inversion routes.
  std::uint64_t invert_exhaustive(std::uint64_t a) const {
    const std::uint64_t one_c = from_int_code(1);
    for (std::uint64_t b = 0; b < order_; ++b)
      if (mul_code(a, b) == one_c) return b;
    throw error("invert: no inverse found (element is not a unit?)");
  }

  // Newton lift of the residue-field inverse: b <- b(2 - ab) doubles the
  // precision in z each step.
  std::uint64_t invert_hensel(std::uint64_t a) const {
    std::uint64_t b;
    if (family_ == ring_family::integer_modular) {
      b = modpow_u64(a % p_, p_ - 2, p_);
    } else {
      detail::poly abar = detail::poly_rem(decode_poly(a), f_, p_);
      detail::poly binv = detail::poly_powmod(abar, q_ - 2, f_, p_);
      b = encode_poly(binv);
    }
    const std::uint64_t two = from_int_code(2);
    unsigned steps = 0;
    for (unsigned prec = 1; prec < r_; prec *= 2) ++steps;
    for (unsigned i = 0; i < steps; ++i) b = mul_code(b, sub_code(two, mul_code(a, b)));
    return b;
  }

  static constexpr std::uint64_t exhaustive_invert_threshold = 1000;

 private:
  void check(ring_elem a) const {
    if (a.tag != tag_)
      throw mixed_ring_error("element does not belong to ring " + to_string());
  }
  void check2(ring_elem a, ring_elem b) const { check(a); check(b); }

  void validate_common() const {
    if (!detail::is_prime_u64(p_))
      throw error("construction check failed: p=" + std::to_string(p_) + " is not prime");
    if (p_ == 2) throw error("construction check failed: p must be odd (q is required to be odd)");
    if (r_ < 1) throw error("construction check failed: nilpotency degree r must be >= 1");
    if (family_ == ring_family::polynomial_quotient && p_ > (1u << 20))
      throw error("construction check failed: polynomial family requires p < 2^20");
  }

  void finish_init() { tag_ = detail::fnv1a(to_string()); }

  void build_reduction_rows() {
    // row k holds the coefficients of x^(D+k) mod f^r, 0 <= k <= D-2
    const unsigned D = digits_;
    xpow_red_.assign(D > 1 ? D - 1 : 1, std::vector<std::uint32_t>(D, 0));
    // x^D = -(m_0 + m_1 x + ... + m_{D-1} x^{D-1})
    std::vector<std::uint32_t> cur(D);
    for (unsigned j = 0; j < D; ++j)
      cur[j] = static_cast<std::uint32_t>((p_ - mod_[j]) % p_);
    xpow_red_[0] = cur;
    for (unsigned k = 1; k + 1 < D; ++k) {
      std::vector<std::uint32_t> next(D, 0);
      const std::uint32_t carry = cur[D - 1];
      for (unsigned j = D - 1; j >= 1; --j) next[j] = cur[j - 1];
      next[0] = 0;
      if (carry != 0)
        for (unsigned j = 0; j < D; ++j)
          next[j] = static_cast<std::uint32_t>((next[j] + std::uint64_t{carry} * xpow_red_[0][j]) % p_);
      xpow_red_[k] = next;
      cur = std::move(next);
    }
  }

  std::uint64_t from_int_code(std::int64_t v) const {
    if (family_ == ring_family::integer_modular) {
      std::int64_t m = v % static_cast<std::int64_t>(order_);
      if (m < 0) m += static_cast<std::int64_t>(order_);
      return static_cast<std::uint64_t>(m);
    }
    std::int64_t m = v % static_cast<std::int64_t>(p_);
    if (m < 0) m += static_cast<std::int64_t>(p_);
    return static_cast<std::uint64_t>(m);
  }

  std::uint64_t uniformizer_code() const {
    if (family_ == ring_family::integer_modular) return p_ % order_;
    if (r_ == 1) return 0;  // maximal ideal of a field is (0)
    return encode_poly(f_);
  }

  void decode(std::uint64_t a, std::array<std::uint32_t, 64>& out) const {
    for (unsigned i = 0; i < digits_; ++i) {
      out[i] = static_cast<std::uint32_t>(a % p_);
      a /= p_;
    }
  }

  detail::poly decode_poly(std::uint64_t a) const {
    detail::poly out(digits_);
    for (unsigned i = 0; i < digits_; ++i) {
      out[i] = static_cast<std::uint32_t>(a % p_);
      a /= p_;
    }
    detail::poly_trim(out);
    return out;
  }

  std::uint64_t encode_poly(const detail::poly& a) const {
    std::uint64_t out = 0, mult = 1;
    for (unsigned i = 0; i < digits_; ++i) {
      out += (i < a.size() ? a[i] : 0) * mult;
      mult *= p_;
    }
    return out;
  }

  static std::uint64_t modpow_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t acc = 1 % m;
    b %= m;
    while (e != 0) {
      if (e & 1) acc = static_cast<std::uint64_t>(static_cast<unsigned __int128>(acc) * b % m);
      b = static_cast<std::uint64_t>(static_cast<unsigned __int128>(b) * b % m);
      e >>= 1;
    }
    return acc;
  }

  ring_family family_ = ring_family::integer_modular;
  std::uint64_t p_ = 0;
  unsigned r_ = 0;
  std::vector<std::uint32_t> f_;  // polynomial family: irreducible monic f
  unsigned fdeg_ = 0;             // deg f
  unsigned digits_ = 0;           // D = r * deg f
  std::vector<std::uint32_t> mod_;
  std::vector<std::vector<std::uint32_t>> xpow_red_;
  std::uint64_t q_ = 0, order_ = 0, tag_ = 0;
};

}  // namespace fvr
