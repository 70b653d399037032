#pragma once

// Serialization of certificates and expansion reports: the JSON certificate
// schema, the fixed-column CSV row, and the JSON mirror with provenance.

#include <cstdio>
#include <string>

#include <json.hpp>

#include "fvr/expansion.hpp"
#include "fvr/spectra.hpp"

namespace fvr {

using json = nlohmann::ordered_json;

inline std::string format_double(double v, const char* fmt = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

inline json cert_to_json(const spectral_cert& cert) {
  json j;
  j["ring"] = cert.ring_text;
  j["n"] = cert.n;
  j["d"] = cert.d;
  j["lambda"] = cert.lambda;
  j["bound"] = cert.bound;
  j["bound_holds"] = cert.bound_holds;
  j["bound_nontrivial"] = cert.bound_nontrivial;
  j["connected"] = cert.connected;
  j["non_bipartite"] = cert.non_bipartite;
  j["residual"] = cert.residual;
  return j;
}

inline const char* csv_header() {
  return "ring,theorem,A_size,B_size,C_size,m,f_size,BC_size,e_ST,S_size,T_size,lambda,"
         "chain_ok,explicit_ok,delta_emp";
}

inline std::string csv_row(const expansion_report& r) {
  std::string row;
  row += r.ring_text;
  row += ',';
  row += theorem_name(r.thm);
  row += ',';
  row += std::to_string(r.a_size) + ',' + std::to_string(r.b_size) + ',' +
         std::to_string(r.c_size) + ',';
  row += std::to_string(r.m) + ',' + std::to_string(r.f_size) + ',' +
         std::to_string(r.pair_size) + ',';
  row += std::to_string(r.e_st) + ',' + std::to_string(r.s_size) + ',' +
         std::to_string(r.t_size) + ',';
  row += format_double(r.lambda) + ',';
  row += r.chain_ok ? "true," : "false,";
  row += r.explicit_ok ? "true," : "false,";
  row += std::isnan(r.delta_emp) ? "NA" : format_double(r.delta_emp, "%.6f");
  return row;
}

inline json report_to_json(const expansion_report& r) {
  json j;
  j["ring"] = r.ring_text;
  j["q"] = r.q;
  j["r"] = r.r;
  j["theorem"] = theorem_name(r.thm);
  j["A_size"] = r.a_size;
  j["B_size"] = r.b_size;
  j["C_size"] = r.c_size;
  j["m"] = r.m;
  j["f_size"] = r.f_size;
  j["pair_size"] = r.pair_size;
  if (r.thm == theorem_id::three_sets) j["AC_size"] = r.ac_size;
  j["e_ST"] = r.e_st;
  j["S_size"] = r.s_size;
  j["T_size"] = r.t_size;
  j["lambda"] = r.lambda;
  j["triple_count"] = r.triple_count;
  j["lower_bound_num"] = r.triple_count;  // numerator of |A||B||C| / m
  j["chain_lower_ok"] = r.chain_lower_ok;
  j["chain_mixing_ok"] = r.chain_mixing_ok;
  j["chain_ok"] = r.chain_ok;
  j["explicit_rhs_st"] = r.explicit_rhs_st;
  j["st_cap_product"] = r.st_cap_product;
  j["explicit_st_ok"] = r.explicit_st_ok;
  j["explicit_ok"] = r.explicit_ok;
  j["caps_ok"] = r.caps_ok;
  if (std::isnan(r.delta_emp))
    j["delta_emp"] = nullptr;
  else
    j["delta_emp"] = r.delta_emp;
  if (r.thm == theorem_id::three_sets) {
    j["g_ratio_values"] = r.g_ratio_values;
    j["h_ratio_values"] = r.h_ratio_values;
    j["printed_matches_simplified"] = r.printed_matches_simplified;
  }
  return j;
}

inline json vinh_to_json(const vinh_report& r) {
  json j;
  j["A_size"] = r.a_size;
  j["sum_size"] = r.sum_size;
  j["product_size"] = r.product_size;
  j["ok"] = r.ok;
  j["slack"] = r.slack;
  return j;
}

inline json sharpness_to_json(const sharpness_report& r) {
  json j;
  j["p"] = r.p;
  j["base"] = r.base;
  j["start"] = r.start;
  j["requested_length"] = r.requested_length;
  j["A_size"] = r.a_size;
  j["f_size"] = r.f_size;
  j["AA_size"] = r.aa_size;
  j["ratio"] = r.ratio;
  return j;
}

}  // namespace fvr
