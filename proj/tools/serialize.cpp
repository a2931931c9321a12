#include "serialize.hpp"

#include <charconv>
#include <limits>

namespace kgstab::cli {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string format_number(double v) {
  // std::to_chars ignores the C locale, unlike printf.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general,
                                 std::numeric_limits<double>::max_digits10);
  return std::string(buf, res.ptr);
}

json params_json(const ModelParams& p) {
  return {{"a", p.a()},
          {"b", p.b()},
          {"m", p.m()},
          {"tau", tau(p)},
          {"omega_star", omega_star(p)}};
}

json to_json(const Extremum& e) {
  return {{"value", e.value}, {"argmax", e.argmax}};
}

json to_json(const StabilityReport& r) {
  json intervals = json::array();
  for (const auto& iv : r.intervals) {
    intervals.push_back({{"lo", iv.lo}, {"hi", iv.hi}, {"verdict", to_string(iv.verdict)}});
  }
  json probes = json::array();
  for (const auto& pr : r.oracle_probes) {
    probes.push_back({{"omega", pr.omega},
                      {"h_omega", pr.h_omega},
                      {"d_second", pr.d_second},
                      {"closed_sign", pr.closed_sign}});
  }
  return {{"tau", r.tau},
          {"tau_star", r.tau_star},
          {"critical_tau", r.critical_tau},
          {"omega_window", {{"lo", r.omega_window.omega_star}, {"hi", r.omega_window.m}}},
          {"roots_alpha", r.roots_alpha},
          {"roots_omega", r.roots_omega},
          {"intervals", intervals},
          {"degenerate", r.degenerate},
          {"oracle_probes", probes}};
}

json to_json(const SpectrumReport& r) {
  return {{"omega", r.omega},
          {"half_length", r.half_length},
          {"step", r.step},
          {"kernel_band", r.kernel_band},
          {"essential_edge", r.essential_edge},
          {"lplus_eigenvalues", r.lplus_eigenvalues},
          {"lminus_eigenvalues", r.lminus_eigenvalues},
          {"lplus_kernel_match", r.lplus_kernel_match},
          {"lminus_kernel_match", r.lminus_kernel_match},
          {"negative_count_lplus", r.negative_count_lplus},
          {"negative_count_lminus", r.negative_count_lminus}};
}

json to_json(const RunSummary& s, const Diagnostics& d) {
  return {{"samples", d.times.size()},
          {"final_time", d.times.empty() ? 0.0 : d.times.back()},
          {"half_length", d.half_length},
          {"step_x", d.step_x},
          {"step_t", d.step_t},
          {"truncated", d.truncated},
          {"blowup_time", optional_number(d.blowup_time)},
          {"tail_contact_time", optional_number(d.tail_contact_time)},
          {"orbit_norm", s.orbit_norm},
          {"max_rel_energy_drift", s.max_rel_energy_drift},
          {"max_rel_charge_drift", s.max_rel_charge_drift},
          {"initial_distance", s.initial_distance},
          {"max_distance", s.max_distance},
          {"crossing_10x", optional_number(s.crossing_10x)},
          {"crossing_100x", optional_number(s.crossing_100x)}};
}

json envelope(const std::string& command, const json& params, const json& payload) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"params", params},
          {"payload", payload}};
}

}  // namespace kgstab::cli
