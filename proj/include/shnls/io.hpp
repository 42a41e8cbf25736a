#pragma once

// Deterministic CSV/JSON emission: 17-significant-digit floats, ordered JSON
// keys, temp-then-rename writes.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shnls/dynamics.hpp"
#include "shnls/errors.hpp"
#include "shnls/functionals.hpp"
#include "shnls/regime.hpp"
#include "shnls/soliton.hpp"

namespace shnls {

using ordered_json = nlohmann::ordered_json;

inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("atomic_write: cannot open " + tmp.string());
    out << content;
    if (!out) throw Error("atomic_write: short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::string profile_csv(const SolitonProfile& p) {
  std::string s = "r,R,dR\n";
  for (std::size_t i = 0; i < p.n(); ++i) {
    s += format_g17(p.r[i]);
    s += ',';
    s += format_g17(p.R[i]);
    s += ',';
    s += format_g17(p.dR[i]);
    s += '\n';
  }
  return s;
}

inline ordered_json profile_json(const SolitonProfile& p) {
  ordered_json j;
  j["R0"] = p.R0;
  j["r_max"] = p.r_max;
  j["grid_step"] = p.grid_step;
  j["tail_coeff"] = p.tail_coeff;
  j["residual_max"] = p.residual_max;
  return j;
}

inline ordered_json dual_json(const DualConstant& d) {
  ordered_json j;
  j["value"] = d.value();
  j["direct"] = d.value_direct;
  j["ibp"] = d.value_ibp;
  j["rel_discrepancy"] = d.rel_discrepancy;
  return j;
}

inline ordered_json constants_json(const ModulationConstants& c) {
  ordered_json j;
  j["Nc"] = c.Nc;
  j["M"] = c.M;
  j["P4"] = c.P4;
  j["grad_norm"] = c.grad_norm;
  j["C1"] = dual_json(c.C1);
  j["C2"] = dual_json(c.C2);
  j["C3"] = dual_json(c.C3);
  j["pohozaev"] = {{"p4_rel", c.pohozaev_p4}, {"grad_rel", c.pohozaev_grad}};
  return j;
}

inline std::string trajectory_csv(const SimulationOutcome& out,
                                  const ModelSpec& spec) {
  const bool has_fi = spec.order == ModelOrder::Order1 ||
                      spec.order == ModelOrder::Order2 ||
                      spec.order == ModelOrder::Order3;
  double fi0 = 0.0, sc = 1.0;
  if (has_fi && !out.series.empty()) {
    fi0 = first_integral(out.series.front(), spec);
    sc = first_integral_scale(out.series.front(), spec);
  }
  std::string s = "t,L,dL,beta,tau,first_integral_residual\n";
  for (const auto& st : out.series) {
    s += format_g17(st.t);
    s += ',';
    s += format_g17(st.L);
    s += ',';
    s += format_g17(st.dL);
    s += ',';
    s += format_g17(st.beta);
    s += ',';
    s += format_g17(st.tau);
    s += ',';
    s += format_g17(has_fi ? (first_integral(st, spec) - fi0) / sc : 0.0);
    s += '\n';
  }
  return s;
}

inline ordered_json event_json(const Event& ev) {
  ordered_json j;
  j["kind"] = to_string(ev.kind);
  j["t_event"] = ev.t_event;
  j["L_min"] = ev.L_min;
  j["L_max"] = ev.L_max;
  j["period"] = ev.period;
  return j;
}

inline ordered_json outcome_json(const SimulationOutcome& out) {
  ordered_json j;
  j["event"] = event_json(out.event);
  j["final"] = {{"t", out.final_state.t},
                {"L", out.final_state.L},
                {"dL", out.final_state.dL},
                {"beta", out.final_state.beta},
                {"tau", out.final_state.tau}};
  if (out.first_integral_drift)
    j["first_integral_drift"] = *out.first_integral_drift;
  else
    j["first_integral_drift"] = nullptr;
  j["steps_accepted"] = out.steps_accepted;
  j["steps_rejected"] = out.steps_rejected;
  j["L_min_overall"] = out.L_min_overall;
  return j;
}

inline ordered_json regime_json(const RegimeReport& r) {
  ordered_json j;
  j["predicted"] = to_string(r.predicted);
  j["H0"] = r.H0;
  j["y_m"] = std::isnan(r.y_m) ? ordered_json(nullptr) : ordered_json(r.y_m);
  j["y_M"] = std::isnan(r.y_M) ? ordered_json(nullptr) : ordered_json(r.y_M);
  j["K"] = std::isnan(r.K) ? ordered_json(nullptr) : ordered_json(r.K);
  j["r_low"] =
      std::isnan(r.r_low) ? ordered_json(nullptr) : ordered_json(r.r_low);
  j["r_high"] =
      std::isnan(r.r_high) ? ordered_json(nullptr) : ordered_json(r.r_high);
  j["beta_small_ok"] = r.beta_small_ok;
  j["eps_small_ok"] = r.eps_small_ok;
  return j;
}

// JSON numbers lose the 17-digit guarantee through nlohmann's shortest-round-
// trip printer only in formatting, not value; dump() round-trips doubles
// exactly, which is all determinism needs.
inline std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace shnls
