// Command-line front end: soliton profile, modulation constants, reduced
// dynamics, regime classification, collapse thresholds, f1 tables, sweeps.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "shnls/dynamics.hpp"
#include "shnls/figures.hpp"
#include "shnls/functionals.hpp"
#include "shnls/helmholtz.hpp"
#include "shnls/io.hpp"
#include "shnls/regime.hpp"
#include "shnls/soliton.hpp"

namespace fs = std::filesystem;
using shnls::ordered_json;

namespace {

struct Ctx {
  std::string out_dir = "out";
  std::string snapshot;  // defaults to <out_dir>/constants_snapshot.json
  bool recompute = false;
  shnls::SolitonConfig scfg;

  std::shared_ptr<shnls::SolitonProfile> profile;
  std::shared_ptr<shnls::ModulationConstants> constants;

  fs::path snapshot_path() const {
    return snapshot.empty() ? fs::path(out_dir) / "constants_snapshot.json"
                            : fs::path(snapshot);
  }

  // Constants are computed once and cached; the snapshot stores R0 so the
  // profile can be rebuilt without re-shooting.
  void ensure(bool need_profile) {
    if (constants && (!need_profile || profile)) return;
    const fs::path snap = snapshot_path();
    if (!recompute && fs::exists(snap)) {
      std::ifstream in(snap);
      ordered_json j = ordered_json::parse(in);
      shnls::SolitonConfig c = scfg;
      c.r_max = j["soliton"]["r_max"].get<double>();
      c.grid_step = j["soliton"]["grid_step"].get<double>();
      auto mc = std::make_shared<shnls::ModulationConstants>();
      const auto& k = j["constants"];
      mc->Nc = k["Nc"].get<double>();
      mc->M = k["M"].get<double>();
      mc->P4 = k["P4"].get<double>();
      mc->grad_norm = k["grad_norm"].get<double>();
      auto dual = [](const ordered_json& d) {
        shnls::DualConstant x;
        x.value_direct = d["direct"].get<double>();
        x.value_ibp = d["ibp"].get<double>();
        x.rel_discrepancy = d["rel_discrepancy"].get<double>();
        return x;
      };
      mc->C1 = dual(k["C1"]);
      mc->C2 = dual(k["C2"]);
      mc->C3 = dual(k["C3"]);
      mc->pohozaev_p4 = k["pohozaev"]["p4_rel"].get<double>();
      mc->pohozaev_grad = k["pohozaev"]["grad_rel"].get<double>();
      constants = mc;
      if (need_profile && !profile) {
        const double R0 = j["soliton"]["R0"].get<double>();
        profile = std::make_shared<shnls::SolitonProfile>(
            shnls::solve_townes_from_R0(c, R0));
      }
      return;
    }
    profile = std::make_shared<shnls::SolitonProfile>(shnls::solve_townes(scfg));
    constants =
        std::make_shared<shnls::ModulationConstants>(shnls::compute_all(*profile));
    ordered_json j;
    j["soliton"] = {{"R0", profile->R0},
                    {"r_max", profile->r_max},
                    {"grid_step", profile->grid_step},
                    {"tail_coeff", profile->tail_coeff},
                    {"residual_max", profile->residual_max}};
    j["constants"] = shnls::constants_json(*constants);
    shnls::atomic_write(snap, shnls::dump_json(j));
  }
};

shnls::ModelOrder parse_order(const std::string& s) {
  if (s == "unperturbed") return shnls::ModelOrder::Unperturbed;
  if (s == "o1") return shnls::ModelOrder::Order1;
  if (s == "o2") return shnls::ModelOrder::Order2;
  if (s == "o3") return shnls::ModelOrder::Order3;
  if (s == "exact") return shnls::ModelOrder::Exact;
  throw CLI::ValidationError("--order", "unknown order '" + s + "'");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) v.push_back(std::stod(tok));
  }
  if (v.empty()) throw shnls::Error("empty numeric list: '" + s + "'");
  return v;
}

// Apply --config FILE as defaults: its key/value pairs become arguments
// inserted before the user's own flags, so explicit flags win (take-last).
std::vector<std::string> apply_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string cfg_file;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      cfg_file = args[i + 1];
      args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
      break;
    }
  }
  if (cfg_file.empty()) return args;
  std::ifstream in(cfg_file);
  if (!in) throw shnls::Error("cannot open config file " + cfg_file);
  ordered_json j = ordered_json::parse(in);
  std::vector<std::string> injected;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string val;
    if (it.value().is_string()) val = it.value().get<std::string>();
    else val = it.value().dump();
    injected.push_back("--" + it.key() + "=" + val);
  }
  // insert right after the subcommand token (a bare leading-dash scan would
  // stop on option *values* such as the --out-dir argument)
  static const std::set<std::string> kSubcommands{
      "townes", "constants", "simulate", "classify",
      "threshold", "f1-table", "sweep"};
  std::size_t pos = 0;
  while (pos < args.size() && !kSubcommands.count(args[pos])) ++pos;
  if (pos < args.size()) ++pos;
  args.insert(args.begin() + long(pos), injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  Ctx ctx;
  CLI::App app{"modulation-theory toolkit for the critical NLS-Helmholtz system"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--out-dir", ctx.out_dir, "output directory");
  app.add_option("--snapshot", ctx.snapshot, "constants snapshot path");
  app.add_flag("--recompute-constants", ctx.recompute,
               "ignore any cached snapshot");
  app.add_option("--r-max", ctx.scfg.r_max, "soliton domain size");
  app.add_option("--grid-step", ctx.scfg.grid_step, "soliton grid step");

  // ---- townes ----
  auto* c_townes = app.add_subcommand("townes", "solve the ground-state profile");

  // ---- constants ----
  auto* c_const = app.add_subcommand("constants", "compute modulation constants");

  // ---- shared simulate/classify/threshold options ----
  std::string order_s = "o1";
  double alpha = 0.01, beta0 = 0.01, L0 = 1.0, dLt0 = 0.0;
  double beta_init = std::numeric_limits<double>::quiet_NaN();
  double t_max = -1.0, rel_tol = 1e-10, abs_tol = 1e-12;
  bool loss = false;
  std::string figure;

  auto add_common = [&](CLI::App* c, bool with_dl) {
    c->add_option("--order", order_s, "unperturbed|o1|o2|o3|exact");
    c->add_option("--alpha", alpha, "Helmholtz length alpha");
    c->add_option("--beta0", beta0, "conserved beta0");
    c->add_option("--beta-init", beta_init,
                  "initial beta(0); resolved to beta0 via the converter");
    c->add_option("--L0", L0, "initial width L(0)");
    if (with_dl) c->add_option("--dLt0", dLt0, "initial dL/dt");
    c->add_option("--t-max", t_max, "time horizon (default 1e3*L0^2)");
  };

  auto* c_sim = app.add_subcommand("simulate", "integrate the reduced dynamics");
  add_common(c_sim, true);
  c_sim->add_option("--rel-tol", rel_tol, "integrator relative tolerance");
  c_sim->add_option("--abs-tol", abs_tol, "integrator absolute tolerance");
  c_sim->add_flag("--loss", loss, "include the loss term (unperturbed only)");
  c_sim->add_option("--figure", figure, "named figure recipe (overrides options)");

  auto* c_cls = app.add_subcommand("classify", "predict the dynamic regime");
  add_common(c_cls, true);

  double br_lo = -100.0, br_hi = 0.0, width = 1e-4;
  auto* c_thr =
      app.add_subcommand("threshold", "bisect the collapse threshold in dL(0)");
  add_common(c_thr, false);
  c_thr->add_option("--bracket-lo", br_lo, "collapsing end of the dL(0) bracket");
  c_thr->add_option("--bracket-hi", br_hi, "surviving end of the dL(0) bracket");
  c_thr->add_option("--width", width, "bisection width target");

  double eps_min = 1e-3, eps_max = 0.3;
  int eps_count = 25;
  auto* c_f1 = app.add_subcommand("f1-table", "tabulate f1 vs eps = alpha/L");
  c_f1->add_option("--L0", L0, "width at which f1 is evaluated");
  c_f1->add_option("--eps-min", eps_min, "smallest eps");
  c_f1->add_option("--eps-max", eps_max, "largest eps");
  c_f1->add_option("--eps-count", eps_count, "log-spaced sample count");

  std::string alpha_list = "0.01", beta0_list = "0.01", L0_list = "1",
              dLt0_list = "0";
  int jobs = 0;
  auto* c_swp = app.add_subcommand("sweep", "cartesian parameter sweep (JSONL)");
  c_swp->add_option("--order", order_s, "o1|o2|o3");
  c_swp->add_option("--alpha-list", alpha_list, "comma-separated alphas");
  c_swp->add_option("--beta0-list", beta0_list, "comma-separated beta0s");
  c_swp->add_option("--L0-list", L0_list, "comma-separated L(0)s");
  c_swp->add_option("--dLt0-list", dLt0_list, "comma-separated dL(0)s");
  c_swp->add_option("--t-max", t_max, "time horizon (default 1e3*L0^2)");
  c_swp->add_option("--jobs", jobs, "worker threads (0 = hardware)");

  std::vector<std::string> args;
  try {
    args = apply_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(int(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const fs::path out(ctx.out_dir);
    const shnls::ModelOrder order = parse_order(order_s);

    auto build_spec = [&](shnls::ModelOrder ord) {
      shnls::ModelSpec spec;
      spec.order = ord;
      spec.alpha = alpha;
      spec.constants = *ctx.constants;
      spec.loss_term = loss;
      if (ord == shnls::ModelOrder::Exact) {
        ctx.ensure(true);
        spec.constants = *ctx.constants;
        spec.f1 = std::make_shared<shnls::F1Engine>(*ctx.profile);
      }
      spec.beta0 = beta0;
      if (!std::isnan(beta_init))
        spec.beta0 = shnls::beta0_from_initial_beta(spec, beta_init, L0);
      return spec;
    };

    if (*c_townes) {
      ctx.ensure(true);
      shnls::atomic_write(out / "townes_profile.csv",
                          shnls::profile_csv(*ctx.profile));
      shnls::atomic_write(out / "townes_profile.json",
                          shnls::dump_json(shnls::profile_json(*ctx.profile)));
      std::cout << shnls::dump_json(shnls::profile_json(*ctx.profile));
    } else if (*c_const) {
      ctx.ensure(false);
      const auto j = shnls::constants_json(*ctx.constants);
      shnls::atomic_write(out / "constants.json", shnls::dump_json(j));
      std::cout << shnls::dump_json(j);
    } else if (*c_sim) {
      ctx.ensure(order == shnls::ModelOrder::Exact);
      shnls::ModelSpec spec;
      shnls::ReducedState init;
      shnls::StepControl ctrl;
      std::string tag;
      if (!figure.empty()) {
        const auto rec = shnls::figure_recipe(figure, *ctx.constants);
        spec = rec.spec;
        init = rec.init;
        ctrl = rec.ctrl;
        tag = rec.name;
      } else {
        spec = build_spec(order);
        init.L = L0;
        init.dL = dLt0;
        init.beta = spec.beta0;
        ctrl.t_max = t_max > 0.0 ? t_max : 1e3 * L0 * L0;
        ctrl.rel_tol = rel_tol;
        ctrl.abs_tol = abs_tol;
        tag = "run";
      }
      const auto res = shnls::integrate(init, spec, ctrl);
      shnls::atomic_write(out / ("trajectory_" + tag + ".csv"),
                          shnls::trajectory_csv(res, spec));
      const auto j = shnls::outcome_json(res);
      shnls::atomic_write(out / ("outcome_" + tag + ".json"),
                          shnls::dump_json(j));
      std::cout << shnls::dump_json(j);
    } else if (*c_cls) {
      ctx.ensure(false);
      const auto spec = build_spec(order);
      shnls::RegimeReport rep;
      if (order == shnls::ModelOrder::Order1)
        rep = shnls::classify_o1(L0, dLt0, spec);
      else if (order == shnls::ModelOrder::Order2)
        rep = shnls::classify_o2(L0, dLt0, spec);
      else
        throw shnls::UnsupportedOrder("classify: supported orders are o1, o2");
      const auto j = shnls::regime_json(rep);
      shnls::atomic_write(out / "classify.json", shnls::dump_json(j));
      std::cout << shnls::dump_json(j);
    } else if (*c_thr) {
      ctx.ensure(false);
      const auto spec = build_spec(order);
      shnls::ReducedState tmpl;
      tmpl.L = L0;
      const auto res =
          shnls::threshold_bisect(tmpl, spec, br_lo, br_hi, width, t_max);
      ordered_json j;
      j["dL_threshold"] = res.dL_threshold;
      j["bracket"] = {res.bracket_lo, res.bracket_hi};
      j["iterations"] = res.iterations;
      j["t_max_used"] = res.t_max_used;
      shnls::atomic_write(out / "threshold.json", shnls::dump_json(j));
      std::cout << shnls::dump_json(j);
    } else if (*c_f1) {
      ctx.ensure(true);
      if (eps_count < 2 || !(eps_max > eps_min) || !(eps_min > 0.0))
        throw shnls::EpsOutOfRange("f1-table: bad eps range");
      shnls::F1Engine eng(*ctx.profile);
      std::string csv = "eps,f1_exact,f1_order1,f1_order2,f1_order3\n";
      for (int i = 0; i < eps_count; ++i) {
        const double x = double(i) / double(eps_count - 1);
        const double eps = eps_min * std::pow(eps_max / eps_min, x);
        const auto ev = eng.evaluate(L0, eps * L0);
        csv += shnls::format_g17(eps) + "," + shnls::format_g17(ev.f1_exact) +
               "," + shnls::format_g17(ev.f1_order1) + "," +
               shnls::format_g17(ev.f1_order2) + "," +
               shnls::format_g17(ev.f1_order3) + "\n";
      }
      shnls::atomic_write(out / "f1_table.csv", csv);
      std::cout << csv;
    } else if (*c_swp) {
      ctx.ensure(false);
      const auto as = parse_list(alpha_list);
      const auto bs = parse_list(beta0_list);
      const auto ls = parse_list(L0_list);
      const auto ds = parse_list(dLt0_list);
      struct Point {
        double a, b, l, d;
      };
      std::vector<Point> pts;
      for (double a : as)
        for (double b : bs)
          for (double l : ls)
            for (double d : ds) pts.push_back({a, b, l, d});
      std::vector<std::string> lines(pts.size());
      const int nw = jobs > 0 ? jobs
                              : int(std::max(1u, std::thread::hardware_concurrency()));
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= pts.size()) return;
          const auto& pt = pts[i];
          ordered_json j;
          j["alpha"] = pt.a;
          j["beta0"] = pt.b;
          j["L0"] = pt.l;
          j["dLt0"] = pt.d;
          try {
            shnls::ModelSpec spec;
            spec.order = order;
            spec.alpha = pt.a;
            spec.beta0 = pt.b;
            spec.constants = *ctx.constants;
            shnls::ReducedState init;
            init.L = pt.l;
            init.dL = pt.d;
            shnls::StepControl ctrl;
            ctrl.t_max = t_max > 0.0 ? t_max : 1e3 * pt.l * pt.l;
            ctrl.store_series = false;
            const auto res = shnls::integrate(init, spec, ctrl);
            j["event"] = shnls::to_string(res.event.kind);
            j["t_event"] = res.event.t_event;
            j["L_min"] = res.L_min_overall;
            if (res.first_integral_drift)
              j["drift"] = *res.first_integral_drift;
          } catch (const std::exception& e) {
            j["error"] = e.what();
          }
          lines[i] = j.dump();
        }
      };
      std::vector<std::thread> threads;
      for (int w = 0; w < nw; ++w) threads.emplace_back(worker);
      for (auto& th : threads) th.join();
      std::string body;
      for (const auto& l : lines) body += l + "\n";
      shnls::atomic_write(out / "sweep.jsonl", body);
      std::cout << body;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
