#include "vsl/app.hpp"

#include <cmath>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "vsl/config.hpp"
#include "vsl/sim.hpp"

namespace vsl {

namespace {

bool traces_identical(const SimTrace& a, const SimTrace& b) {
  return a.times == b.times && a.rho == b.rho && a.b == b.b &&
         a.clf_values == b.clf_values && a.min_h == b.min_h &&
         a.delta == b.delta && a.qp_status == b.qp_status;
}

int check(bool ok, const char* name, int& failures) {
  std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
  if (!ok) ++failures;
  return failures;
}

}  // namespace

int seed_check() {
  int failures = 0;
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  {  // quadrature is linear
    const Grid g = make_grid(1000.0, 100);
    CellField f(g.n_cells), h(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) {
      f[i] = unit(rng);
      h[i] = unit(rng);
    }
    CellField combo(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) combo[i] = 3.5 * f[i] + h[i];
    const double lhs = integrate(combo, g);
    const double rhs = 3.5 * integrate(f, g) + integrate(h, g);
    check(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)),
          "integrate is linear", failures);
  }
  {  // upwind gradient of a constant vanishes
    const Grid g = make_grid(500.0, 50);
    const CellField f = constant_field(g, 4.2);
    std::vector<int> signs(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) signs[i] = (i % 2) ? 1 : -1;
    const CellField grad = upwind_gradient(f, signs, g);
    bool ok = true;
    for (double v : grad) ok = ok && v == 0.0;
    check(ok, "upwind gradient of constant is zero", failures);
  }
  {  // demand/supply envelope reproduces the flow law
    const FundamentalDiagram fd = make_diagram(20.0, 0.015, 0.15);
    bool ok = true;
    for (int i = 0; i <= 200; ++i) {
      const double rho = fd.rho_max * i / 200.0;
      const DemandSupply ds = demand_supply(rho, 0.8, fd);
      ok = ok && std::fabs(std::min(ds.demand, ds.supply) - flow(rho, 0.8, fd)) <
                     1e-14;
    }
    check(ok, "min(demand, supply) equals flow", failures);
  }
  {  // short closed-loop run conserves vehicles
    ScenarioConfig cfg = preset("clf_cbf_profile1");
    cfg.t_final_s = 10.0;
    const SimTrace t = simulate(cfg);
    check(t.stats.mass_drift_rel_max <= 1e-10, "vehicle count conserved",
          failures);
  }
  {  // random QPs certify their own KKT conditions
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
      std::uniform_int_distribution<int> dim(1, 5);
      const int n = dim(rng);
      qp::DenseQp p;
      p.h_diag.resize(n);
      for (double& d : p.h_diag) d = 0.5 + std::fabs(unit(rng)) * 3.0;
      p.lb.assign(n, -1.5);
      p.ub.assign(n, 1.5);
      std::uniform_int_distribution<int> rows(0, 3);
      const int m = rows(rng);
      for (int r = 0; r < m; ++r) {
        std::vector<double> a(n);
        for (double& v : a) v = unit(rng);
        p.G.push_back(a);
        p.g.push_back(unit(rng));
      }
      const qp::DenseSolution sol = qp::solve(p, 1e-8);
      if (sol.status == qp::Status::Optimal) {
        ok = qp::check_kkt(p, sol).worst() <= 1e-8;
      } else {
        ok = sol.status == qp::Status::Infeasible;
      }
    }
    check(ok, "random QPs pass KKT certification", failures);
  }
  {  // identical config gives an identical trace
    ScenarioConfig cfg = preset("cbf_only");
    cfg.t_final_s = 5.0;
    const SimTrace a = simulate(cfg);
    const SimTrace b = simulate(cfg);
    check(traces_identical(a, b), "simulation is deterministic", failures);
  }
  if (failures == 0) {
    std::cout << "seed-check: all invariants hold\n";
  } else {
    std::cout << "seed-check: " << failures << " failure(s)\n";
  }
  return failures == 0 ? 0 : 1;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"LWR traffic simulator with CLF/sCBF variable-speed-limit control"};
  app.name("vslsim");

  std::string config_path, preset_name, mode_text, out_dir, dump_name;
  std::vector<std::string> overrides;
  bool do_seed_check = false, do_list = false;

  app.add_option("--config", config_path, "scenario config file");
  app.add_option("--preset", preset_name, "bundled scenario name");
  app.add_option("--mode", mode_text,
                 "override controller mode (uncontrolled|clf|cbf|clf-cbf)");
  app.add_option("--out", out_dir, "output directory for trace CSVs");
  app.add_flag("--seed-check", do_seed_check, "run the built-in invariant suite");
  app.add_option("--dump-preset", dump_name, "print a preset config and exit");
  app.add_flag("--list-presets", do_list, "list bundled scenario names");
  app.add_option("overrides", overrides, "key=value config overrides");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (do_seed_check) return seed_check();
    if (do_list) {
      for (const std::string& n : preset_names()) std::cout << n << "\n";
      return 0;
    }
    if (!dump_name.empty()) {
      std::cout << write_config(preset(dump_name));
      return 0;
    }
    if (config_path.empty() == preset_name.empty()) {
      std::cerr << "vslsim: exactly one of --config or --preset is required\n";
      return 1;
    }

    ScenarioConfig cfg =
        config_path.empty() ? preset(preset_name) : load_config(config_path);
    if (!mode_text.empty()) cfg.mode = parse_mode(mode_text);
    for (const std::string& ov : overrides) apply_override(cfg, ov);
    validate(cfg);

    const Simulation sim = build_simulation(cfg);
    const SimTrace trace = simulate(sim);
    const std::string dir = out_dir.empty() ? "out/" + cfg.name : out_dir;
    write_trace(trace, sim.grid, dir);
    std::cout << "scenario " << cfg.name << ": " << summary_line(trace) << "\n";
    return 0;
  } catch (const std::exception& err) {
    std::cerr << "vslsim: " << err.what() << "\n";
    return 1;
  }
}

}  // namespace vsl
