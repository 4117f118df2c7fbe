#include <cmath>
#include <string>

#include "doctest.h"
#include "vsl/config.hpp"
#include "vsl/sim.hpp"

using namespace vsl;

TEST_CASE("the bundled clf+cbf preset carries the case-study gains") {
  const ScenarioConfig c = preset("circular_clf_cbf");
  CHECK(c.mode == ControllerMode::ClfCbf);
  CHECK(c.gamma == 0.025);
  CHECK(c.alpha == 1.0);
  CHECK(c.p == 1000.0);
  CHECK(c.rho_max_veh_km == 150.0);
  CHECK(c.rho_cr_veh_km == 15.0);
  CHECK(c.v_max_km_h == 72.0);
  CHECK(c.length_m == 1000.0);
  CHECK(c.t_final_s == 200.0);
}

TEST_CASE("omitted keys fall back to the documented defaults") {
  const ScenarioConfig c = parse_config("mode = clf\n", "inline");
  const ScenarioConfig defaults;
  CHECK(c.n_cells == defaults.n_cells);
  CHECK(c.dt_s == defaults.dt_s);
  CHECK(c.gamma == defaults.gamma);
  CHECK(c.b_max == defaults.b_max);
  CHECK(c.u_min_per_m == defaults.u_min_per_m);
  CHECK(c.mean_zero == defaults.mean_zero);
  CHECK(c.mode == ControllerMode::ClfOnly);
}

TEST_CASE("invalid diagram ordering is a validation error") {
  CHECK_THROWS_AS(parse_config("rho_cr_veh_km = 200\n", "inline"),
                  ValidationError);
}

TEST_CASE("parse errors carry the line number") {
  try {
    parse_config("mode = clf\nnot a line\n", "inline");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(std::string(err.what()).find("inline:2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("mystery_key = 3\n", "inline"), ParseError);
}

TEST_CASE("write/load round-trips every preset exactly") {
  for (const std::string& name : preset_names()) {
    const ScenarioConfig c = preset(name);
    const ScenarioConfig back = parse_config(write_config(c), "roundtrip");
    CHECK(back == c);
  }
}

TEST_CASE("overrides reuse the config grammar") {
  ScenarioConfig c = preset("uncontrolled");
  apply_override(c, "gamma = 0.07");
  CHECK(c.gamma == 0.07);
  apply_override(c, "mode=cbf");
  CHECK(c.mode == ControllerMode::CbfOnly);
  CHECK_THROWS_AS(apply_override(c, "gamma"), ParseError);
}

TEST_CASE("profile grammar round-trips and evaluates") {
  const Grid g = make_grid(1000.0, 100);

  const ProfileSpec c = parse_profile("constant(42.5)");
  CHECK(profile_eval(c, g)[17] == 42.5);
  CHECK(parse_profile(to_string(c)) == c);

  const ProfileSpec pc = parse_profile("piecewise_constant(0,10, 500,60)");
  CHECK(profile_eval(pc, g)[0] == 10.0);
  CHECK(profile_eval(pc, g)[49] == 10.0);  // z = 495
  CHECK(profile_eval(pc, g)[50] == 60.0);  // z = 505
  CHECK(parse_profile(to_string(pc)) == pc);

  const ProfileSpec pl = parse_profile("piecewise_linear(0,0, 1000,100)");
  CHECK(profile_eval(pl, g)[0] == doctest::Approx(0.5));
  CHECK(profile_eval(pl, g)[99] == doctest::Approx(99.5));
  CHECK(parse_profile(to_string(pl)) == pl);

  const ProfileSpec bp = parse_profile("bump(10, 90, 880, 200)");
  const CellField f = profile_eval(bp, g);
  CHECK(f[87] == doctest::Approx(10.0 + 90.0 *
                                            std::cos(0.5 * M_PI * 5.0 / 200.0) *
                                            std::cos(0.5 * M_PI * 5.0 / 200.0)));
  CHECK(f[30] == 10.0);  // outside the support
  CHECK(parse_profile(to_string(bp)) == bp);
}

TEST_CASE("profile spec errors") {
  const Grid g = make_grid(1000.0, 100);
  CHECK_THROWS_AS(parse_profile("mystery(1)"), SpecError);
  CHECK_THROWS_AS(parse_profile("constant"), SpecError);
  CHECK_THROWS_AS(parse_profile("constant(a)"), SpecError);
  CHECK_THROWS_AS(profile_eval(parse_profile("piecewise_linear(0,1, 1500,2)"), g),
                  SpecError);
  CHECK_THROWS_AS(profile_eval(parse_profile("piecewise_linear(10,1, 5,2)"), g),
                  SpecError);
  CHECK_THROWS_AS(profile_eval(parse_profile("bump(0, 1, 2000, 10)"), g),
                  SpecError);
}

TEST_CASE("mode names round-trip") {
  for (ControllerMode m :
       {ControllerMode::Uncontrolled, ControllerMode::ClfOnly,
        ControllerMode::CbfOnly, ControllerMode::ClfCbf}) {
    CHECK(parse_mode(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_mode("pid"), ParseError);
}

TEST_CASE("build_simulation converts units and sizes the run") {
  const Simulation sim = build_simulation(preset("uncontrolled"));
  CHECK(sim.fd.v_max == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(sim.fd.rho_cr == doctest::Approx(0.015).epsilon(1e-12));
  CHECK(sim.fd.rho_max == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(sim.steps == 800);
  CHECK(sim.stride == 4);  // one snapshot per second at dt = 0.25
  CHECK(sim.grid.n_cells == 100);
}

TEST_CASE("CFL-violating configs are rejected") {
  ScenarioConfig c = preset("uncontrolled");
  c.dt_s = 0.5;  // bound is 0.3 s at b_max = 1.5
  CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("bundled initial condition spans both regimes inside the safe set") {
  const Simulation sim = build_simulation(preset("uncontrolled"));
  bool free_flow = false, congested = false;
  for (int i = 0; i < sim.grid.n_cells; ++i) {
    if (sim.rho_initial[i] <= sim.fd.rho_cr) free_flow = true;
    if (sim.rho_initial[i] > sim.fd.rho_cr) congested = true;
    CHECK(sim.rho_initial[i] < sim.controller.cbf.lambda[i]);
  }
  CHECK(free_flow);
  CHECK(congested);
}

TEST_CASE("the second desired profile leaves the safe set on a subinterval") {
  const Simulation sim = build_simulation(preset("clf_cbf_profile2"));
  const CellField des = sim.controller.clf.rho_des;
  int outside = 0;
  for (int i = 0; i < sim.grid.n_cells; ++i) {
    if (des[i] > sim.controller.cbf.lambda[i]) ++outside;
  }
  CHECK(outside > 0);
  CHECK(outside < sim.grid.n_cells);
}

TEST_CASE("snapshot count follows the stride invariant") {
  ScenarioConfig c = preset("uncontrolled");
  c.t_final_s = 10.0;
  const SimTrace t = simulate(c);
  // floor(T / (dt * stride)) + 1 = floor(10 / 1) + 1
  CHECK(t.times.size() == 11);
  CHECK(t.times.front() == 0.0);
  CHECK(t.times.back() == doctest::Approx(10.0));
  CHECK(t.rho.size() == t.times.size());
  CHECK(t.delta.size() == t.times.size());
}

TEST_CASE("a zero-length horizon yields only the initial snapshot") {
  Simulation sim = build_simulation(preset("uncontrolled"));
  sim.steps = 0;
  const SimTrace t = simulate(sim);
  CHECK(t.times.size() == 1);
  CHECK(t.times[0] == 0.0);
}

TEST_CASE("repo preset files stay in sync with the built-ins") {
  for (const std::string& name :
       {"uncontrolled", "clf_profile1", "clf_profile2", "cbf_only",
        "clf_cbf_profile1", "clf_cbf_profile2"}) {
    const ScenarioConfig from_file =
        load_config(std::string(VSL_SOURCE_DIR) + "/presets/" + name + ".cfg");
    CHECK(from_file == preset(name));
  }
}
