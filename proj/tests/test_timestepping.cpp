#include <doctest.h>

#include <cmath>

#include "nudgelab/errors.hpp"
#include "nudgelab/harness.hpp"
#include "nudgelab/timestepping.hpp"
#include "oracles.hpp"

using namespace nudgelab;
using oracle::pi;

namespace {

std::shared_ptr<const Model> make_model(ModelSpec spec, int n) {
  return std::make_shared<const Model>(spec, Grid::make(spec.dim(), n, spec.bc));
}

ModelState seeded(const Model& m, std::uint64_t seed, RandomFieldRecipe r = {}) {
  ModelState s = seeded_state(m.spec(), m.grid_ptr(), seed, r);
  m.project(s);
  return s;
}

ModelState integrate(const std::shared_ptr<const Model>& m, ModelState s, Scheme scheme, double dt, double t_end) {
  Stepper st(m, {scheme, dt, t_end});
  s = to_modal(s);
  const long long steps = std::llround(t_end / dt);
  for (long long i = 0; i < steps; ++i) st.step(s, i * dt);
  return s;
}

std::vector<double> coeffs(const ModelState& s) {
  return std::vector<double>(s[0].values().begin(), s[0].values().end());
}

}  // namespace

TEST_CASE("scheme names and config validation") {
  CHECK(parse_scheme("imex_euler") == Scheme::imex_euler);
  CHECK(parse_scheme("imex_cnab2") == Scheme::imex_cnab2);
  CHECK_THROWS_AS(parse_scheme("rk4"), ConfigError);
  CHECK_THROWS_AS((SchemeConfig{Scheme::imex_euler, 0.0, 1.0}.validate()), ConfigError);
  CHECK((SchemeConfig{Scheme::imex_euler, 1e-4, 2.0}.steps()) == 20000);
}

TEST_CASE("linear implicit Euler is exact per mode") {
  ModelSpec spec = ModelSpec::make(ModelKind::allen_cahn_1d);
  spec.params.nonlinear_scale = 0.0;
  const auto m = make_model(spec, 32);
  for (int k : {0, 5, 30}) {
    ModelState s;
    s.components.emplace_back(m->grid_ptr(), Repr::modal);
    s[0][k] = 1.0;
    const ModelState out = step_reference(*m, s, {Scheme::imex_euler, 1e-3, 1.0});
    const double lam = std::pow(pi * (k + 1), 2);
    CHECK(out[0][k] == doctest::Approx(1.0 / (1.0 + 1e-3 * lam)).epsilon(1e-15));
  }
}

TEST_CASE("CNAB2 on the linear problem is second order") {
  ModelSpec spec = ModelSpec::make(ModelKind::allen_cahn_1d);
  spec.params.nonlinear_scale = 0.0;
  const auto m = make_model(spec, 16);
  ModelState s;
  s.components.emplace_back(m->grid_ptr(), Repr::modal);
  s[0][1] = 1.0;
  const double lam = std::pow(2 * pi, 2);
  std::vector<double> logdt;
  std::vector<double> logerr;
  for (double dt : {4e-3, 2e-3, 1e-3, 5e-4}) {
    const ModelState out = integrate(m, s, Scheme::imex_cnab2, dt, 0.2);
    logdt.push_back(std::log(dt));
    logerr.push_back(std::log(std::abs(out[0][1] - std::exp(-lam * 0.2))));
  }
  CHECK(oracle::slope(logdt, logerr) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("Allen-Cahn order of accuracy against a dense RK4 oracle") {
  const ModelSpec spec = ModelSpec::make(ModelKind::allen_cahn_1d);
  const auto m = make_model(spec, 8);
  const ModelState u0 = seeded(*m, 1, {3, 2.0, 1.0});
  std::vector<double> ref = coeffs(u0);
  const oracle::AllenCahnModalOde ode{7};
  const double t_end = 0.05;
  for (int i = 0; i < 50000; ++i) oracle::rk4_step(ref, 1e-6, ode);
  for (auto [scheme, order] : {std::pair{Scheme::imex_euler, 1.0}, {Scheme::imex_cnab2, 2.0}}) {
    std::vector<double> logdt;
    std::vector<double> logerr;
    for (double dt : {2.5e-4, 1.25e-4, 6.25e-5, 3.125e-5}) {
      logdt.push_back(std::log(dt));
      logerr.push_back(std::log(oracle::max_abs_diff(coeffs(integrate(m, u0, scheme, dt, t_end)), ref)));
    }
    CAPTURE(to_string(scheme));
    CHECK(std::abs(oracle::slope(logdt, logerr) - order) <= 0.1);
  }
}

TEST_CASE("nudged step with v = u reproduces the reference step exactly") {
  for (ObserverKind kind : {ObserverKind::low_pass, ObserverKind::volume_average}) {
    for (Scheme scheme : {Scheme::imex_euler, Scheme::imex_cnab2}) {
      const ModelSpec spec = ModelSpec::make(ModelKind::cahn_hilliard_2d);
      const auto m = make_model(spec, 16);
      const ModelState u = seeded(*m, 4);
      const SchemeConfig sc{scheme, 1e-5, 1.0};
      const NudgeConfig nudge = make_nudge(500.0, kind, 0.25, m->grid_ptr());
      const ModelState ref = step_reference(*m, u, sc);
      const ModelState nud = step_nudged(*m, nudge, u, u, sc);
      CHECK(coeffs(ref) == coeffs(nud));
      // Over many steps with histories.
      Stepper rs(m, sc);
      Stepper ns(m, sc, nudge, "nudged");
      ModelState a = to_modal(u);
      ModelState b = to_modal(u);
      for (int i = 0; i < 20; ++i) {
        ModelState next = a;
        rs.step(next, i * 1e-5);
        ns.step(b, i * 1e-5, &a, &next);
        a = std::move(next);
      }
      CHECK(coeffs(a) == coeffs(b));
    }
  }
}

TEST_CASE("mu = 0 nudged step equals the reference step") {
  const ModelSpec spec = ModelSpec::make(ModelKind::allen_cahn_1d);
  const auto m = make_model(spec, 32);
  const ModelState u = seeded(*m, 1);
  const ModelState v = seeded(*m, 2);
  const SchemeConfig sc{Scheme::imex_euler, 1e-4, 1.0};
  const NudgeConfig off = make_nudge(0.0, ObserverKind::low_pass, 0.125, m->grid_ptr());
  CHECK(coeffs(step_nudged(*m, off, v, u, sc)) == coeffs(step_reference(*m, v, sc)));
}

TEST_CASE("strong implicit nudging snaps observed modes to the reference") {
  ModelSpec spec = ModelSpec::make(ModelKind::allen_cahn_1d);
  spec.params.nonlinear_scale = 0.0;
  const auto m = make_model(spec, 32);
  const ModelState u = seeded(*m, 1);
  ModelState v;
  v.components.emplace_back(m->grid_ptr(), Repr::modal);
  const double dt = 1e-3;
  const SchemeConfig sc{Scheme::imex_euler, dt, 1.0};
  const ModelState ref_next = step_reference(*m, u, sc);
  for (double mu : {1e4, 1e6, 1e8}) {
    const NudgeConfig nudge = make_nudge(mu, ObserverKind::low_pass, 0.125, m->grid_ptr());
    const ModelState out = step_nudged(*m, nudge, v, u, sc);
    for (int k = 0; k < 8; ++k) {
      // Closed form: v+ = r+ + (v_free - r+) (1 + dt lam) / (1 + dt (lam + mu)), v_free = 0.
      const double lam = std::pow(pi * (k + 1), 2);
      const double gap = std::abs(out[0][k] - ref_next[0][k]);
      CHECK(gap == doctest::Approx(std::abs(ref_next[0][k]) * (1 + dt * lam) / (1 + dt * (lam + mu))).epsilon(1e-9));
      CHECK(gap <= std::abs(ref_next[0][k]) * (1 + dt * lam) / (dt * mu));
    }
    for (int k = 8; k < 31; ++k) CHECK(out[0][k] == 0.0);
  }
}

TEST_CASE("stability limits") {
  const ModelSpec spec = ModelSpec::make(ModelKind::allen_cahn_1d);
  const auto m = make_model(spec, 32);
  const ModelState u = seeded(*m, 1);
  const NudgeConfig explicit_nudge = make_nudge(100.0, ObserverKind::volume_average, 0.125, m->grid_ptr());
  CHECK(stability_limit(*m, explicit_nudge, u) <= 0.01);
  const NudgeConfig implicit_nudge = make_nudge(100.0, ObserverKind::low_pass, 0.125, m->grid_ptr());
  CHECK(stability_limit(*m, implicit_nudge, u) == doctest::Approx(1.0 / m->explicit_rate(u)));
  ModelSpec off = spec;
  off.params.nonlinear_scale = 0.0;
  const auto m0 = make_model(off, 32);
  CHECK(std::isinf(stability_limit(*m0, implicit_nudge, u)));
  CHECK_THROWS_AS(check_step_size(*m, explicit_nudge, u, {Scheme::imex_euler, 0.02, 1.0}), ConfigError);
  CHECK_NOTHROW(check_step_size(*m, explicit_nudge, u, {Scheme::imex_euler, 0.005, 1.0}));
}

TEST_CASE("Cahn-Hilliard mass is invariant without the shift") {
  for (Boundary bc : {Boundary::neumann, Boundary::periodic}) {
    for (Scheme scheme : {Scheme::imex_euler, Scheme::imex_cnab2}) {
      ModelSpec spec = ModelSpec::make(ModelKind::cahn_hilliard_1d);
      spec.bc = bc;
      spec.params.shift = 0.0;
      const auto m = make_model(spec, 64);
      ModelState u = seeded(*m, 9);
      u[0][0] = 0.3;  // nonzero mean
      const double mass0 = m->diagnostics(u).at("mass");
      Stepper st(m, {scheme, 1e-5, 0.1});
      double drift = 0.0;
      for (int i = 0; i < 10000; ++i) {
        st.step(u, i * 1e-5);
        if (i % 100 == 99) drift = std::max(drift, std::abs(m->diagnostics(u).at("mass") - mass0) / std::abs(mass0));
      }
      CHECK(drift <= 1e-12);
    }
  }
}

TEST_CASE("shifted Cahn-Hilliard zero mode decays like the shift alone") {
  ModelSpec spec = ModelSpec::make(ModelKind::cahn_hilliard_1d);
  const auto m = make_model(spec, 32);
  ModelState u = seeded(*m, 2);
  u[0][0] = 0.5;
  const double dt = 1e-3;
  Stepper euler(m, {Scheme::imex_euler, dt, 1.0});
  ModelState a = u;
  for (int i = 0; i < 200; ++i) euler.step(a, i * dt);
  CHECK(a[0][0] == doctest::Approx(0.5 * std::pow(1 + dt, -200)).epsilon(1e-12));
  Stepper cn(m, {Scheme::imex_cnab2, dt, 1.0});
  ModelState b = u;
  for (int i = 0; i < 200; ++i) cn.step(b, i * dt);
  CHECK(b[0][0] == doctest::Approx(0.5 / (1 + dt) * std::pow((1 - dt / 2) / (1 + dt / 2), 199)).epsilon(1e-12));
}

TEST_CASE("Cahn-Hilliard energy decreases along the reference") {
  const ModelSpec spec = ModelSpec::make(ModelKind::cahn_hilliard_1d);
  const auto m = make_model(spec, 64);
  ModelState u = to_modal(seeded(*m, 5));
  Stepper st(m, {Scheme::imex_euler, 1e-5, 1.0});
  double prev = m->diagnostics(u).at("lyapunov");
  double worst = -1.0;
  for (int i = 0; i < 2000; ++i) {
    st.step(u, i * 1e-5);
    const double e = m->diagnostics(u).at("lyapunov");
    worst = std::max(worst, e - prev);
    prev = e;
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("sign-flipped nonlinearity blows up with a labelled time") {
  ModelSpec spec = ModelSpec::make(ModelKind::allen_cahn_1d);
  spec.params.nonlinear_scale = -1.0;
  const auto m = make_model(spec, 32);
  ModelState u = to_modal(seeded(*m, 1, {0, 2.0, 10.0}));
  Stepper st(m, {Scheme::imex_euler, 1e-4, 1.0}, {}, "reference");
  try {
    for (int i = 0; i < 10000; ++i) st.step(u, i * 1e-4);
    FAIL("no blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.trajectory() == "reference");
    CHECK(e.time() > 0.0);
    CHECK(e.time() < 1.0);
  }
}
