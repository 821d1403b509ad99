#include <doctest.h>

#include <cmath>

#include "nudgelab/errors.hpp"
#include "nudgelab/observation.hpp"
#include "nudgelab/spectral.hpp"
#include "oracles.hpp"

using namespace nudgelab;
using oracle::pi;

namespace {

double inner(const Field& a, const Field& b) {
  const Field am = to_modal(a);
  const Field bm = to_modal(b);
  const auto w = a.grid().weights();
  double s = 0.0;
  for (std::size_t k = 0; k < am.size(); ++k) s += w[k] * am[k] * bm[k];
  return s;
}

}  // namespace

TEST_CASE("observer resolution must lie in (0, extent]") {
  const auto g = Grid::make(1, 64, Boundary::periodic);
  for (double bad : {0.0, -0.1, 1.5}) {
    try {
      ObservationOperator(ObserverKind::low_pass, bad, g);
      FAIL("accepted delta " << bad);
    } catch (const ConfigError& e) {
      CHECK(e.key() == "delta");
    }
  }
  CHECK_NOTHROW(ObservationOperator(ObserverKind::volume_average, 1.0, g));
  CHECK_THROWS_AS(parse_observer_kind("nearest"), ConfigError);
}

TEST_CASE("low-pass keeps exactly the modes inside the cutoff disc") {
  const auto g = Grid::make(2, 32, Boundary::periodic);
  const ObservationOperator op(ObserverKind::low_pass, 0.2, g);
  CHECK(op.cutoff() == 5);
  CHECK(op.diagonal());
  Field a(g, Repr::modal, std::vector<double>(g->size(), 1.0));
  const Field o = op.observe(a);
  for (std::size_t k = 0; k < g->size(); ++k) {
    const auto idx = g->unflatten(k);
    const int kx = g->wavenumber(idx[0]);
    const int ky = g->wavenumber(idx[1]);
    CHECK(o[k] == (kx * kx + ky * ky <= 25 ? 1.0 : 0.0));
  }
}

TEST_CASE("low-pass reproduces band-limited fields and returns the input representation") {
  const auto g = Grid::make(1, 64, Boundary::dirichlet);
  const ObservationOperator op(ObserverKind::low_pass, 0.125, g);
  const Field f = Field::sample(g, [](double x) { return std::sin(pi * x) - 0.5 * std::sin(8 * pi * x); });
  const Field o = op.observe(f);
  CHECK(o.repr() == Repr::physical);
  for (std::size_t j = 0; j < f.size(); ++j) CHECK(o[j] == doctest::Approx(f[j]).epsilon(1e-12));
  const Field hi = Field::sample(g, [](double x) { return std::sin(9 * pi * x); });
  CHECK(sobolev_norm(op.observe(hi), 0.0) < 1e-14);
}

TEST_CASE("volume average matches direct cell means") {
  for (Boundary bc : {Boundary::periodic, Boundary::dirichlet, Boundary::neumann}) {
    CAPTURE(to_string(bc));
    const auto g = Grid::make(1, 64, bc);
    const ObservationOperator op(ObserverKind::volume_average, 0.125, g);
    CHECK(op.cells() == 8);
    CHECK_FALSE(op.diagonal());
    const Field f = Field::sample(g, [](double x) { return std::exp(x) * std::sin(3 * x); });
    const Field o = op.observe(f);
    const int m = g->axis_size();
    for (int c = 0; c < 8; ++c) {
      double sum = 0.0;
      int count = 0;
      for (int j = 0; j < m; ++j) {
        const double x = oracle::node(*g, j);
        // Cell [c/8, (c+1)/8); the node on a right cell edge belongs to the next cell.
        if (x >= c / 8.0 - 1e-12 && x < (c + 1) / 8.0 - 1e-12) {
          sum += f[j];
          ++count;
        }
      }
      REQUIRE(count > 0);
      for (int j = 0; j < m; ++j) {
        const double x = oracle::node(*g, j);
        if (x >= c / 8.0 - 1e-12 && x < (c + 1) / 8.0 - 1e-12) {
          CHECK(o[j] == doctest::Approx(sum / count).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("observers are idempotent and self-adjoint") {
  for (ObserverKind kind : {ObserverKind::low_pass, ObserverKind::volume_average}) {
    for (Boundary bc : {Boundary::periodic, Boundary::neumann}) {
      const auto g = Grid::make(2, 32, bc);
      const ObservationOperator op(kind, 0.25, g);
      const Field f = random_smooth_field(g, 1, {8, 1.0, 1.0});
      const Field h = random_smooth_field(g, 2, {8, 1.0, 1.0});
      const Field once = op.observe(f);
      const Field twice = op.observe(once);
      for (std::size_t k = 0; k < f.size(); ++k) CHECK(twice[k] == doctest::Approx(once[k]).epsilon(1e-12));
      CHECK(inner(op.observe(f), h) == doctest::Approx(inner(f, op.observe(h))).epsilon(1e-12));
    }
  }
}

TEST_CASE("constants survive volume averaging") {
  const auto g = Grid::make(2, 16, Boundary::neumann);
  const ObservationOperator op(ObserverKind::volume_average, 0.3, g);
  CHECK(op.cells() == 3);
  const Field one(g, Repr::physical, std::vector<double>(g->size(), 2.5));
  const Field o = op.observe(one);
  for (std::size_t j = 0; j < o.size(); ++j) CHECK(o[j] == doctest::Approx(2.5));
}

TEST_CASE("interpolation constant estimate is stable under refinement of delta") {
  const auto g = Grid::make(1, 512, Boundary::periodic);
  for (ObserverKind kind : {ObserverKind::low_pass, ObserverKind::volume_average}) {
    double prev = 0.0;
    for (double d : {0.125, 0.0625, 0.03125}) {
      const ObservationOperator op(kind, d, g);
      const double c = estimate_interp_constant(op, 20, 7, {64, 2.0, 1.0});
      CHECK(c > 0.0);
      CHECK(c < 1.0);
      if (prev > 0.0) CHECK(c < 2.0 * prev);
      prev = c;
    }
  }
}

TEST_CASE("interp ratio of a zero field is zero") {
  const auto g = Grid::make(1, 32, Boundary::periodic);
  const ObservationOperator op(ObserverKind::low_pass, 0.25, g);
  CHECK(interp_ratio(op, Field(g, Repr::modal)) == 0.0);
}

TEST_CASE("weak-form pairing bound stays bounded") {
  const auto g = Grid::make(1, 256, Boundary::periodic);
  for (ObserverKind kind : {ObserverKind::low_pass, ObserverKind::volume_average}) {
    double worst = 0.0;
    for (double d : {0.125, 0.0625, 0.03125}) {
      const ObservationOperator op(kind, d, g);
      for (std::uint64_t s = 0; s < 10; ++s) {
        const Field f = random_smooth_field(g, 100 + s);
        const Field h = random_smooth_field(g, 200 + s);
        worst = std::max(worst, weak_bound_ratio(op, f, h));
      }
    }
    CHECK(worst < 1.0);
  }
}

TEST_CASE("scaling study needs two resolutions and reports per-field slopes") {
  const auto g = Grid::make(1, 256, Boundary::periodic);
  CHECK_THROWS_AS(interp_scaling_study(ObserverKind::low_pass, g, {0.1}, 4, 1, {}), UsageError);
  const ScalingStudy s = interp_scaling_study(ObserverKind::volume_average, g, {0.125, 0.0625, 0.03125},
                                              8, 1, {64, smooth_decay(1), 1.0});
  CHECK(s.rms_errors.size() == 3);
  CHECK(s.field_slopes.size() == 8);
  CHECK(s.min_field_slope <= s.slope + 1e-12);
  CHECK(s.rms_errors[0] > s.rms_errors[2]);
  CHECK(threshold_decay(2) == 2.0);
  CHECK(smooth_decay(1) == 2.5);
}
