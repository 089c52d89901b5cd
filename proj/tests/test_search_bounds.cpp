#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ewb/bounds.hpp"
#include "ewb/search.hpp"
#include "ewb/states.hpp"
#include "support.hpp"

using namespace ewb;

namespace {

const SubsystemDims kDims = SubsystemDims::qubits(3);

ProjectorWitness w1() { return ProjectorWitness{2.0 / 3.0, states::w(3), 5.0 / 9.0}; }
ProjectorWitness w2() { return ProjectorWitness{0.5, states::ghz(3), 0.5}; }

WitnessRecord rec1(double w, double s = 0.018) { return projector_record(w1(), w, s, "W1"); }
WitnessRecord rec2(double w, double s = 0.030) { return projector_record(w2(), w, s, "W2"); }

MeasureSpec eof_two() {
  MeasureSpec m;
  m.kind = EofSpec{{{0}}, LogBase::two};
  return m;
}

double dot(const std::vector<double>& r, const std::vector<WitnessRecord>& recs) {
  double s = 0;
  for (std::size_t k = 0; k < r.size(); ++k) s += r[k] * recs[k].measured;
  return s;
}

// normalize(cos t |a> + sin t |b>) with <W1> = target, by bisection on t.
PureState feasible(const PureState& a, const PureState& b, double target) {
  const auto op = w1().op();
  auto at = [&](double t) {
    std::vector<cplx> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::cos(t) * a[i] + std::sin(t) * b[i];
    return PureState::normalized(a.dims(), v);
  };
  double lo = 0, hi = std::numbers::pi / 2;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (op.expectation(at(mid).amplitudes()) < target ? lo : hi) = mid;
  }
  return at(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("search_1d") {
  const auto r = search_1d([](double x) { return -(x - 2) * (x - 2); }, 0, 5);
  CHECK(r.r == doctest::Approx(2).epsilon(1e-6));
  CHECK(std::abs(r.g) < 1e-10);
  CHECK_FALSE(r.at_boundary);

  const auto edge = search_1d([](double x) { return x; }, -1, 3);
  CHECK(edge.at_boundary);
  CHECK(edge.r == doctest::Approx(3).epsilon(1e-6));

  // ties go to the smaller |r|
  const auto flat = search_1d([](double x) { return std::min(0.0, -(x + 1)); }, -5, 5);
  CHECK(flat.r == doctest::Approx(-1).epsilon(1e-5));

  const auto pw = w1();
  const auto g = search_1d([&](double x) { return -0.197 * x - projector_transform_geometric(pw, x); }, -50, 0);
  CHECK_FALSE(g.at_boundary);
  CHECK(g.r > -50);
  CHECK(g.r < -1);
}

TEST_CASE("search_nd") {
  auto q = [](const std::vector<double>& r) {
    const double x = r[0] - 1.5, y = r[1] + 0.75;
    return -(2 * x * x + x * y + y * y);
  };
  const auto s = search_nd(q, {-10, -10}, {10, 10});
  CHECK(std::abs(s.r[0] - 1.5) < 1e-5);
  CHECK(std::abs(s.r[1] + 0.75) < 1e-5);
  CHECK_FALSE(s.at_boundary[0]);
  CHECK_FALSE(s.at_boundary[1]);
  CHECK(s.passes <= 50);

  SearchOptions serial;
  serial.parallel = false;
  const auto t = search_nd(q, {-10, -10}, {10, 10}, serial);
  CHECK(t.r == s.r);
  CHECK(t.g == s.g);

  const auto b = search_nd([](const std::vector<double>& r) { return r[0] - r[1] * r[1]; }, {-1, -1}, {2, 1});
  CHECK(b.at_boundary[0]);
  CHECK_FALSE(b.at_boundary[1]);
}

TEST_CASE("geometric bounds from single projector witnesses") {
  const auto a = epsilon_bound(kDims, {rec1(-0.197)}, {});
  CHECK(a.analytic);
  CHECK(a.certificate_valid);
  CHECK(a.epsilon == doctest::Approx(0.199390).epsilon(1e-5));
  CHECK(a.r_star[0] == doctest::Approx(-1.1643).epsilon(1e-3));
  CHECK(std::abs(a.epsilon - (a.r_star[0] * -0.197 - a.c_star)) < 1e-9);
  CHECK_FALSE(a.at_boundary);

  const auto b = epsilon_bound(kDims, {rec2(-0.139)}, {});
  CHECK(b.epsilon == doctest::Approx(0.019709).epsilon(1e-4));
  CHECK(b.r_star[0] == doctest::Approx(-0.2894).epsilon(1e-3));

  for (double w : {2.0 / 3.0, 0.3}) {
    const auto z = epsilon_bound(kDims, {rec1(w)}, {});
    CHECK(z.epsilon == 0.0);
    CHECK(z.r_star[0] == 0.0);
  }
}

TEST_CASE("perfect data follows the ray outward") {
  const auto a = epsilon_bound(kDims, {rec1(-1.0 / 3.0, 0)}, {});
  CHECK(a.ray_extended);
  CHECK(a.epsilon == doctest::Approx(5.0 / 9.0).epsilon(1e-6));
  CHECK(a.epsilon <= 5.0 / 9.0);
  CHECK(a.uncertainty == 0.0);

  SearchOptions no_ray;
  no_ray.extend_rays = false;
  const auto b = epsilon_bound(kDims, {rec1(-1.0 / 3.0, 0)}, {}, no_ray);
  CHECK(b.at_boundary);
  CHECK(b.box == 400.0);
  CHECK(b.epsilon < a.epsilon);
}

TEST_CASE("affine certificates") {
  const auto zero = affine_certificate(kDims, {rec1(-0.197)}, {}, {0.0});
  CHECK(zero.c == 0.0);
  CHECK(zero.bound == 0.0);

  const auto one = affine_certificate(kDims, {rec1(-0.197)}, {}, {-1.0});
  CHECK(std::abs(one.c) < 1e-6);
  CHECK(one.bound == doctest::Approx(0.197).epsilon(1e-5));
  CHECK(one.bound < epsilon_bound(kDims, {rec1(-0.197)}, {}).epsilon);

  // slope -3 at w = -1/3: 1 - Ehat(-3 W1) = 0.4725, below 5/9
  const auto three = affine_certificate(kDims, {rec1(-1.0 / 3.0)}, {}, {-3.0});
  CHECK(three.bound == doctest::Approx(1.0 - projector_transform_geometric(w1(), -3.0)).epsilon(1e-5));
  CHECK(three.bound == doctest::Approx(0.4725).epsilon(1e-4));
  const auto steep = affine_certificate(kDims, {rec1(-1.0 / 3.0)}, {}, {-300.0});
  CHECK(steep.bound > three.bound);
  CHECK(steep.bound < 5.0 / 9.0);
}

TEST_CASE("uncertainty propagation") {
  auto a = epsilon_bound(kDims, {rec1(-0.197, 0)}, {});
  CHECK(propagate_uncertainty(a, {rec1(-0.197, 0)}) == 0.0);
  a = epsilon_bound(kDims, {rec1(-0.197)}, {});
  CHECK(a.uncertainty == doctest::Approx(std::abs(a.r_star[0]) * 0.018).epsilon(1e-12));
  CHECK(a.uncertainty == doctest::Approx(0.0210).epsilon(5e-3));
  BoundResult fake;
  fake.r_star = {-1.0, 2.0};
  CHECK(propagate_uncertainty(fake, {rec1(0, 0.3), rec2(0, 0.4)}) == doctest::Approx(std::hypot(0.3, 0.8)));
}

TEST_CASE("combined geometric bound") {
  const std::vector<WitnessRecord> recs{rec1(-0.197), rec2(-0.139)};
  const auto c = epsilon_bound(kDims, recs, {});
  CHECK(c.r_star.size() == 2);
  CHECK(c.epsilon >= 0.199390 - 1e-6);
  CHECK(c.epsilon == doctest::Approx(0.199390).epsilon(1e-4));
  CHECK(std::abs(c.epsilon - (dot(c.r_star, recs) - c.c_star)) < 1e-9);
  CHECK(c.certificate_valid);
  CHECK_FALSE(c.analytic);
  for (std::size_t i = 1; i < c.inner_results.size(); ++i)
    CHECK_FALSE(c.inner_results[i].r < c.inner_results[i - 1].r);

  // E(psi) >= r*.<W> - c* for every pure state
  const auto sum = combine(recs, c.r_star);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto psi = random_pure(kDims, 5, i);
    CHECK(geometric_pure(psi) >= sum.expectation(psi.amplitudes()) - c.c_star - 1e-9);
  }
}

TEST_CASE("eof bound in base two") {
  const std::vector<WitnessRecord> recs{rec1(-0.197)};
  const auto e = epsilon_bound(kDims, recs, eof_two());
  CHECK(e.epsilon == doctest::Approx(0.3083).epsilon(1e-3));
  CHECK(e.epsilon >= 0);
  CHECK(std::abs(e.epsilon - (dot(e.r_star, recs) - e.c_star)) < 1e-9);
  CHECK_FALSE(e.analytic);
  const BipartitionSpec bip{{0}};
  const auto sum = combine(recs, e.r_star);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto psi = random_pure(kDims, 6, i);
    CHECK(eof_pure(psi, bip, LogBase::two) >= sum.expectation(psi.amplitudes()) - e.c_star - 1e-9);
  }
}

TEST_CASE("feasible pure states respect the bound") {
  const double eps = epsilon_bound(kDims, {rec1(-0.197)}, {}).epsilon;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto psi = feasible(states::w(3), random_pure(kDims, 8, i), -0.197);
    REQUIRE(std::abs(w1().op().expectation(psi.amplitudes()) + 0.197) <= 1e-6);
    CHECK(geometric_pure(psi) >= eps - 1e-6);
  }
}

TEST_CASE("argument errors") {
  CHECK_THROWS_AS(epsilon_bound(kDims, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_bound(kDims, std::vector<WitnessRecord>(5, rec1(0)), {}), std::invalid_argument);
  WitnessRecord small{HermitianOperator::zero(4), 0, 0, "small", std::nullopt};
  CHECK_THROWS_AS(epsilon_bound(kDims, {rec1(0), small}, {}), DimensionError);
  CHECK_THROWS_AS(affine_certificate(kDims, {rec1(0)}, {}, {1.0, 2.0}), std::invalid_argument);
  // outside the spectrum [-1/3, 2/3] no state matches the data
  CHECK_THROWS_AS(epsilon_bound(kDims, {rec1(1.0)}, {}), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_bound(kDims, {rec1(-0.5)}, {}), std::invalid_argument);
  CHECK_NOTHROW(affine_certificate(kDims, {rec1(1.0)}, {}, {-1.0}));
}
