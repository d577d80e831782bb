#include <doctest.h>

#include <random>

#include "corrgame/error.hpp"
#include "corrgame/game.hpp"

using namespace corrgame;

namespace {

const Bimatrix2x2 kPD = Bimatrix2x2::symmetric(3, 0, 5, 1);

PayoffPair payoff(const Bimatrix2x2& m, double a, double b) {
  return expected_payoff_classical(m, Probability(a), Probability(b));
}

GameSpec pd_with(GFunction g, CorrelationModel model = CorrelationModel::singlet()) {
  auto spec = make_preset("PD", {{"r", 3}, {"s", 0}, {"t", 5}, {"u", 1}});
  spec.g = std::move(g);
  spec.model = std::move(model);
  return spec;
}

void check_pair(const PayoffPair& got, double a, double b, double eps = 1e-12) {
  CHECK(got.a == doctest::Approx(a).epsilon(eps));
  CHECK(got.b == doctest::Approx(b).epsilon(eps));
}

}  // namespace

TEST_CASE("from_rstu examples") {
  auto p = SymmetricParams::from_rstu(1, 1, 1, 1);
  CHECK(p.K == 0);
  CHECK(p.L == 0);
  CHECK(p.M == 0);
  CHECK(p.N == 1);
  p = SymmetricParams::from_rstu(3, 0, 5, 1);
  CHECK(p.K == -1);
  CHECK(p.L == -1);
  CHECK(p.M == 4);
  CHECK(p.N == 1);
  p = SymmetricParams::from_rstu(0, 0, 0, 0);
  CHECK(p.K == 0);
  CHECK(p.N == 0);
  // P_A = K pA pB + L pA + M pB + N for the symmetric family.
  const auto kp = kPD.symmetric_params();
  REQUIRE(kp);
  for (double a : {0.0, 0.3, 1.0}) {
    for (double b : {0.0, 0.7, 1.0}) {
      CHECK(payoff(kPD, a, b).a ==
            doctest::Approx(kp->K * a * b + kp->L * a + kp->M * b + kp->N));
    }
  }
  CHECK_FALSE(Bimatrix2x2::battle_of_sexes(2, 1, 0).symmetric_params());
}

TEST_CASE("expected payoff examples") {
  check_pair(payoff(kPD, 1, 1), 3, 3);
  check_pair(payoff(kPD, 0, 0), 1, 1);
  check_pair(payoff(Bimatrix2x2::battle_of_sexes(2, 1, 0), 2.0 / 3, 1.0 / 3), 2.0 / 3, 2.0 / 3);
  CHECK_THROWS_AS(Bimatrix2x2(Bimatrix2x2::Entries{{{{{NAN, 0}, {0, 0}}}, {{{0, 0}, {0, 0}}}}}),
                  Error);
}

TEST_CASE("correlation payoff examples") {
  const auto g1 = make_catalog("g1");
  check_pair(correlation_payoff(kPD, g1, -1, -1), 1, 1);
  check_pair(correlation_payoff(kPD, g1, 1, 1), 3, 3);
  const auto half = payoff(kPD, 0.5, 0.0);
  check_pair(correlation_payoff(kPD, g1, 0, -1), half.a, half.b);
  CHECK_THROWS_AS(correlation_payoff(kPD, g1, 1.5, 0), Error);
}

TEST_CASE("classical payoff examples") {
  check_pair(classical_payoff(pd_with(make_catalog("g1")), Angle(0), Angle(0)), 1, 1);
  const auto g3 = make_catalog("g3", {{"delta", 0.5}, {"epsilon", kPi / 4}});
  check_pair(classical_payoff(pd_with(g3), Angle(kPi / 4), Angle(kPi / 4)), 1, 1);
  const auto mid = payoff(kPD, 0.5, 0.5);
  check_pair(classical_payoff(pd_with(make_catalog("g1")), Angle(kPi / 2), Angle(kPi / 2)),
             mid.a, mid.b);
}

TEST_CASE("quantum payoff examples") {
  const auto g1 = pd_with(make_catalog("g1"));
  check_pair(quantum_payoff(g1, Probability(0), Probability(0)), 1, 1);
  const auto mid = payoff(kPD, 0.5, 0.5);
  check_pair(quantum_payoff(g1, Probability(0.5), Probability(0.5)), mid.a, mid.b);
  const auto g3 = pd_with(make_catalog("g3", {{"delta", 0.5}, {"epsilon", kPi / 4}}));
  check_pair(quantum_payoff(g3, Probability(5.0 / 9), Probability(5.0 / 9)), 1, 1, 1e-11);
  CHECK_THROWS_AS(quantum_payoff(pd_with(make_catalog("g8")), Probability(0.5), Probability(0.5)),
                  Error);
}

TEST_CASE("quantum payoff angle examples") {
  const auto g1 = pd_with(make_catalog("g1"));
  check_pair(quantum_payoff_angle(g1, Angle(0), Angle(0)), 1, 1);
  check_pair(quantum_payoff_angle(g1, Angle(kPi), Angle(kPi)), 3, 3);
  const auto mixed = pd_with(make_catalog("g1"), CorrelationModel::mixture());
  const auto expect = payoff(kPD, 2.0 / 3, 2.0 / 3);
  check_pair(quantum_payoff_angle(mixed, Angle(kPi), Angle(kPi)), expect.a, expect.b);
  // Total for non-invertible g.
  CHECK_NOTHROW(quantum_payoff_angle(pd_with(make_catalog("g8")), Angle(1), Angle(2)));
}

TEST_CASE("make_preset examples") {
  CHECK_NOTHROW(make_preset("PD", {{"r", 3}, {"s", 0}, {"t", 5}, {"u", 1}}));
  try {
    make_preset("PD", {{"r", 1}, {"s", 0}, {"t", 5}, {"u", 3}});
    FAIL("expected an ordering violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOrderingViolation);
    CHECK(std::string(e.what()).find("u < r") != std::string::npos);
  }
  const auto bos = make_preset("BoS", {{"alpha", 2}, {"beta", 1}, {"gamma", 0}});
  check_pair(bos.matrix.at(0, 0), 2, 1);
  check_pair(bos.matrix.at(1, 1), 1, 2);
  CHECK_THROWS_AS(make_preset("BoS", {{"alpha", 1}, {"beta", 2}, {"gamma", 0}}), Error);
  CHECK_THROWS_AS(make_preset("Chicken", {}), Error);
}

TEST_CASE("property: classical reduction") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, kPi);
  const std::vector<GFunction> gs = {
      make_catalog("g1"), make_catalog("g2"),
      make_catalog("g3", {{"delta", 0.5}, {"epsilon", kPi / 4}}),
      make_catalog("g4", {{"delta", 0.3}}), make_catalog("g5", {{"delta", 0.3}}),
      make_catalog("g6", {{"delta", 0.4}, {"epsilon", 1.0}}),
      make_catalog("g7", {{"delta", 0.4}, {"epsilon", 2.0}}), make_catalog("g8")};
  for (const auto& g : gs) {
    const auto spec = pd_with(g);
    for (int k = 0; k < 100; ++k) {
      const Angle ta(u(rng)), tb(u(rng));
      const auto got = classical_payoff(spec, ta, tb);
      const auto want = expected_payoff_classical(spec.matrix, g.eval(ta), g.eval(tb));
      CHECK(std::abs(got.a - want.a) <= 1e-12);
      CHECK(std::abs(got.b - want.b) <= 1e-12);
    }
  }
}

TEST_CASE("property: quantum and classical agree at 0, pi/2, pi for g1") {
  const auto spec = pd_with(make_catalog("g1"));
  for (double ta : {0.0, kPi / 2, kPi}) {
    for (double tb : {0.0, kPi / 2, kPi}) {
      const auto q = quantum_payoff_angle(spec, Angle(ta), Angle(tb));
      const auto c = classical_payoff(spec, Angle(ta), Angle(tb));
      CHECK(std::abs(q.a - c.a) <= 1e-12);
      CHECK(std::abs(q.b - c.b) <= 1e-12);
    }
  }
}

TEST_CASE("property: bilinearity, symmetry and rstu round trip") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0), v(-10.0, 10.0);
  const auto bos = Bimatrix2x2::battle_of_sexes(2, 1, 0);
  for (int k = 0; k < 100; ++k) {
    const double a = u(rng), b = u(rng), h = 0.1 * u(rng);
    for (const auto* m : {&kPD, &bos}) {
      if (a + 2 * h <= 1) {
        const double d2 = payoff(*m, a, b).a - 2 * payoff(*m, a + h, b).a + payoff(*m, a + 2 * h, b).a;
        CHECK(std::abs(d2) <= 1e-10);
      }
      if (b + 2 * h <= 1) {
        const double d2 = payoff(*m, a, b).b - 2 * payoff(*m, a, b + h).b + payoff(*m, a, b + 2 * h).b;
        CHECK(std::abs(d2) <= 1e-10);
      }
    }
    CHECK(payoff(kPD, a, b).a == doctest::Approx(payoff(kPD, b, a).b).epsilon(1e-14));

    const double r = v(rng), s = v(rng), t = v(rng), w = v(rng);
    const auto back = SymmetricParams::from_rstu(r, s, t, w).to_rstu();
    CHECK(back.r == doctest::Approx(r).epsilon(1e-14));
    CHECK(back.s == doctest::Approx(s).epsilon(1e-14));
    CHECK(back.t == doctest::Approx(t).epsilon(1e-14));
    CHECK(back.u == doctest::Approx(w).epsilon(1e-14));
  }
}
