#include "doctest.h"
#include "fixtures.hpp"
#include "hbarq/error.hpp"
#include <cmath>

using namespace hbarq;

namespace {
QuenchScenario scen(double Q) {
  QuenchScenario s;
  s.Q = Q;
  s.v = 1.0;
  return s;
}
} // namespace

TEST_SUITE("evolve") {

TEST_CASE("no charge leaves the ground state alone") {
  const auto q = default_calculator(0);
  const auto tr = evolve_coupled(q, scen(0), EvolveOptions{});
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    CHECK(tr.amplitudes[i][0] == std::complex<double>(1.0));
    for (int k = 2; k <= 10; ++k)
      CHECK(tr.probability(i, k) == 0.0);
  }
}

TEST_CASE("coupled channels reproduce first-order amplitudes at small Q") {
  const auto q = default_calculator(5);
  const auto s = scen(5);
  const auto tr = evolve_coupled(q, s, EvolveOptions{});
  const std::size_t last = tr.times.size() - 1;
  for (int k = 2; k <= 10; ++k) {
    const double pert = std::norm(q.transition_amplitude(k, s, {}).value);
    CHECK(tr.probability(last, k) == doctest::Approx(pert).epsilon(0.01));
  }
  CHECK(tr.times.front() == doctest::Approx(-tr.times.back()));
  CHECK(tr.survival.back() == doctest::Approx(q.survival_factor(s)).epsilon(1e-6));
}

TEST_CASE("truncation converges") {
  const auto q = default_calculator(5, 20);
  const auto s = scen(5);
  EvolveOptions a, b;
  b.n_states = 20;
  const auto ta = evolve_coupled(q, s, a);
  const auto tb = evolve_coupled(q, s, b);
  double excited_a = 0.0, excited_b = 0.0, all_a = 0.0, all_b = 0.0;
  for (int k = 1; k <= 10; ++k) {
    all_a += ta.probability(ta.times.size() - 1, k);
    all_b += tb.probability(tb.times.size() - 1, k);
    if (k > 1) {
      excited_a += ta.probability(ta.times.size() - 1, k);
      excited_b += tb.probability(tb.times.size() - 1, k);
    }
  }
  CHECK(std::abs(all_a - all_b) < 0.01 * all_a);
  CHECK(std::abs(excited_a - excited_b) < 0.01 * excited_a);
}

TEST_CASE("norm") {
  const auto q = default_calculator(30);
  EvolveOptions o;
  o.force_real_a = true;
  const auto tr = evolve_coupled(q, scen(30), o);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    CHECK(std::abs(tr.norm(i) - 1.0) < 1e-6);
    CHECK(tr.survival[i] == 1.0);
  }
  // Only outside the window is the basis orthonormal for complex a.
  const auto lossy = evolve_coupled(q, scen(30), EvolveOptions{});
  CHECK(lossy.weighted_norm(lossy.times.size() - 1) <= 1.0);
  CHECK(lossy.survival.back() < 1.0);
}

TEST_CASE("options are checked") {
  const auto q = default_calculator(5, 20);
  EvolveOptions o;
  o.n_states = 21;
  CHECK_THROWS_AS(evolve_coupled(q, scen(5), o), Error);
  o.n_states = 1;
  CHECK_THROWS_AS(evolve_coupled(q, scen(5), o), Error);
  o = EvolveOptions{};
  o.n_report = 1;
  CHECK_THROWS_AS(evolve_coupled(q, scen(5), o), Error);
}

TEST_CASE("trajectory missing the charge region") {
  const auto q = default_calculator(5);
  auto s = scen(5);
  s.d = 1e-3;
  const auto tr = evolve_coupled(q, s, EvolveOptions{});
  CHECK(tr.ode_steps == 0);
  CHECK(tr.amplitudes.back()[0] == std::complex<double>(1.0));
}

}
