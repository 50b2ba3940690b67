#pragma once
#include "hbarq/quench.hpp"
#include <map>
#include <mutex>

// Profiles shared between test cases; scanning one takes about a second.
inline const hbarq::RhoProfile &default_profile(double Q) {
  static std::map<double, hbarq::RhoProfile> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(Q);
  if (it == cache.end()) {
    const auto c = hbarq::Constants::defaults();
    const auto m = hbarq::PotentialModel::two_scale(0.25, 73.6);
    it = cache
             .emplace(Q, hbarq::scan_profile(m, c, Q,
                                             hbarq::default_profile_options(m, c, Q),
                                             hbarq::SolverConfig{}))
             .first;
  }
  return it->second;
}

inline hbarq::QuenchCalculator default_calculator(double Q, int n_states = 20) {
  const auto c = hbarq::Constants::defaults();
  return hbarq::QuenchCalculator(c, default_profile(Q),
                                 hbarq::GravitationalSpectrum(c, n_states));
}
