#pragma once

#include <cmath>
#include <vector>

#include "routesim/common.hpp"

namespace routesim {

/// The L-stage landmark ladder: S_i = {v : level[v] >= i}, S_0 = all nodes,
/// Pr[v in S_i] = p[i] independently per node. Stage parameters follow from
/// the ladder: h_i = ceil(c*log2(n)/p_i) and Delta_i = ceil(c'*h_i*p_{i-1}).
struct Hierarchy {
  uint32_t n = 0;
  uint32_t L = 0;
  double c = 4.0;
  double cprime = 4.0;
  std::vector<double> p;        // indexed 0..L, p[0] = 1
  std::vector<uint8_t> level;   // per node, 0..L
  std::vector<uint32_t> salts;  // per stage, bumped when a stage is resampled
  uint64_t seed = 0;
  bool forced = false;  // levels fixed by the caller, never resampled

  // Raw formula value; may exceed n-1, in which case the run clamps it
  // (paths never have more than n-1 hops).
  double h_formula(uint32_t i) const {
    return std::ceil(c * std::log2(std::max<double>(2.0, n)) / p[i]);
  }

  uint32_t h(uint32_t i) const {
    return static_cast<uint32_t>(std::min<double>(h_formula(i), n > 1 ? n - 1 : 1));
  }

  /// Unclamped overlap bound Delta_i; the operational Delta additionally
  /// never exceeds |S_{i-1}| (a no-op on the lists).
  uint32_t delta_bound(uint32_t i) const {
    return static_cast<uint32_t>(std::ceil(cprime * h_formula(i) * p[i - 1]));
  }

  std::vector<NodeId> set_members(uint32_t i) const {
    std::vector<NodeId> out;
    for (NodeId v = 1; v <= n; ++v)
      if (level[v] >= i) out.push_back(v);
    return out;
  }

  uint32_t set_size(uint32_t i) const {
    uint32_t c_ = 0;
    for (NodeId v = 1; v <= n; ++v)
      if (level[v] >= i) ++c_;
    return c_;
  }
};

inline uint32_t max_hierarchy_stages(uint32_t n) {
  uint32_t lg = ceil_log2(std::max<uint32_t>(2, n));
  return std::max<uint32_t>(1, ceil_log2(std::max<uint32_t>(2, lg)));
}

/// p_i = (sqrt n)^(-(2^L/(2^L-1)) (2^i-1)/2^i); p_L is always n^(-1/2).
inline std::vector<double> routing_ladder(uint32_t n, uint32_t L) {
  std::vector<double> p(L + 1);
  p[0] = 1.0;
  double outer = std::pow(2.0, L) / (std::pow(2.0, L) - 1.0);
  for (uint32_t i = 1; i <= L; ++i) {
    double frac = (std::pow(2.0, i) - 1.0) / std::pow(2.0, i);
    p[i] = std::pow(std::sqrt(static_cast<double>(n)), -outer * frac);
  }
  return p;
}

namespace detail {

inline double stage_coin(uint64_t seed, uint32_t stage, uint32_t salt, NodeId v) {
  uint64_t x = mix(mix(seed, 0x9E3779B9ull + stage), mix(salt, v));
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline void resample_levels(Hierarchy& h) {
  h.level.assign(h.n + 1, 0);
  for (NodeId v = 1; v <= h.n; ++v) {
    uint32_t lvl = 0;
    for (uint32_t i = 1; i <= h.L; ++i) {
      double cond = h.p[i] / h.p[i - 1];
      if (stage_coin(h.seed, i, h.salts[i], v) < cond)
        lvl = i;
      else
        break;
    }
    h.level[v] = static_cast<uint8_t>(lvl);
  }
}

}  // namespace detail

/// Samples per-node levels so that Pr[level >= i] = p_i, independently per
/// node and deterministically per seed. L is clamped to [1, ceil(log log n)].
inline Hierarchy sample_levels(uint32_t n, uint32_t L, uint64_t seed,
                               std::vector<double> ladder = {}, double c = 4.0,
                               double cprime = 4.0) {
  Hierarchy h;
  h.n = n;
  h.L = std::max<uint32_t>(1, std::min(L, max_hierarchy_stages(n)));
  h.c = c;
  h.cprime = cprime;
  h.p = ladder.empty() ? routing_ladder(n, h.L) : std::move(ladder);
  if (h.p.size() != h.L + 1 || h.p[0] != 1.0)
    throw ValidationError("hierarchy ladder must have p_0 = 1 and L+1 entries");
  h.seed = seed;
  h.salts.assign(h.L + 1, 0);
  detail::resample_levels(h);
  return h;
}

/// Redraws only stage i's conditional coins (the paper's restart hook);
/// memberships of deeper stages are recomputed through the new S_i.
inline void resample_stage(Hierarchy& h, uint32_t i) {
  if (h.forced) throw Error("cannot resample a forced hierarchy");
  ++h.salts.at(i);
  detail::resample_levels(h);
}

/// Fixed levels, for tests that force landmark placement.
inline Hierarchy forced_hierarchy(uint32_t n, uint32_t L, const std::vector<uint8_t>& level,
                                  double c = 4.0, double cprime = 4.0) {
  Hierarchy h;
  h.n = n;
  h.L = L;
  h.c = c;
  h.cprime = cprime;
  h.p = routing_ladder(n, L);
  h.level = level;
  h.salts.assign(L + 1, 0);
  h.forced = true;
  if (level.size() != n + 1) throw ValidationError("forced levels: need n+1 entries");
  return h;
}

}  // namespace routesim
