#pragma once

#include <cstdint>

namespace spider {

/// Monotone oracle-access counters shared by every optimizer and baseline.
///
/// Stochastic-gradient accesses are tracked under two labeled conventions:
///  - `sfo`:       gradient *evaluations*; a differential advance of batch S2
///                 evaluates each sampled component at two points, so +2*S2.
///  - `sfo_paper`: sample-draw counting as in the cost formulas, +S2 per
///                 advance (resets and NC-search charge both equally).
struct CostLedger {
  std::uint64_t sfo = 0;
  std::uint64_t sfo_paper = 0;
  std::uint64_t izo = 0;
  std::uint64_t hvp = 0;

  void charge_reset(std::uint64_t batch) {
    sfo += batch;
    sfo_paper += batch;
  }
  void charge_advance(std::uint64_t s2) {
    sfo += 2 * s2;
    sfo_paper += s2;
  }
  void charge_grad(std::uint64_t count) {
    sfo += count;
    sfo_paper += count;
  }
  void charge_izo(std::uint64_t count) { izo += count; }
  void charge_hvp(std::uint64_t count) { hvp += count; }

  std::uint64_t total(bool paper_convention) const {
    return (paper_convention ? sfo_paper : sfo) + izo + hvp;
  }
};

}  // namespace spider
