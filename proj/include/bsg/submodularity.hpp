#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "bsg/action_bundle.hpp"
#include "bsg/errors.hpp"
#include "bsg/objective.hpp"

namespace bsg {

struct SubmodularityReport {
  bool normalized = false;
  bool monotone = false;
  bool submodular = false;
  // Largest signed violation seen over all checks (<= 0 when none fail).
  double worst_violation = 0.0;
  double worst_normalization = 0.0;
  double worst_monotonicity = 0.0;
  double worst_submodularity = 0.0;
  std::size_t pairs_checked = 0;

  bool all() const { return normalized && monotone && submodular; }
};

inline constexpr std::size_t kMaxSubsetPairs = std::size_t{1} << 20;

namespace detail {

// Partial joint actions of a roster in mixed radix: digit i is 0 when agent i
// is absent, a + 1 when it plays action a.
class BundleLattice {
 public:
  explicit BundleLattice(const AgentRoster& roster) : roster_(roster) {
    std::size_t r = 1;
    for (const auto& a : roster) {
      radix_.push_back(r);
      if (r > kMaxSubsetPairs / (a.num_actions + 1)) throw CapacityError("ground set too large to enumerate");
      r *= a.num_actions + 1;
    }
    size_ = r;
  }

  std::size_t size() const { return size_; }
  std::size_t radix(std::size_t slot) const { return radix_[slot]; }

  std::size_t digit(std::size_t code, std::size_t slot) const {
    return (code / radix_[slot]) % (roster_[slot].num_actions + 1);
  }

  ActionBundle decode(std::size_t code) const {
    ActionBundle b;
    for (std::size_t i = 0; i < roster_.size(); ++i) {
      const std::size_t d = digit(code, i);
      if (d) b.insert({roster_[i].id, ActionIndex{d - 1}});
    }
    return b;
  }

 private:
  const AgentRoster& roster_;
  std::vector<std::size_t> radix_;
  std::size_t size_ = 1;
};

}  // namespace detail

// Exhaustive check of normalization, monotonicity and diminishing returns
// over every pair A subset-of B of partial joint actions and every single
// action s whose agent is absent from B.
inline SubmodularityReport check_monotone_submodular(StepObjective& f, const AgentRoster& roster,
                                                     double tolerance) {
  const detail::BundleLattice lattice(roster);

  std::size_t pairs = 0;
  for (std::size_t code = 0; code < lattice.size(); ++code) {
    std::size_t present = 0;
    for (std::size_t i = 0; i < roster.size(); ++i) present += lattice.digit(code, i) != 0;
    pairs += std::size_t{1} << present;
    if (pairs > kMaxSubsetPairs) throw CapacityError("more than 2^20 subset pairs to enumerate");
  }

  std::vector<double> value(lattice.size());
  for (std::size_t code = 0; code < lattice.size(); ++code) value[code] = f.evaluate(lattice.decode(code));

  SubmodularityReport rep;
  rep.pairs_checked = pairs;
  rep.worst_normalization = std::abs(value[0]);
  rep.worst_monotonicity = -std::numeric_limits<double>::infinity();
  rep.worst_submodularity = -std::numeric_limits<double>::infinity();

  std::vector<std::size_t> present;
  for (std::size_t b = 0; b < lattice.size(); ++b) {
    present.clear();
    for (std::size_t i = 0; i < roster.size(); ++i) {
      if (lattice.digit(b, i)) present.push_back(i);
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << present.size()); ++mask) {
      std::size_t a = b;
      for (std::size_t k = 0; k < present.size(); ++k) {
        if (!(mask >> k & 1U)) a -= lattice.digit(b, present[k]) * lattice.radix(present[k]);
      }
      rep.worst_monotonicity = std::max(rep.worst_monotonicity, value[a] - value[b]);

      for (std::size_t i = 0; i < roster.size(); ++i) {
        if (lattice.digit(b, i)) continue;
        for (std::size_t act = 0; act < roster[i].num_actions; ++act) {
          const std::size_t s = (act + 1) * lattice.radix(i);
          const double gain_small = value[a + s] - value[a];
          const double gain_large = value[b + s] - value[b];
          rep.worst_submodularity = std::max(rep.worst_submodularity, gain_large - gain_small);
        }
      }
    }
  }
  if (rep.worst_submodularity == -std::numeric_limits<double>::infinity()) rep.worst_submodularity = 0.0;

  rep.normalized = rep.worst_normalization <= tolerance;
  rep.monotone = rep.worst_monotonicity <= tolerance;
  rep.submodular = rep.worst_submodularity <= tolerance;
  rep.worst_violation = std::max({rep.worst_normalization, rep.worst_monotonicity, rep.worst_submodularity});
  return rep;
}

}  // namespace bsg
