#pragma once

#include <cstddef>
#include <vector>

#include "bsg/action_bundle.hpp"
#include "bsg/objective.hpp"

namespace bsg {

struct LedgerRow {
  std::size_t t = 0;
  ActionBundle executed;
  std::vector<double> rewards;
  double value_alg = 0.0;           // f_t(A_t), full-information value
  double value_alg_observed = 0.0;  // f_t(A_t) as the agents measured it
  double value_opt = 0.0;           // f_t(A*_t)
  ActionBundle opt_bundle;
};

// Which executed-bundle value enters the regret sum.
enum class RegretConvention { GroundTruth, Observed };

struct AdversarialEffect {
  std::size_t delta_total = 0;
  std::vector<std::size_t> delta_per_agent;  // roster order
};

class RegretLedger {
 public:
  void append(LedgerRow row) { rows_.push_back(std::move(row)); }
  const std::vector<LedgerRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<LedgerRow> rows_;
};

// 1/2 sum_t f_t(A*_t) - sum_t f_t(A_t).
inline double tracking_regret(const RegretLedger& ledger,
                              RegretConvention convention = RegretConvention::GroundTruth) {
  double opt = 0.0;
  double alg = 0.0;
  for (const auto& r : ledger.rows()) {
    opt += r.value_opt;
    alg += convention == RegretConvention::GroundTruth ? r.value_alg : r.value_alg_observed;
  }
  return 0.5 * opt - alg;
}

// Delta_i(T) = number of t with a*_{i,t} != a*_{i,t+1}; Delta(T) = sum_i.
inline AdversarialEffect adversarial_effect(const RegretLedger& ledger, const AgentRoster& roster) {
  AdversarialEffect eff;
  eff.delta_per_agent.assign(roster.size(), 0);
  const auto& rows = ledger.rows();
  for (std::size_t t = 1; t < rows.size(); ++t) {
    for (std::size_t i = 0; i < roster.size(); ++i) {
      if (rows[t - 1].opt_bundle.action_of(roster[i].id) != rows[t].opt_bundle.action_of(roster[i].id)) {
        ++eff.delta_per_agent[i];
      }
    }
  }
  for (auto d : eff.delta_per_agent) eff.delta_total += d;
  return eff;
}

}  // namespace bsg
