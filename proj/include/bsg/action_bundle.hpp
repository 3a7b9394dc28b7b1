#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bsg/errors.hpp"
#include "bsg/simplex.hpp"

namespace bsg {

using AgentId = std::size_t;

struct GroundAction {
  AgentId agent = 0;
  ActionIndex action;

  friend bool operator==(const GroundAction&, const GroundAction&) = default;
  friend auto operator<=>(const GroundAction&, const GroundAction&) = default;
};

// Partial joint action: at most one action per agent, kept sorted by agent.
class ActionBundle {
 public:
  ActionBundle() = default;
  ActionBundle(std::initializer_list<GroundAction> entries) {
    for (const auto& e : entries) insert(e);
  }

  // Throws ParameterError if the agent already has an action.
  void insert(GroundAction a) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), a.agent,
                               [](const GroundAction& e, AgentId id) { return e.agent < id; });
    if (it != entries_.end() && it->agent == a.agent) {
      throw ParameterError("agent " + std::to_string(a.agent) + " already has an action in the bundle");
    }
    entries_.insert(it, a);
  }

  ActionBundle with(GroundAction a) const {
    ActionBundle b = *this;
    b.insert(a);
    return b;
  }

  bool contains_agent(AgentId agent) const { return action_of(agent).has_value(); }

  std::optional<ActionIndex> action_of(AgentId agent) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), agent,
                               [](const GroundAction& e, AgentId id) { return e.agent < id; });
    if (it != entries_.end() && it->agent == agent) return it->action;
    return std::nullopt;
  }

  // True if every entry of this bundle is also in other.
  bool is_subset_of(const ActionBundle& other) const {
    return std::includes(other.entries_.begin(), other.entries_.end(), entries_.begin(), entries_.end());
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const GroundAction& operator[](std::size_t i) const { return entries_[i]; }

  friend bool operator==(const ActionBundle&, const ActionBundle&) = default;

  friend std::ostream& operator<<(std::ostream& os, const ActionBundle& b) {
    os << '{';
    for (std::size_t i = 0; i < b.entries_.size(); ++i) {
      if (i) os << ' ';
      os << b.entries_[i].agent << ':' << b.entries_[i].action.value;
    }
    return os << '}';
  }

 private:
  std::vector<GroundAction> entries_;
};

}  // namespace bsg
