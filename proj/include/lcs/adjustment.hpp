#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcs/discovery.hpp"
#include "lcs/graph.hpp"
#include "lcs/independence.hpp"

namespace lcs {

enum class EffectCase { Identifiable, Zero, NonIdentifiable };
enum class Rule { R1, R2, R3a, R3b, None };

const char* to_string(EffectCase c);
const char* to_string(Rule r);

// Generalized adjustment criterion for a single treatment and outcome in a
// DAG, MAG or PAG. Construction does the per-pair work once.
class GacChecker {
 public:
  GacChecker(const MixedGraph& g, std::string_view x, std::string_view y);

  bool amenable() const { return amenable_; }
  const NodeSet& forb() const { return forb_; }
  bool satisfied(const NodeSet& z) const;
  bool satisfied(std::span<const int> z) const;
  // Whether z blocks every definite-status non-causal path (third condition only).
  bool blocks(std::span<const int> z) const;

 private:
  bool connected_definite(int cur, int prev, const Mask& inz, const Mask& anz, Mask& on) const;

  const MixedGraph& g_;
  int x_;
  int y_;
  bool amenable_ = false;
  Mask forb_mask_;
  NodeSet forb_;
  MixedGraph pbd_;
};

NodeSet forb_set(const MixedGraph& g, std::string_view x, std::string_view y);
bool amenable(const MixedGraph& g, std::string_view x, std::string_view y);
bool gac_satisfied(const MixedGraph& g, std::string_view x, std::string_view y, const NodeSet& z);
// Every valid set, in size-then-label order.
std::vector<NodeSet> brute_force_adjustment_search(const MixedGraph& g, std::string_view x,
                                                   std::string_view y);

struct RuleHit {
  Rule rule = Rule::None;
  NodeSet z;
  std::optional<std::string> s;
};

enum class WitnessScope { All, NonParents, Parents };

std::optional<RuleHit> rule_r1(CiEngine& ci, const LocalStructure& ls, std::string_view x, std::string_view y,
                               WitnessScope scope = WitnessScope::All);
std::optional<RuleHit> rule_r2(CiEngine& ci, const LocalStructure& ls, std::string_view x, std::string_view y);
std::optional<RuleHit> rule_r3(CiEngine& ci, const LocalStructure& ls, std::string_view x, std::string_view y);

struct LcsResult {
  EffectCase effect_case = EffectCase::NonIdentifiable;
  Rule rule = Rule::None;
  NodeSet adjustment_set;
  std::optional<std::string> witness;
  std::uint64_t n_tests = 0;
  std::uint64_t structure_tests = 0;
  std::uint64_t rule_tests = 0;
  LocalStructure local;
};

LcsResult lcs(CiEngine& ci, std::string_view x, std::string_view y, const LearnerConfig& cfg = {});

// Exhaustive re-check of every rule condition within the local boundary.
// Returns the rules whose conditions hold somewhere.
std::vector<RuleHit> audit_rules(CiEngine& ci, const LocalStructure& ls, std::string_view x,
                                 std::string_view y);

struct EhsConfig {
  std::uint64_t max_tests = 20'000'000;
  int max_set_size = -1;
  bool stop_at_first = false;
};

struct EhsResult {
  EffectCase effect_case = EffectCase::NonIdentifiable;
  NodeSet adjustment_set;
  std::optional<std::string> witness;
  std::uint64_t n_tests = 0;
  bool capped = false;
};

// Global witness search over every variable: some W with W dep Y | Z and
// W indep Y | Z+X makes Z an adjustment set. Sound only when every variable
// precedes the treatment; used as a test-count baseline.
EhsResult ehs(CiEngine& ci, std::string_view x, std::string_view y, const EhsConfig& cfg = {});

}  // namespace lcs
