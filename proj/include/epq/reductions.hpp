#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "epq/bigint.hpp"
#include "epq/equivalence.hpp"
#include "epq/expansion.hpp"
#include "epq/structure.hpp"

namespace epq {

/// Answers |phi(D)| for a fixed formula. Must be deterministic and safe to
/// call concurrently.
using CountOracle = std::function<BigInt(const Structure&)>;

struct OracleCall {
  std::string label;
  std::size_t universe_size;
  BigInt answer;
};

/// Records every call made through the oracles it wraps.
class OracleTranscript {
 public:
  OracleTranscript() : state_(std::make_shared<State>()) {}

  CountOracle wrap(std::string label, CountOracle oracle) const;
  std::vector<OracleCall> calls() const;
  std::size_t size() const;

 private:
  struct State {
    mutable std::mutex mutex;
    std::vector<OracleCall> calls;
  };
  std::shared_ptr<State> state_;
};

/// Everything about a weighted sum that does not depend on B: the
/// semi-counting classes of its terms, the separating structure C and the
/// class values |psi_j(C)|.
struct RecoveryPlan {
  WeightedPpSum sum;
  std::vector<std::vector<std::size_t>> classes;
  Structure c;
  std::vector<BigInt> nodes;
};

/// Builds the plan; with `c` given, checks that it separates the classes
/// with positive values (PreconditionViolation otherwise).
RecoveryPlan plan_recovery(const WeightedPpSum& sum, const std::optional<Structure>& c = std::nullopt,
                           const SearchLimits& limits = default_limits());

/// Per class j, sum over its terms of c_psi |psi(B)|, from exactly one
/// oracle call on each B x C^l, l = 0..s-1.
std::vector<BigInt> recover_class_sums(const RecoveryPlan& plan, const Structure& b, const CountOracle& oracle);

/// |phi_i(B)| for pairwise semi-counting equivalent, pairwise not counting
/// equivalent terms, given an oracle for sum_i c_i |phi_i(.)|. One oracle
/// call per term.
std::vector<BigInt> split_semi_class(const std::vector<WeightedTerm>& terms, const Structure& b,
                                     const CountOracle& sum_oracle);

/// |psi(B)| for every term of the plan, using only `oracle` for the whole sum.
std::vector<BigInt> recover_term_counts(const RecoveryPlan& plan, const Structure& b, const CountOracle& oracle);

/// |phi(B)| from counts of the members of phi+ (oracles aligned with
/// plus.members()).
BigInt ep_count_from_pp_oracle(const DisjunctiveEp& phi, const PlusSet& plus, const Structure& b,
                               const std::vector<CountOracle>& pp_oracles);

enum class AnchorChoice {
  OwnStructure,   // C = A_psi
  DisjointUnion,  // C = disjoint union of all structures in phi_af^-
};

/// |psi(B)| for psi = plus.members()[index], from an oracle for |phi(.)|.
/// `minus_plan`, if given, must be plan_recovery(plus.minus_sum()).
BigInt pp_count_from_ep_oracle(std::size_t index, const DisjunctiveEp& phi, const PlusSet& plus, const Structure& b,
                               const CountOracle& ep_oracle, AnchorChoice anchor = AnchorChoice::OwnStructure,
                               const RecoveryPlan* minus_plan = nullptr,
                               const SearchLimits& limits = default_limits());

}  // namespace epq
