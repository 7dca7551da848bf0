#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hubloc {

inline constexpr std::uint64_t kDefaultSubsetCap = 200'000;

/// P-median instance: `weights[i]` for demand i, distance(i, j) from
/// candidate j to demand i (may be kUnreachable), and the number of sites p.
class MedianProblem {
 public:
  MedianProblem(std::vector<double> weights, std::size_t candidates, std::vector<double> distances,
                std::size_t p);

  std::size_t demand_count() const noexcept { return weights_.size(); }
  std::size_t candidate_count() const noexcept { return candidates_; }
  std::size_t p() const noexcept { return p_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& distances() const noexcept { return d_; }

  double weight(std::size_t i) const { return weights_[i]; }
  double distance(std::size_t i, std::size_t j) const { return d_[i * candidates_ + j]; }

  /// weight * distance, where a zero weight contributes zero even against an
  /// unreachable candidate.
  double term(std::size_t i, std::size_t j) const;

  MedianProblem with_p(std::size_t p) const;

 private:
  std::vector<double> weights_;
  std::size_t candidates_;
  std::vector<double> d_;  // row-major, demand x candidate
  std::size_t p_;
};

struct MedianSolution {
  std::vector<std::size_t> open;    // sorted candidate indices
  std::vector<std::size_t> assign;  // demand -> candidate
  double cost = 0.0;

  friend bool operator==(const MedianSolution&, const MedianSolution&) = default;
};

/// Best p = 1 site: argmin_j sum_i h_i d_ij over candidates that reach every
/// positively weighted demand point; smallest index on ties.
/// Throws Infeasible when no candidate qualifies.
MedianSolution solve_1median(const MedianProblem& prob);

/// Exhaustive search over all p-subsets in lexicographic order. Throws
/// TooLarge when C(J, p) exceeds `subset_cap`, Infeasible when no subset
/// reaches every positively weighted demand point.
MedianSolution solve_pmedian_exact(const MedianProblem& prob,
                                   std::uint64_t subset_cap = kDefaultSubsetCap);

/// Vertex-substitution local search from a seeded random p-subset.
MedianSolution solve_pmedian_interchange(const MedianProblem& prob, std::uint64_t seed);

/// The same local search started from `initial_open`. Each step applies the
/// swap that most lowers (cost, sorted subset) lexicographically; stops at
/// the first subset no single swap improves.
MedianSolution improve_by_interchange(const MedianProblem& prob,
                                      std::vector<std::size_t> initial_open);

/// 1-median when p = 1, exhaustive when within the cap, interchange otherwise.
MedianSolution solve_pmedian(const MedianProblem& prob, std::uint64_t seed,
                             std::uint64_t subset_cap = kDefaultSubsetCap);

/// Nearest open candidate for each demand point and the resulting cost.
/// Returns an infinite cost when some positively weighted point is unreachable.
MedianSolution evaluate_open_set(const MedianProblem& prob, std::vector<std::size_t> open);

/// Number of k-subsets of n items, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

enum class Violation {
  BadAssignmentShape,  // not exactly one candidate per demand point
  IndexOutOfRange,
  AssignedToClosed,    // Y_ij = 1 with X_j = 0
  WrongOpenCount,      // |open| != p
  NotNearest,
  CostMismatch,
};

struct Verification {
  bool ok = true;
  std::vector<Violation> violations;
  std::vector<std::string> reasons;
};

/// Checks the assignment, linking and cardinality constraints, that each
/// demand point sits at its nearest open site, and that `cost` recomputes
/// exactly.
Verification verify_solution(const MedianProblem& prob, const MedianSolution& sol);

void to_json(nlohmann::json& j, const MedianProblem& prob);
MedianProblem median_problem_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const MedianSolution& sol);
void from_json(const nlohmann::json& j, MedianSolution& sol);

}  // namespace hubloc
