#include "hubloc/median_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "hubloc/error.hpp"
#include "hubloc/exact_sum.hpp"
#include "hubloc/road_graph.hpp"

namespace hubloc {

MedianProblem::MedianProblem(std::vector<double> weights, std::size_t candidates,
                             std::vector<double> distances, std::size_t p)
    : weights_(std::move(weights)), candidates_(candidates), d_(std::move(distances)), p_(p) {
  if (d_.size() != weights_.size() * candidates_) {
    throw InputError("distance table must have one entry per (demand, candidate) pair");
  }
  bool any_positive = false;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw InputError("demand weights must be finite and >= 0");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw InputError("at least one demand weight must be positive");
  for (double d : d_) {
    if (std::isnan(d) || d < 0.0) throw InputError("distances must be >= 0 or unreachable");
  }
  if (p_ < 1) throw InputError("p must be at least 1");
  if (p_ > candidates_) {
    throw InputError("p = " + std::to_string(p_) + " exceeds the " + std::to_string(candidates_) +
                     " candidates");
  }
}

double MedianProblem::term(std::size_t i, std::size_t j) const {
  const double w = weights_[i];
  return w == 0.0 ? 0.0 : w * distance(i, j);
}

MedianProblem MedianProblem::with_p(std::size_t p) const {
  return MedianProblem(weights_, candidates_, d_, p);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at every step
    const std::uint64_t num = n - k + i;
    if (r > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r = r * num / i;
  }
  return r;
}

MedianSolution evaluate_open_set(const MedianProblem& prob, std::vector<std::size_t> open) {
  if (open.empty()) throw InputError("open set is empty");
  std::sort(open.begin(), open.end());
  MedianSolution sol;
  sol.assign.resize(prob.demand_count());
  ExactSum cost;
  for (std::size_t i = 0; i < prob.demand_count(); ++i) {
    std::size_t best = open.front();
    double best_d = prob.distance(i, best);
    for (std::size_t j : open) {
      if (prob.distance(i, j) < best_d) {
        best_d = prob.distance(i, j);
        best = j;
      }
    }
    sol.assign[i] = best;
    cost.add(prob.term(i, best));
  }
  sol.open = std::move(open);
  sol.cost = cost.value();
  return sol;
}

MedianSolution solve_1median(const MedianProblem& prob) {
  if (prob.p() != 1) throw InputError("solve_1median requires p = 1");
  std::size_t best = 0;
  double best_cost = kUnreachable;
  for (std::size_t j = 0; j < prob.candidate_count(); ++j) {
    ExactSum cost;
    bool feasible = true;
    for (std::size_t i = 0; i < prob.demand_count() && feasible; ++i) {
      const double t = prob.term(i, j);
      feasible = std::isfinite(t);
      cost.add(t);
    }
    if (!feasible) continue;
    const double c = cost.value();
    if (c < best_cost) {
      best_cost = c;
      best = j;
    }
  }
  if (!std::isfinite(best_cost)) {
    throw Infeasible("no candidate reaches every positively weighted demand point");
  }
  MedianSolution sol;
  sol.open = {best};
  sol.assign.assign(prob.demand_count(), best);
  sol.cost = best_cost;
  return sol;
}

MedianSolution solve_pmedian_exact(const MedianProblem& prob, std::uint64_t subset_cap) {
  const std::size_t n = prob.candidate_count();
  const std::size_t p = prob.p();
  const std::uint64_t subsets = binomial(n, p);
  if (subsets > subset_cap) {
    throw TooLarge("C(" + std::to_string(n) + ", " + std::to_string(p) + ") subsets exceed the cap of " +
                   std::to_string(subset_cap) + "; use the interchange heuristic");
  }
  std::vector<std::size_t> subset(p);
  std::iota(subset.begin(), subset.end(), 0);
  MedianSolution best;
  best.cost = kUnreachable;
  bool have = false;
  while (true) {
    MedianSolution sol = evaluate_open_set(prob, subset);
    if (!have || sol.cost < best.cost) {
      best = std::move(sol);
      have = true;
    }
    // next combination in lexicographic order
    std::size_t k = p;
    while (k > 0 && subset[k - 1] == n - p + (k - 1)) --k;
    if (k == 0) break;
    ++subset[k - 1];
    for (std::size_t m = k; m < p; ++m) subset[m] = subset[m - 1] + 1;
  }
  if (!std::isfinite(best.cost)) {
    throw Infeasible("no set of " + std::to_string(p) + " sites reaches every positively weighted demand point");
  }
  return best;
}

MedianSolution improve_by_interchange(const MedianProblem& prob,
                                      std::vector<std::size_t> initial_open) {
  std::sort(initial_open.begin(), initial_open.end());
  if (initial_open.size() != prob.p() ||
      std::adjacent_find(initial_open.begin(), initial_open.end()) != initial_open.end() ||
      (!initial_open.empty() && initial_open.back() >= prob.candidate_count())) {
    throw InputError("initial open set must hold p distinct candidate indices");
  }
  auto better = [](const MedianSolution& a, const MedianSolution& b) {
    return a.cost < b.cost || (a.cost == b.cost && a.open < b.open);
  };

  MedianSolution current = evaluate_open_set(prob, std::move(initial_open));
  std::vector<char> is_open(prob.candidate_count(), 0);
  while (true) {
    std::fill(is_open.begin(), is_open.end(), 0);
    for (std::size_t j : current.open) is_open[j] = 1;
    MedianSolution best = current;
    for (std::size_t k = 0; k < current.open.size(); ++k) {
      for (std::size_t c = 0; c < prob.candidate_count(); ++c) {
        if (is_open[c]) continue;
        auto trial_open = current.open;
        trial_open[k] = c;
        MedianSolution trial = evaluate_open_set(prob, std::move(trial_open));
        if (better(trial, best)) best = std::move(trial);
      }
    }
    if (!better(best, current)) break;
    current = std::move(best);
  }
  if (!std::isfinite(current.cost)) {
    throw Infeasible("interchange search ended without reaching every positively weighted demand point");
  }
  return current;
}

MedianSolution solve_pmedian_interchange(const MedianProblem& prob, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(prob.candidate_count());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k = 0; k < prob.p(); ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, order.size() - 1);
    std::swap(order[k], order[pick(rng)]);
  }
  order.resize(prob.p());
  return improve_by_interchange(prob, std::move(order));
}

MedianSolution solve_pmedian(const MedianProblem& prob, std::uint64_t seed,
                             std::uint64_t subset_cap) {
  if (prob.p() == 1) return solve_1median(prob);
  if (binomial(prob.candidate_count(), prob.p()) <= subset_cap) {
    return solve_pmedian_exact(prob, subset_cap);
  }
  return solve_pmedian_interchange(prob, seed);
}

Verification verify_solution(const MedianProblem& prob, const MedianSolution& sol) {
  Verification v;
  auto fail = [&v](Violation kind, std::string reason) {
    v.ok = false;
    if (std::find(v.violations.begin(), v.violations.end(), kind) == v.violations.end()) {
      v.violations.push_back(kind);
    }
    v.reasons.push_back(std::move(reason));
  };

  const std::size_t n = prob.candidate_count();
  std::vector<char> is_open(n, 0);
  bool open_ok = true;
  for (std::size_t j : sol.open) {
    if (j >= n) {
      fail(Violation::IndexOutOfRange, "open candidate " + std::to_string(j) + " is out of range");
      open_ok = false;
    } else if (is_open[j]) {
      fail(Violation::WrongOpenCount, "candidate " + std::to_string(j) + " is opened twice");
    } else {
      is_open[j] = 1;
    }
  }
  if (sol.open.size() != prob.p()) {
    fail(Violation::WrongOpenCount, "number of open sites is " + std::to_string(sol.open.size()) +
                                        ", expected p = " + std::to_string(prob.p()));
  }
  if (sol.assign.size() != prob.demand_count()) {
    fail(Violation::BadAssignmentShape,
         "assignment covers " + std::to_string(sol.assign.size()) + " demand points, expected " +
             std::to_string(prob.demand_count()));
    return v;
  }
  bool assign_ok = open_ok;
  for (std::size_t i = 0; i < sol.assign.size(); ++i) {
    const std::size_t j = sol.assign[i];
    if (j >= n) {
      fail(Violation::IndexOutOfRange, "demand " + std::to_string(i) + " is assigned to out-of-range candidate " + std::to_string(j));
      assign_ok = false;
    } else if (!is_open[j]) {
      fail(Violation::AssignedToClosed, "demand " + std::to_string(i) + " is assigned to closed candidate " + std::to_string(j));
      assign_ok = false;
    }
  }
  if (!assign_ok) return v;

  ExactSum cost;
  for (std::size_t i = 0; i < sol.assign.size(); ++i) {
    const double own = prob.distance(i, sol.assign[i]);
    for (std::size_t j : sol.open) {
      if (prob.distance(i, j) < own) {
        fail(Violation::NotNearest, "demand " + std::to_string(i) + " is closer to open candidate " + std::to_string(j));
        break;
      }
    }
    cost.add(prob.term(i, sol.assign[i]));
  }
  const double recomputed = cost.value();
  if (!(recomputed == sol.cost)) {
    fail(Violation::CostMismatch, "cost " + std::to_string(sol.cost) + " does not match recomputed " +
                                      std::to_string(recomputed));
  }
  return v;
}

namespace {

nlohmann::json encode_distance(double d) {
  return std::isinf(d) ? nlohmann::json("inf") : nlohmann::json(d);
}

double decode_distance(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kUnreachable;
    throw InputError("unexpected string '" + j.get<std::string>() + "' where a distance was expected");
  }
  return j.get<double>();
}

}  // namespace

void to_json(nlohmann::json& j, const MedianProblem& prob) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < prob.demand_count(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < prob.candidate_count(); ++c) row.push_back(encode_distance(prob.distance(i, c)));
    rows.push_back(std::move(row));
  }
  j = nlohmann::json{{"weights", prob.weights()}, {"distances", std::move(rows)}, {"p", prob.p()}};
}

MedianProblem median_problem_from_json(const nlohmann::json& j) {
  try {
    auto weights = j.at("weights").get<std::vector<double>>();
    const auto& rows = j.at("distances");
    if (!rows.is_array() || rows.size() != weights.size()) {
      throw InputError("distances must hold one row per weight");
    }
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<double> d;
    d.reserve(weights.size() * cols);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != cols) throw InputError("distance rows must all have the same length");
      for (const auto& v : row) d.push_back(decode_distance(v));
    }
    return MedianProblem(std::move(weights), cols, std::move(d), j.at("p").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed median problem: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const MedianSolution& sol) {
  j = nlohmann::json{{"open", sol.open}, {"assign", sol.assign}, {"cost", encode_distance(sol.cost)}};
}

void from_json(const nlohmann::json& j, MedianSolution& sol) {
  sol.open = j.at("open").get<std::vector<std::size_t>>();
  sol.assign = j.at("assign").get<std::vector<std::size_t>>();
  sol.cost = decode_distance(j.at("cost"));
}

}  // namespace hubloc
