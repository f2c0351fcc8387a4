#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sqss/adversary.hpp"
#include "sqss/protocol.hpp"
#include "sqss/quantum.hpp"

namespace sqss {

struct ExperimentPlan {
  Protocol protocol = Protocol::RandomizationBased;
  RunConfig config;
  AdversarySpec adversary;
  int runs = 100;
  std::uint64_t seed = 42;
};

/// Pooled statistics over a batch of runs. Counters are integers, so
/// merging partial batches in any order reproduces the same summary; the
/// derived ratios are pure functions of the counters.
struct Summary {
  int runs = 0;
  int aborted_runs = 0;
  int completed_runs = 0;
  std::array<int, 3> abort_reasons{};  ///< indexed like AbortReason

  long long triplets = 0;
  std::array<long long, 4> case_counts{};
  long long checked = 0;
  long long inconsistent = 0;
  long long key_bits = 0;
  long long flagged_photons = 0;

  int key_relation_runs = 0;  ///< completed runs whose keys satisfy the relation
  int succeeded_runs = 0;     ///< runs where the adversary recovered the key share

  double detection_rate = 0.0;
  double success_rate = 0.0;
  double pooled_error_rate = 0.0;
  double pooled_case3_occurrence = 0.0;
  std::array<double, 4> case_frequency{};
};

Summary summarize(const std::vector<RunReport>& runs);

/// Seed of run `run_index` within a plan; a pure function, so any subset
/// of runs can be reproduced without executing the others.
std::uint64_t run_seed(std::uint64_t plan_seed, int run_index);

/// One evaluated quantitative claim.
struct ClaimCheck {
  std::string name;
  std::string claim;
  std::string expected;
  std::string observed;
  bool pass = true;
};

struct AggregateReport {
  ExperimentPlan plan;
  std::vector<RunReport> runs;
  Summary summary;
  std::vector<ClaimCheck> checks;  ///< filled by verify_claims
};

AggregateReport run_experiment(const ExperimentPlan& plan);

/// Evaluates the quantitative claims that apply to this experiment's
/// configuration (honest completeness, attack recovery, countermeasure
/// detection) and appends them to report.checks. Returns overall pass.
bool verify_claims(AggregateReport& report);

// ---------------------------------------------------------------------------
// Statistics helpers.

/// Exact lower-tail binomial p-value P[X <= observed], X ~ B(trials, p).
double binomial_lower_pvalue(int observed, int trials, double p);

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
  /// An outcome with observed counts lies outside the exact support.
  bool support_violation = false;
};

/// Goodness of fit of observed counts against an exact distribution.
/// Support-violating cells do not enter the statistic; they set the flag.
ChiSquareResult chi_square_fit(const std::map<OutcomeTuple, long long>& observed,
                               const Distribution& expected);

/// Draws `samples` fresh triplets of `state`, executes `plan` through the
/// sampling measurement path, and tests the counts against the exact
/// oracle: support must agree and the chi-square p-value must clear the
/// significance level.
struct EquivalenceResult {
  std::map<OutcomeTuple, long long> observed;
  ChiSquareResult chi;
  bool support_equal = false;
  bool pass = false;
};

EquivalenceResult sampling_matches_oracle(const StateVector3& state,
                                          const std::vector<MeasureStep>& plan,
                                          int samples, double significance,
                                          RandomSource& rng);

}  // namespace sqss
