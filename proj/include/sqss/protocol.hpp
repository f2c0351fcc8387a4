#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqss/photonics.hpp"
#include "sqss/quantum.hpp"
#include "sqss/random.hpp"

namespace sqss {

enum class Protocol { RandomizationBased, MeasureResend };
const char* to_string(Protocol protocol);

/// An agent's per-position choice: SHARE measures the arriving photon in
/// the computational basis, CHECK sends it back untouched.
enum class Mode { Share, Check };
const char* to_string(Mode mode);

enum class Actor { Alice, Bob, Charlie, Adversary, Channel };
const char* to_string(Actor actor);

/// The four SHARE/CHECK combinations for (Bob, Charlie).
enum class CaseId {
  BothShare = 1,
  BobShareCharlieCheck = 2,
  BobCheckCharlieShare = 3,
  BothCheck = 4,
};

CaseId classify_case(Mode bob, Mode charlie);

/// Everything the run learned about one triplet.
struct CaseRecord {
  int triplet_id = 0;
  CaseId case_id = CaseId::BothShare;

  // Dealer-side result; exactly one is set, selected by the case.
  std::optional<int> alice_bit;            // both SHARE
  std::optional<BellOutcome> alice_bell;   // one agent checked
  std::optional<int> alice_joint;          // both CHECK

  // Agents' private computational-basis results at SHARE positions.
  std::optional<int> bob_share_bit;
  std::optional<int> charlie_share_bit;

  // Bits announced during the eavesdropping check (cases 2 and 3).
  std::optional<int> bob_announced;
  std::optional<int> charlie_announced;

  /// Check verdict for cases 2..4; never set for case 1.
  std::optional<bool> consistent;
};

struct KeyTriple {
  std::string k_a;
  std::string k_b;
  std::string k_c;

  /// K_A == K_B xor K_C, bitwise over equal lengths.
  bool relation_holds() const;
};

enum class AbortReason { ErrorRateExceeded, Case3Deficient, MultiPhotonExceeded };
const char* to_string(AbortReason reason);

struct CheckVerdict {
  int checked = 0;       ///< records with a consistency verdict (cases 2..4)
  int inconsistent = 0;
  double error_rate = 0.0;        ///< inconsistent / checked; 0 when none
  double case3_occurrence = 0.0;  ///< case-3 fraction of all triplets
  bool pass = true;
  std::optional<AbortReason> abort_reason;
};

/// Evaluates the announced results of every CHECK-involving triplet
/// against the correlations an undisturbed triplet must show, and compares
/// the resulting error rate with the threshold. Case-1 records are skipped.
CheckVerdict eavesdrop_check(const std::vector<CaseRecord>& records,
                             double error_threshold);

/// Occurrence countermeasure: lower-tail exact binomial test of the
/// observed case-3 count against Binomial(n, 1/4). Returns the p-value.
double case3_occurrence_pvalue(int case3_count, int n_triplets);

/// True when the occurrence test passes at the given significance level.
bool case3_occurrence_test(const std::vector<CaseRecord>& records,
                           double significance);

/// Builds K_A, K_B, K_C from the case-1 records, in triplet order. Callers
/// must only invoke this after the checks passed.
KeyTriple extract_keys(const std::vector<CaseRecord>& records);

/// Dealer-side dispatch for one triplet once both agents' choices are
/// public. CHECK cases need the corresponding returned photons; each must
/// be the genuine register qubit or the call throws.
struct ReturnedQubits {
  const BundleSlot* bob = nullptr;
  const BundleSlot* charlie = nullptr;
};

struct ActionResult {
  std::optional<int> bit;
  std::optional<BellOutcome> bell;
  std::optional<int> joint_index;
};

ActionResult alice_action(CaseId case_id, TripletRegister& reg,
                          const ReturnedQubits& returned, RandomSource& rng);

// ---------------------------------------------------------------------------
// Run configuration and reporting.

struct Solution1Config {
  bool enabled = false;
  double significance = 1e-3;
};

struct Solution2Config {
  bool enabled = false;
  double multi_photon_threshold = 0.01;
};

struct RunConfig {
  int n_triplets = 1000;
  double share_probability = 0.5;
  double error_threshold = 0.0;
  Solution1Config solution1;
  Solution2Config solution2;
  bool trace = false;  ///< keep the per-run event log in the report
};

enum class EventKind {
  Prepare,
  Transmit,
  Filter,
  ChooseMode,
  Measure,
  Return,
  Confirm,
  Announce,
  RestoreOrder,
  Dispatch,
  Check,
  Abort,
  ExtractKeys,
  Harvest,
};
const char* to_string(EventKind kind);

struct Event {
  int seq = 0;
  EventKind kind = EventKind::Prepare;
  Actor actor = Actor::Channel;
  std::string note;
};

/// Classical information that has been publicly announced so far. This is
/// the only protocol state an adversary may read.
struct PublicInfo {
  /// Original position of each slot Charlie / Bob returned, in returned
  /// order (the reordering announcement).
  std::optional<std::vector<int>> charlie_returned_positions;
  std::optional<std::vector<int>> bob_returned_positions;

  /// Per-position SHARE/CHECK declarations.
  std::optional<std::vector<Mode>> charlie_modes;
  std::optional<std::vector<Mode>> bob_modes;
};

struct Solution1Report {
  bool enabled = false;
  double p_value = 1.0;
  bool pass = true;
};

struct Solution2Report {
  bool enabled = false;
  int flagged_photons = 0;
  int missing_primary = 0;
  double max_multi_photon_rate = 0.0;
  bool pass = true;
};

struct AdversaryReport {
  std::string kind = "none";
  bool active = false;
  int bits_recovered = 0;
  std::string recovered_k_c;
  /// Mismatches between recovered bits and the ground truth they shadow.
  int recovered_mismatches = 0;
  bool detected = false;
  bool succeeded = false;
};

struct RunReport {
  Protocol protocol = Protocol::RandomizationBased;
  int n_triplets = 0;
  std::uint64_t seed = 0;

  bool aborted = false;
  std::optional<AbortReason> abort_reason;

  std::array<int, 4> case_counts{};  ///< indexed by CaseId - 1
  int checked = 0;
  int inconsistent = 0;
  double error_rate = 0.0;
  double case3_occurrence = 0.0;

  Solution1Report solution1;
  Solution2Report solution2;

  KeyTriple keys;  ///< empty on aborted runs
  bool key_relation_holds = false;

  AdversaryReport adversary;

  std::vector<Event> events;  ///< populated when RunConfig::trace is set
};

class AdversaryStrategy;

/// Executes one run of the chosen protocol with the given adversary.
/// The random source is split into per-party child streams internally, so
/// one party's draws never shift another's.
RunReport run_protocol(Protocol protocol, const RunConfig& config,
                       AdversaryStrategy& adversary, RandomSource& rng);

RunReport run_randomization_based(const RunConfig& config,
                                  AdversaryStrategy& adversary,
                                  RandomSource& rng);

RunReport run_measure_resend(const RunConfig& config,
                             AdversaryStrategy& adversary, RandomSource& rng);

}  // namespace sqss
