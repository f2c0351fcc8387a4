#include "sqss/protocol.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

#include <boost/math/distributions/binomial.hpp>

#include "sqss/adversary.hpp"

namespace sqss {

const char* to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::RandomizationBased: return "randomization-based";
    case Protocol::MeasureResend: return "measure-resend";
  }
  return "?";
}

const char* to_string(Mode mode) {
  return mode == Mode::Share ? "SHARE" : "CHECK";
}

const char* to_string(Actor actor) {
  switch (actor) {
    case Actor::Alice: return "alice";
    case Actor::Bob: return "bob";
    case Actor::Charlie: return "charlie";
    case Actor::Adversary: return "adversary";
    case Actor::Channel: return "channel";
  }
  return "?";
}

const char* to_string(AbortReason reason) {
  switch (reason) {
    case AbortReason::ErrorRateExceeded: return "error-rate-exceeded";
    case AbortReason::Case3Deficient: return "case3-deficient";
    case AbortReason::MultiPhotonExceeded: return "multi-photon-exceeded";
  }
  return "?";
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Prepare: return "prepare";
    case EventKind::Transmit: return "transmit";
    case EventKind::Filter: return "filter";
    case EventKind::ChooseMode: return "choose-mode";
    case EventKind::Measure: return "measure";
    case EventKind::Return: return "return";
    case EventKind::Confirm: return "confirm";
    case EventKind::Announce: return "announce";
    case EventKind::RestoreOrder: return "restore-order";
    case EventKind::Dispatch: return "dispatch";
    case EventKind::Check: return "check";
    case EventKind::Abort: return "abort";
    case EventKind::ExtractKeys: return "extract-keys";
    case EventKind::Harvest: return "harvest";
  }
  return "?";
}

CaseId classify_case(Mode bob, Mode charlie) {
  if (bob == Mode::Share) {
    return charlie == Mode::Share ? CaseId::BothShare : CaseId::BobShareCharlieCheck;
  }
  return charlie == Mode::Share ? CaseId::BobCheckCharlieShare : CaseId::BothCheck;
}

bool KeyTriple::relation_holds() const {
  if (k_a.size() != k_b.size() || k_a.size() != k_c.size()) return false;
  for (std::size_t i = 0; i < k_a.size(); ++i) {
    const int a = k_a[i] - '0';
    const int b = k_b[i] - '0';
    const int c = k_c[i] - '0';
    if (a != (b ^ c)) return false;
  }
  return true;
}

namespace {

// An undisturbed triplet forces these correlations (cases keyed by the
// agents' SHARE/CHECK choices):
//  - one agent shared bit b, the other's qubit came back: the dealer's
//    Bell result on her qubit and the returned one is PhiPlus for b=0 and
//    PsiPlus for b=1;
//  - both checked: the three-qubit joint measurement returns index 0.
bool record_consistent(const CaseRecord& r) {
  switch (r.case_id) {
    case CaseId::BothShare:
      throw std::logic_error("case 1 records carry no consistency check");
    case CaseId::BobShareCharlieCheck: {
      if (!r.bob_announced || !r.alice_bell) {
        throw std::logic_error("case 2 record incomplete");
      }
      const int b = *r.bob_announced;
      return (b == 0 && *r.alice_bell == BellOutcome::PhiPlus) ||
             (b == 1 && *r.alice_bell == BellOutcome::PsiPlus);
    }
    case CaseId::BobCheckCharlieShare: {
      if (!r.charlie_announced || !r.alice_bell) {
        throw std::logic_error("case 3 record incomplete");
      }
      const int c = *r.charlie_announced;
      return (c == 0 && *r.alice_bell == BellOutcome::PhiPlus) ||
             (c == 1 && *r.alice_bell == BellOutcome::PsiPlus);
    }
    case CaseId::BothCheck:
      if (!r.alice_joint) throw std::logic_error("case 4 record incomplete");
      return *r.alice_joint == 0;
  }
  throw std::logic_error("unknown case");
}

}  // namespace

CheckVerdict eavesdrop_check(const std::vector<CaseRecord>& records,
                             double error_threshold) {
  CheckVerdict verdict;
  int case3 = 0;
  for (const CaseRecord& r : records) {
    if (r.case_id == CaseId::BobCheckCharlieShare) ++case3;
    if (r.case_id == CaseId::BothShare) continue;
    ++verdict.checked;
    if (!record_consistent(r)) ++verdict.inconsistent;
  }
  verdict.error_rate =
      verdict.checked == 0
          ? 0.0
          : static_cast<double>(verdict.inconsistent) / verdict.checked;
  verdict.case3_occurrence =
      records.empty() ? 0.0
                      : static_cast<double>(case3) / static_cast<double>(records.size());
  verdict.pass = verdict.error_rate <= error_threshold;
  if (!verdict.pass) verdict.abort_reason = AbortReason::ErrorRateExceeded;
  return verdict;
}

double case3_occurrence_pvalue(int case3_count, int n_triplets) {
  if (n_triplets <= 0) throw std::invalid_argument("need at least one triplet");
  if (case3_count < 0 || case3_count > n_triplets) {
    throw std::invalid_argument("case-3 count out of range");
  }
  const boost::math::binomial_distribution<double> dist(n_triplets, 0.25);
  return boost::math::cdf(dist, case3_count);
}

bool case3_occurrence_test(const std::vector<CaseRecord>& records,
                           double significance) {
  int case3 = 0;
  for (const CaseRecord& r : records) {
    if (r.case_id == CaseId::BobCheckCharlieShare) ++case3;
  }
  return case3_occurrence_pvalue(case3, static_cast<int>(records.size())) >=
         significance;
}

KeyTriple extract_keys(const std::vector<CaseRecord>& records) {
  KeyTriple keys;
  for (const CaseRecord& r : records) {
    if (r.case_id != CaseId::BothShare) continue;
    if (!r.alice_bit || !r.bob_share_bit || !r.charlie_share_bit) {
      throw std::logic_error("case 1 record is missing a key bit");
    }
    keys.k_a += static_cast<char>('0' + *r.alice_bit);
    keys.k_b += static_cast<char>('0' + *r.bob_share_bit);
    keys.k_c += static_cast<char>('0' + *r.charlie_share_bit);
  }
  return keys;
}

namespace {

void require_genuine(const BundleSlot* slot, const TripletRegister& reg,
                     int expect_slot, const char* who) {
  if (slot == nullptr || !slot->primary.has_value()) {
    throw std::logic_error(std::string(who) +
                           "'s returned photon is missing for a CHECK case");
  }
  const Photon& p = *slot->primary;
  if (!p.carries_register() || p.register_id != reg.id || p.slot != expect_slot) {
    throw std::logic_error(std::string(who) +
                           "'s returned photon is not the original qubit");
  }
}

}  // namespace

ActionResult alice_action(CaseId case_id, TripletRegister& reg,
                          const ReturnedQubits& returned, RandomSource& rng) {
  ActionResult result;
  switch (case_id) {
    case CaseId::BothShare:
      result.bit = measure_z(reg, 1, rng);
      break;
    case CaseId::BobShareCharlieCheck:
      require_genuine(returned.charlie, reg, 3, "Charlie");
      result.bell = measure_bell(reg, 1, 3, rng);
      break;
    case CaseId::BobCheckCharlieShare:
      require_genuine(returned.bob, reg, 2, "Bob");
      result.bell = measure_bell(reg, 1, 2, rng);
      break;
    case CaseId::BothCheck:
      require_genuine(returned.bob, reg, 2, "Bob");
      require_genuine(returned.charlie, reg, 3, "Charlie");
      result.joint_index = measure_joint(reg, rng);
      break;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Run engine.

namespace {

struct EventLog {
  bool tracing = false;
  int seq = 0;
  std::vector<Event> events;

  void operator()(EventKind kind, Actor actor, std::string note) {
    if (tracing) events.push_back(Event{seq, kind, actor, std::move(note)});
    ++seq;
  }
};

void validate_config(const RunConfig& config) {
  if (config.n_triplets < 1) {
    throw std::invalid_argument("a run needs at least one triplet");
  }
  if (config.share_probability <= 0.0 || config.share_probability >= 1.0) {
    throw std::invalid_argument("share probability must lie strictly in (0, 1)");
  }
  if (config.error_threshold < 0.0 || config.error_threshold > 1.0) {
    throw std::invalid_argument("error threshold must lie in [0, 1]");
  }
  if (config.solution1.enabled && (config.solution1.significance <= 0.0 ||
                                   config.solution1.significance >= 1.0)) {
    throw std::invalid_argument("significance must lie strictly in (0, 1)");
  }
  if (config.solution2.enabled && config.solution2.multi_photon_threshold < 0.0) {
    throw std::invalid_argument("multi-photon threshold must be nonnegative");
  }
}

int measure_photon_z(const std::optional<Photon>& photon,
                     std::vector<TripletRegister>& bank, RandomSource& rng) {
  if (!photon.has_value()) {
    throw std::logic_error("no photon to measure in this slot");
  }
  switch (photon->kind) {
    case PhotonKind::Genuine:
      return measure_z(bank.at(static_cast<std::size_t>(photon->register_id)),
                       photon->slot, rng);
    case PhotonKind::Fake:
    case PhotonKind::Fresh:
      return photon->bit;
    case PhotonKind::InvisibleSpy:
    case PhotonKind::DelaySpy:
      break;
  }
  throw std::logic_error("probe photons carry no computational-basis bit");
}

std::vector<Mode> honest_modes(int n, double share_probability,
                               RandomSource& rng) {
  std::vector<Mode> modes(static_cast<std::size_t>(n));
  for (Mode& m : modes) {
    m = rng.bernoulli(share_probability) ? Mode::Share : Mode::Check;
  }
  return modes;
}

/// Reception-side screening (wavelength filter + photon number splitter).
/// Returns true when this bundle trips the countermeasure.
bool screen_bundle(PhotonBundle& bundle, Actor actor,
                   const Solution2Config& cfg, Solution2Report& rep,
                   EventLog& log) {
  FilterResult filtered = wavelength_filter(std::move(bundle));
  rep.flagged_photons += filtered.flagged;

  int missing = 0;
  for (const BundleSlot& slot : filtered.bundle.slots) {
    if (!slot.primary.has_value()) ++missing;
  }
  rep.missing_primary += missing;

  const SplitResult split = photon_number_split(filtered.bundle);
  rep.max_multi_photon_rate =
      std::max(rep.max_multi_photon_rate, split.multi_photon_rate);

  bundle = std::move(filtered.bundle);
  log(EventKind::Filter, actor,
      "flagged " + std::to_string(filtered.flagged) + ", multi-photon rate " +
          std::to_string(split.multi_photon_rate));
  return split.multi_photon_rate > cfg.multi_photon_threshold || missing > 0;
}

void fill_adversary_report(RunReport& report, AdversaryStrategy& adversary,
                           bool armed, const std::map<int, int>& recovered,
                           const std::vector<CaseRecord>& records,
                           const std::vector<std::optional<int>>& charlie_bits) {
  AdversaryReport& ar = report.adversary;
  ar.kind = to_string(adversary.kind());
  ar.active = armed;
  ar.bits_recovered = static_cast<int>(recovered.size());
  ar.detected = report.aborted && armed;

  bool covers_key = true;
  for (const CaseRecord& r : records) {
    if (r.case_id != CaseId::BothShare) continue;
    auto it = recovered.find(r.triplet_id);
    if (it == recovered.end()) {
      covers_key = false;
      continue;
    }
    ar.recovered_k_c += static_cast<char>('0' + it->second);
    // The bit the key algebra demands of the third share.
    const int expected = *r.alice_bit ^ *r.bob_share_bit;
    if (it->second != expected) ++ar.recovered_mismatches;
  }
  for (const auto& [pos, bit] : recovered) {
    if (pos < 0 || static_cast<std::size_t>(pos) >= records.size()) {
      ++ar.recovered_mismatches;
      continue;
    }
    if (records[static_cast<std::size_t>(pos)].case_id == CaseId::BothShare) {
      continue;  // judged against the key algebra above
    }
    // Bits recovered outside the key positions are judged literally.
    const auto& truth = charlie_bits[static_cast<std::size_t>(pos)];
    if (!truth.has_value() || *truth != bit) ++ar.recovered_mismatches;
  }
  ar.succeeded = armed && !report.aborted && covers_key &&
                 ar.recovered_mismatches == 0;
}

/// Tail shared by both protocols once transport produced, per position,
/// the agents' modes, their SHARE bits, and the returned slots.
void finish_run(RunReport& report, const RunConfig& config,
                AdversaryStrategy& adversary, bool armed,
                std::vector<TripletRegister>& bank,
                const std::vector<Mode>& bob_modes,
                const std::vector<Mode>& charlie_modes,
                const std::vector<std::optional<int>>& bob_bits,
                const std::vector<std::optional<int>>& charlie_bits,
                const std::vector<std::optional<BundleSlot>>& returned_b,
                const std::vector<std::optional<BundleSlot>>& returned_c,
                PublicInfo& info, EventLog& log, RandomSource& alice_rng,
                RandomSource& adv_rng) {
  const int n = config.n_triplets;

  // Dealer-side dispatch over the four SHARE/CHECK combinations.
  std::vector<CaseRecord> records;
  records.reserve(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    const auto up = static_cast<std::size_t>(p);
    CaseRecord r;
    r.triplet_id = p;
    r.case_id = classify_case(bob_modes[up], charlie_modes[up]);

    ReturnedQubits ret;
    if (returned_b[up].has_value()) ret.bob = &*returned_b[up];
    if (returned_c[up].has_value()) ret.charlie = &*returned_c[up];

    const ActionResult action = alice_action(r.case_id, bank[up], ret, alice_rng);
    r.alice_bit = action.bit;
    r.alice_bell = action.bell;
    r.alice_joint = action.joint_index;
    r.bob_share_bit = bob_bits[up];
    r.charlie_share_bit = charlie_bits[up];

    ++report.case_counts[static_cast<std::size_t>(r.case_id) - 1];
    records.push_back(std::move(r));
  }
  log(EventKind::Dispatch, Actor::Alice, "case actions applied");

  // Agents publish their bits for the single-SHARE check cases.
  for (CaseRecord& r : records) {
    if (r.case_id == CaseId::BobShareCharlieCheck) {
      r.bob_announced = r.bob_share_bit;
    } else if (r.case_id == CaseId::BobCheckCharlieShare) {
      r.charlie_announced = r.charlie_share_bit;
    }
  }
  log(EventKind::Announce, Actor::Bob, "check-case bits");
  log(EventKind::Announce, Actor::Charlie, "check-case bits");

  report.case3_occurrence =
      static_cast<double>(report.case_counts[2]) / static_cast<double>(n);

  // Occurrence countermeasure runs before the eavesdropping check: a
  // starved case 3 is suspicious on its own.
  report.solution1.enabled = config.solution1.enabled;
  if (config.solution1.enabled) {
    report.solution1.p_value = case3_occurrence_pvalue(report.case_counts[2], n);
    report.solution1.pass =
        report.solution1.p_value >= config.solution1.significance;
    log(EventKind::Check, Actor::Alice,
        "case-3 occurrence p-value " + std::to_string(report.solution1.p_value));
    if (!report.solution1.pass) {
      report.aborted = true;
      report.abort_reason = AbortReason::Case3Deficient;
      log(EventKind::Abort, Actor::Alice, to_string(*report.abort_reason));
      fill_adversary_report(report, adversary, armed, {}, records, charlie_bits);
      report.events = std::move(log.events);
      return;
    }
  }

  const CheckVerdict verdict = eavesdrop_check(records, config.error_threshold);
  report.checked = verdict.checked;
  report.inconsistent = verdict.inconsistent;
  report.error_rate = verdict.error_rate;
  log(EventKind::Check, Actor::Alice,
      "error rate " + std::to_string(verdict.error_rate) + " over " +
          std::to_string(verdict.checked) + " checks");
  if (!verdict.pass) {
    report.aborted = true;
    report.abort_reason = verdict.abort_reason;
    log(EventKind::Abort, Actor::Alice, to_string(*report.abort_reason));
    fill_adversary_report(report, adversary, armed, {}, records, charlie_bits);
    report.events = std::move(log.events);
    return;
  }

  report.keys = extract_keys(records);
  report.key_relation_holds = report.keys.relation_holds();
  log(EventKind::ExtractKeys, Actor::Alice,
      std::to_string(report.keys.k_a.size()) + " key bits");

  const std::map<int, int> recovered = adversary.harvest(info, bank, adv_rng);
  if (!recovered.empty()) {
    log(EventKind::Harvest, Actor::Adversary,
        std::to_string(recovered.size()) + " bits");
  }
  fill_adversary_report(report, adversary, armed, recovered, records,
                        charlie_bits);
  report.events = std::move(log.events);
}

RunReport run_impl(Protocol protocol, const RunConfig& config,
                   AdversaryStrategy& adversary, RandomSource& rng) {
  validate_config(config);
  const int n = config.n_triplets;
  const auto un = static_cast<std::size_t>(n);

  RunReport report;
  report.protocol = protocol;
  report.n_triplets = n;
  report.seed = rng.seed();
  report.solution2.enabled = config.solution2.enabled;

  // Per-party child streams: one party's draws never shift another's.
  RandomSource alice_rng = rng.fork(1);
  RandomSource bob_rng = rng.fork(2);
  RandomSource charlie_rng = rng.fork(3);
  RandomSource adv_rng = rng.fork(4);

  EventLog log;
  log.tracing = config.trace;

  std::vector<TripletRegister> bank;
  bank.reserve(un);
  for (int i = 0; i < n; ++i) bank.emplace_back(i);
  log(EventKind::Prepare, Actor::Alice, std::to_string(n) + " triplets");

  ChannelTaps taps;
  adversary.install_taps(taps, bank, adv_rng);
  const bool armed =
      adversary.kind() != AdversaryKind::None &&
      (taps.has(Leg::AliceToBob) || taps.has(Leg::AliceToCharlie) ||
       taps.has(Leg::BobToAlice) || taps.has(Leg::CharlieToAlice));

  std::vector<Photon> for_bob, for_charlie;
  for_bob.reserve(un);
  for_charlie.reserve(un);
  for (int i = 0; i < n; ++i) {
    for_bob.push_back(Photon::genuine(i, 2, i));
    for_charlie.push_back(Photon::genuine(i, 3, i));
  }
  PhotonBundle s_b = PhotonBundle::of(std::move(for_bob));
  PhotonBundle s_c = PhotonBundle::of(std::move(for_charlie));

  log(EventKind::Transmit, Actor::Alice, "sequence to Bob");
  s_b = transmit(std::move(s_b), Leg::AliceToBob, taps);
  log(EventKind::Transmit, Actor::Alice, "sequence to Charlie");
  s_c = transmit(std::move(s_c), Leg::AliceToCharlie, taps);

  PublicInfo info;

  // Reception-side countermeasure: each agent screens the arriving
  // sequence before doing anything else with it.
  if (config.solution2.enabled) {
    const bool bob_trip =
        screen_bundle(s_b, Actor::Bob, config.solution2, report.solution2, log);
    const bool charlie_trip = screen_bundle(s_c, Actor::Charlie,
                                            config.solution2, report.solution2, log);
    if (bob_trip || charlie_trip) {
      report.solution2.pass = false;
      report.aborted = true;
      report.abort_reason = AbortReason::MultiPhotonExceeded;
      log(EventKind::Abort, Actor::Charlie, to_string(*report.abort_reason));
      fill_adversary_report(report, adversary, armed, {}, {}, {});
      report.events = std::move(log.events);
      return report;
    }
  }

  std::vector<Mode> bob_modes, charlie_modes;
  std::vector<std::optional<int>> bob_bits(un), charlie_bits(un);
  std::vector<std::optional<BundleSlot>> returned_b(un), returned_c(un);

  if (protocol == Protocol::RandomizationBased) {
    // Charlie's turn: SHARE positions are measured, CHECK positions are
    // reflected in a fresh random order.
    charlie_modes = honest_modes(n, config.share_probability, charlie_rng);
    log(EventKind::ChooseMode, Actor::Charlie, "per-position SHARE/CHECK");
    std::vector<int> charlie_check;
    for (int p = 0; p < n; ++p) {
      const auto up = static_cast<std::size_t>(p);
      if (charlie_modes[up] == Mode::Share) {
        charlie_bits[up] =
            measure_photon_z(s_c.slots[up].primary, bank, charlie_rng);
      } else {
        charlie_check.push_back(p);
      }
    }
    log(EventKind::Measure, Actor::Charlie, "SHARE positions");
    charlie_rng.shuffle(charlie_check);
    PhotonBundle reflect_c;
    reflect_c.slots.reserve(charlie_check.size());
    for (int pos : charlie_check) {
      reflect_c.slots.push_back(std::move(s_c.slots[static_cast<std::size_t>(pos)]));
    }
    log(EventKind::Return, Actor::Charlie, "reflected sequence, reordered");
    reflect_c = transmit(std::move(reflect_c), Leg::CharlieToAlice, taps);

    // Bob's turn.
    auto override_modes =
        adversary.choose_bob_modes(info, n, config.share_probability, adv_rng);
    bob_modes = override_modes.has_value()
                    ? std::move(*override_modes)
                    : honest_modes(n, config.share_probability, bob_rng);
    if (static_cast<int>(bob_modes.size()) != n) {
      throw std::logic_error("mode override has the wrong length");
    }
    log(EventKind::ChooseMode, Actor::Bob, "per-position SHARE/CHECK");
    std::vector<int> bob_check;
    for (int p = 0; p < n; ++p) {
      const auto up = static_cast<std::size_t>(p);
      if (bob_modes[up] == Mode::Share) {
        bob_bits[up] = measure_photon_z(s_b.slots[up].primary, bank, bob_rng);
      } else {
        bob_check.push_back(p);
      }
    }
    log(EventKind::Measure, Actor::Bob, "SHARE positions");
    bob_rng.shuffle(bob_check);
    PhotonBundle reflect_b;
    reflect_b.slots.reserve(bob_check.size());
    for (int pos : bob_check) {
      reflect_b.slots.push_back(std::move(s_b.slots[static_cast<std::size_t>(pos)]));
    }
    log(EventKind::Return, Actor::Bob, "reflected sequence, reordered");
    reflect_b = transmit(std::move(reflect_b), Leg::BobToAlice, taps);

    // Only after the dealer confirms reception do the agents reveal where
    // each reflected photon belongs.
    log(EventKind::Confirm, Actor::Alice, "both returned sequences stored");
    info.charlie_returned_positions = charlie_check;
    log(EventKind::Announce, Actor::Charlie, "returned positions");
    info.bob_returned_positions = bob_check;
    log(EventKind::Announce, Actor::Bob, "returned positions");

    info.charlie_modes = charlie_modes;
    log(EventKind::Announce, Actor::Charlie, "modes");
    info.bob_modes = bob_modes;
    log(EventKind::Announce, Actor::Bob, "modes");

    auto restored_c = restore_order(reflect_c, charlie_check, un);
    auto restored_b = restore_order(reflect_b, bob_check, un);
    log(EventKind::RestoreOrder, Actor::Alice, "original order rebuilt");
    returned_b = std::move(restored_b);
    returned_c = std::move(restored_c);
  } else {
    // Measure-resend: SHARE positions come back as fresh photons carrying
    // the measured bit, CHECK positions reflect untouched; order is kept.
    charlie_modes = honest_modes(n, config.share_probability, charlie_rng);
    log(EventKind::ChooseMode, Actor::Charlie, "per-position SHARE/CHECK");
    for (int p = 0; p < n; ++p) {
      const auto up = static_cast<std::size_t>(p);
      BundleSlot& slot = s_c.slots[up];
      if (charlie_modes[up] == Mode::Share) {
        const int bit = measure_photon_z(slot.primary, bank, charlie_rng);
        charlie_bits[up] = bit;
        // The incoming pulse is absorbed by the measurement, along with
        // anything an adversary attached to it.
        slot.primary = Photon::fresh(bit, p);
        slot.spies.clear();
      }
    }
    log(EventKind::Measure, Actor::Charlie, "SHARE positions, fresh resends");
    log(EventKind::Return, Actor::Charlie, "full sequence, order kept");
    PhotonBundle back_c = transmit(std::move(s_c), Leg::CharlieToAlice, taps);

    auto override_modes =
        adversary.choose_bob_modes(info, n, config.share_probability, adv_rng);
    bob_modes = override_modes.has_value()
                    ? std::move(*override_modes)
                    : honest_modes(n, config.share_probability, bob_rng);
    if (static_cast<int>(bob_modes.size()) != n) {
      throw std::logic_error("mode override has the wrong length");
    }
    log(EventKind::ChooseMode, Actor::Bob, "per-position SHARE/CHECK");
    for (int p = 0; p < n; ++p) {
      const auto up = static_cast<std::size_t>(p);
      BundleSlot& slot = s_b.slots[up];
      if (bob_modes[up] == Mode::Share) {
        const int bit = measure_photon_z(slot.primary, bank, bob_rng);
        bob_bits[up] = bit;
        slot.primary = Photon::fresh(bit, p);
        slot.spies.clear();
      }
    }
    log(EventKind::Measure, Actor::Bob, "SHARE positions, fresh resends");
    log(EventKind::Return, Actor::Bob, "full sequence, order kept");
    PhotonBundle back_b = transmit(std::move(s_b), Leg::BobToAlice, taps);

    log(EventKind::Confirm, Actor::Alice, "both returned sequences stored");
    info.charlie_modes = charlie_modes;
    log(EventKind::Announce, Actor::Charlie, "measured and reflected positions");
    info.bob_modes = bob_modes;
    log(EventKind::Announce, Actor::Bob, "measured and reflected positions");

    for (int p = 0; p < n; ++p) {
      const auto up = static_cast<std::size_t>(p);
      returned_c[up] = std::move(back_c.slots[up]);
      returned_b[up] = std::move(back_b.slots[up]);
    }
  }

  finish_run(report, config, adversary, armed, bank, bob_modes, charlie_modes,
             bob_bits, charlie_bits, returned_b, returned_c, info, log,
             alice_rng, adv_rng);
  return report;
}

}  // namespace

RunReport run_protocol(Protocol protocol, const RunConfig& config,
                       AdversaryStrategy& adversary, RandomSource& rng) {
  if (protocol == Protocol::RandomizationBased &&
      adversary.kind() == AdversaryKind::TrojanHorse) {
    throw std::invalid_argument(
        "the Trojan-horse strategy targets the measure-resend protocol");
  }
  if (protocol == Protocol::MeasureResend &&
      adversary.kind() == AdversaryKind::InterceptResend) {
    throw std::invalid_argument(
        "the intercept-resend strategy targets the randomization-based protocol");
  }
  return run_impl(protocol, config, adversary, rng);
}

RunReport run_randomization_based(const RunConfig& config,
                                  AdversaryStrategy& adversary,
                                  RandomSource& rng) {
  return run_protocol(Protocol::RandomizationBased, config, adversary, rng);
}

RunReport run_measure_resend(const RunConfig& config,
                             AdversaryStrategy& adversary, RandomSource& rng) {
  return run_protocol(Protocol::MeasureResend, config, adversary, rng);
}

}  // namespace sqss
