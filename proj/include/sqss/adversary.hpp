#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "sqss/photonics.hpp"
#include "sqss/protocol.hpp"

namespace sqss {

enum class AdversaryKind { None, InterceptResend, TrojanHorse };
const char* to_string(AdversaryKind kind);

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::None;
  /// Intercept-resend: number of Charlie-SHARE positions Bob deliberately
  /// answers with CHECK (each is an independent 1/2 detection risk).
  int allowed_case3 = 0;
  /// Trojan-horse: delay probes inserted per slot (>= 1).
  int delay_spies_per_slot = 1;
  /// When false the strategy is wired up but never touches the channel or
  /// the public transcript; used to audit the knowledge boundary.
  bool taps_enabled = true;
};

/// A dishonest agent. Strategies interact with a run exclusively through
/// these hooks: channel taps, the agent's own mode declaration, and a
/// final harvest over public announcements. They never see honest parties'
/// private state.
class AdversaryStrategy {
 public:
  virtual ~AdversaryStrategy() = default;

  virtual AdversaryKind kind() const { return AdversaryKind::None; }

  /// Called once before transmission starts. `bank` holds the dealer's
  /// registers so stored genuine photons can later be measured; reading a
  /// register is only physical once the photon is in the adversary's hands.
  virtual void install_taps(ChannelTaps& taps, std::vector<TripletRegister>& bank,
                            RandomSource& rng) {
    (void)taps;
    (void)bank;
    (void)rng;
  }

  /// The dishonest agent's own SHARE/CHECK declaration. Returning nullopt
  /// keeps the honest uniform choice.
  virtual std::optional<std::vector<Mode>> choose_bob_modes(
      const PublicInfo& info, int n_triplets, double share_probability,
      RandomSource& rng) {
    (void)info;
    (void)n_triplets;
    (void)share_probability;
    (void)rng;
    return std::nullopt;
  }

  /// Called after the run completed (never on aborted runs). Returns the
  /// recovered position -> bit map of the other agent's secret.
  virtual std::map<int, int> harvest(const PublicInfo& info,
                                     std::vector<TripletRegister>& bank,
                                     RandomSource& rng) {
    (void)info;
    (void)bank;
    (void)rng;
    return {};
  }
};

std::unique_ptr<AdversaryStrategy> make_adversary(const AdversarySpec& spec);

/// Dishonest Bob against the randomization-based protocol. Substitutes
/// Charlie's outbound sequence with wavelength-tagged fakes, keeps the
/// genuine photons, recognizes his fakes in Charlie's reflected sequence
/// despite the reordering, and swaps the genuine photons back before they
/// reach Alice. Measuring the stored photons at both-SHARE positions after
/// the declarations yields Charlie's key.
class InterceptResendAttack final : public AdversaryStrategy {
 public:
  explicit InterceptResendAttack(const AdversarySpec& spec);

  AdversaryKind kind() const override { return AdversaryKind::InterceptResend; }
  void install_taps(ChannelTaps& taps, std::vector<TripletRegister>& bank,
                    RandomSource& rng) override;
  std::optional<std::vector<Mode>> choose_bob_modes(
      const PublicInfo& info, int n_triplets, double share_probability,
      RandomSource& rng) override;
  std::map<int, int> harvest(const PublicInfo& info,
                             std::vector<TripletRegister>& bank,
                             RandomSource& rng) override;

  // Tap primitives, exposed for direct tests.
  PhotonBundle intercept_outbound(PhotonBundle to_charlie, RandomSource& rng);
  PhotonBundle swap_back(PhotonBundle reflected);

  const std::map<int, Photon>& stored_photons() const { return stored_; }
  const std::set<int>& observed_check_positions() const {
    return charlie_check_positions_;
  }

 private:
  int wavelength_for(int position) const { return position + 1; }

  int allowed_case3_ = 0;
  bool taps_enabled_ = true;
  std::map<int, Photon> stored_;         // position -> genuine photon
  std::map<int, int> fake_wavelengths_;  // wavelength -> position
  std::set<int> charlie_check_positions_;
};

/// Dishonest Bob against the measure-resend protocol. Rides probe photons
/// along with Charlie's sequence: an invisible (off-band) photon and delay
/// photons in a shifted time window. Probes attached to a photon Charlie
/// measured are discarded with it when he emits a fresh replacement, so a
/// returned slot that still carries probes marks a CHECK position, and the
/// fresh photons at SHARE positions carry Charlie's bits in the clear.
class TrojanHorseAttack final : public AdversaryStrategy {
 public:
  explicit TrojanHorseAttack(const AdversarySpec& spec);

  AdversaryKind kind() const override { return AdversaryKind::TrojanHorse; }
  void install_taps(ChannelTaps& taps, std::vector<TripletRegister>& bank,
                    RandomSource& rng) override;
  std::map<int, int> harvest(const PublicInfo& info,
                             std::vector<TripletRegister>& bank,
                             RandomSource& rng) override;

  // Tap primitives, exposed for direct tests.
  PhotonBundle attach_probes(PhotonBundle to_charlie);
  PhotonBundle inspect_return(PhotonBundle returned);

  const std::map<int, int>& recorded_bits() const { return recorded_; }
  const std::vector<int>& inferred_check_positions() const {
    return inferred_check_;
  }

 private:
  int delay_spies_per_slot_ = 1;
  bool taps_enabled_ = true;
  std::map<int, int> recorded_;      // position -> Charlie's measured bit
  std::vector<int> inferred_check_;  // positions whose probes survived
};

}  // namespace sqss
