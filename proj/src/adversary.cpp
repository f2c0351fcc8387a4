#include "sqss/adversary.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace sqss {

namespace {

// Any value off the legitimate band works; agents never look at it
// without the filter countermeasure.
constexpr int kProbeWavelength = 1;

}  // namespace

const char* to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::None: return "none";
    case AdversaryKind::InterceptResend: return "intercept-resend";
    case AdversaryKind::TrojanHorse: return "trojan-horse";
  }
  return "?";
}

std::unique_ptr<AdversaryStrategy> make_adversary(const AdversarySpec& spec) {
  switch (spec.kind) {
    case AdversaryKind::None:
      return std::make_unique<AdversaryStrategy>();
    case AdversaryKind::InterceptResend:
      return std::make_unique<InterceptResendAttack>(spec);
    case AdversaryKind::TrojanHorse:
      return std::make_unique<TrojanHorseAttack>(spec);
  }
  throw std::invalid_argument("unknown adversary kind");
}

// ---------------------------------------------------------------------------
// Intercept-resend.

InterceptResendAttack::InterceptResendAttack(const AdversarySpec& spec)
    : allowed_case3_(spec.allowed_case3), taps_enabled_(spec.taps_enabled) {
  if (allowed_case3_ < 0) {
    throw std::invalid_argument("forced case-3 count must be nonnegative");
  }
}

void InterceptResendAttack::install_taps(ChannelTaps& taps,
                                         std::vector<TripletRegister>& bank,
                                         RandomSource& rng) {
  (void)bank;
  if (!taps_enabled_) return;
  taps.install(Leg::AliceToCharlie, [this, &rng](PhotonBundle bundle) {
    return intercept_outbound(std::move(bundle), rng);
  });
  taps.install(Leg::CharlieToAlice, [this](PhotonBundle bundle) {
    return swap_back(std::move(bundle));
  });
}

PhotonBundle InterceptResendAttack::intercept_outbound(PhotonBundle to_charlie,
                                                       RandomSource& rng) {
  for (BundleSlot& slot : to_charlie.slots) {
    if (!slot.primary.has_value() || !slot.primary->carries_register()) {
      throw std::logic_error("interception expects the dealer's genuine sequence");
    }
    const int pos = slot.primary->position;
    stored_.emplace(pos, *slot.primary);
    const int wavelength = wavelength_for(pos);
    fake_wavelengths_.emplace(wavelength, pos);
    // A decoy prepared in the computational basis; the payload bit only
    // matters on the positions Charlie measures.
    slot.primary = Photon::fake(rng.bit(), wavelength, pos);
  }
  return to_charlie;
}

PhotonBundle InterceptResendAttack::swap_back(PhotonBundle reflected) {
  for (BundleSlot& slot : reflected.slots) {
    if (!slot.primary.has_value() || slot.primary->kind != PhotonKind::Fake) {
      throw std::logic_error("reflected slot does not hold a planted photon");
    }
    const auto tag = fake_wavelengths_.find(slot.primary->wavelength);
    if (tag == fake_wavelengths_.end()) {
      throw std::logic_error("reflected photon carries an unknown wavelength tag");
    }
    const int pos = tag->second;
    // A decoy coming back means Charlie reflected this position: the
    // reordering hides nothing from the party who tagged the photons.
    charlie_check_positions_.insert(pos);
    const auto stored = stored_.find(pos);
    if (stored == stored_.end()) {
      throw std::logic_error("no stored photon for this position");
    }
    slot.primary = stored->second;
    stored_.erase(stored);
  }
  return reflected;
}

std::optional<std::vector<Mode>> InterceptResendAttack::choose_bob_modes(
    const PublicInfo& info, int n_triplets, double share_probability,
    RandomSource& rng) {
  (void)info;
  if (!taps_enabled_) return std::nullopt;

  std::vector<int> charlie_share;
  for (int p = 0; p < n_triplets; ++p) {
    if (charlie_check_positions_.count(p) == 0) charlie_share.push_back(p);
  }
  if (static_cast<int>(charlie_share.size()) < allowed_case3_) {
    throw std::runtime_error(
        "forced case-3 count exceeds Charlie's SHARE positions");
  }
  rng.shuffle(charlie_share);
  std::set<int> forced(charlie_share.begin(),
                       charlie_share.begin() + allowed_case3_);

  std::vector<Mode> modes(static_cast<std::size_t>(n_triplets));
  for (int p = 0; p < n_triplets; ++p) {
    const auto up = static_cast<std::size_t>(p);
    if (charlie_check_positions_.count(p) != 0) {
      // Charlie reflected here, so either choice is safe; stay random to
      // keep the declared statistics inconspicuous.
      modes[up] = rng.bernoulli(share_probability) ? Mode::Share : Mode::Check;
    } else {
      // Mirroring Charlie's SHARE dodges the dangerous case; each forced
      // exception risks exposure in the dealer's check.
      modes[up] = forced.count(p) != 0 ? Mode::Check : Mode::Share;
    }
  }
  return modes;
}

std::map<int, int> InterceptResendAttack::harvest(
    const PublicInfo& info, std::vector<TripletRegister>& bank,
    RandomSource& rng) {
  if (!taps_enabled_) return {};
  if (!info.bob_modes.has_value() || !info.charlie_modes.has_value()) {
    throw std::logic_error("harvest needs the public mode declarations");
  }
  std::map<int, int> recovered;
  for (std::size_t p = 0; p < info.bob_modes->size(); ++p) {
    if ((*info.bob_modes)[p] != Mode::Share ||
        (*info.charlie_modes)[p] != Mode::Share) {
      continue;
    }
    const auto stored = stored_.find(static_cast<int>(p));
    if (stored == stored_.end()) {
      throw std::logic_error("stored photon missing for a key position");
    }
    const Photon& photon = stored->second;
    recovered[static_cast<int>(p)] = measure_z(
        bank.at(static_cast<std::size_t>(photon.register_id)), photon.slot, rng);
  }
  return recovered;
}

// ---------------------------------------------------------------------------
// Trojan horse.

TrojanHorseAttack::TrojanHorseAttack(const AdversarySpec& spec)
    : delay_spies_per_slot_(spec.delay_spies_per_slot),
      taps_enabled_(spec.taps_enabled) {
  if (delay_spies_per_slot_ < 1) {
    throw std::invalid_argument("at least one delay probe per slot is needed");
  }
}

void TrojanHorseAttack::install_taps(ChannelTaps& taps,
                                     std::vector<TripletRegister>& bank,
                                     RandomSource& rng) {
  (void)bank;
  (void)rng;
  if (!taps_enabled_) return;
  taps.install(Leg::AliceToCharlie, [this](PhotonBundle bundle) {
    return attach_probes(std::move(bundle));
  });
  taps.install(Leg::CharlieToAlice, [this](PhotonBundle bundle) {
    return inspect_return(std::move(bundle));
  });
}

PhotonBundle TrojanHorseAttack::attach_probes(PhotonBundle to_charlie) {
  for (std::size_t i = 0; i < to_charlie.slots.size(); ++i) {
    BundleSlot& slot = to_charlie.slots[i];
    const int pos = slot.primary.has_value() ? slot.primary->position
                                             : static_cast<int>(i);
    slot.spies.push_back(Photon::invisible_spy(kProbeWavelength, pos));
    for (int k = 0; k < delay_spies_per_slot_; ++k) {
      slot.spies.push_back(Photon::delay_spy(pos));
    }
  }
  return to_charlie;
}

PhotonBundle TrojanHorseAttack::inspect_return(PhotonBundle returned) {
  for (std::size_t i = 0; i < returned.slots.size(); ++i) {
    BundleSlot& slot = returned.slots[i];
    const int pos = slot.primary.has_value() ? slot.primary->position
                                             : static_cast<int>(i);
    // Probes only survive in slots the receiver reflected; a measured
    // slot came back as a fresh photon without them.
    const bool probes_survived = !slot.spies.empty();
    slot.spies.clear();  // retrieve them before the dealer can look
    if (probes_survived) {
      inferred_check_.push_back(pos);
    } else {
      if (!slot.primary.has_value() ||
          slot.primary->kind != PhotonKind::Fresh) {
        throw std::logic_error("probe-free slot should hold a fresh photon");
      }
      recorded_[pos] = slot.primary->bit;
    }
  }
  return returned;
}

std::map<int, int> TrojanHorseAttack::harvest(const PublicInfo& info,
                                              std::vector<TripletRegister>& bank,
                                              RandomSource& rng) {
  (void)info;
  (void)bank;
  (void)rng;
  if (!taps_enabled_) return {};
  return recorded_;
}

}  // namespace sqss
