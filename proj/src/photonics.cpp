#include "sqss/photonics.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace sqss {

const char* to_string(PhotonKind kind) {
  switch (kind) {
    case PhotonKind::Genuine: return "genuine";
    case PhotonKind::Fake: return "fake";
    case PhotonKind::Fresh: return "fresh";
    case PhotonKind::InvisibleSpy: return "invisible-spy";
    case PhotonKind::DelaySpy: return "delay-spy";
  }
  return "?";
}

const char* to_string(Leg leg) {
  switch (leg) {
    case Leg::AliceToBob: return "alice-to-bob";
    case Leg::AliceToCharlie: return "alice-to-charlie";
    case Leg::BobToAlice: return "bob-to-alice";
    case Leg::CharlieToAlice: return "charlie-to-alice";
  }
  return "?";
}

Photon Photon::genuine(int register_id, int slot, int position) {
  Photon p;
  p.kind = PhotonKind::Genuine;
  p.register_id = register_id;
  p.slot = slot;
  p.position = position;
  return p;
}

Photon Photon::fake(int bit, int wavelength, int position) {
  Photon p;
  p.kind = PhotonKind::Fake;
  p.bit = bit;
  p.wavelength = wavelength;
  p.position = position;
  return p;
}

Photon Photon::fresh(int bit, int position) {
  Photon p;
  p.kind = PhotonKind::Fresh;
  p.bit = bit;
  p.position = position;
  return p;
}

Photon Photon::invisible_spy(int wavelength, int position) {
  Photon p;
  p.kind = PhotonKind::InvisibleSpy;
  p.wavelength = wavelength;
  p.position = position;
  return p;
}

Photon Photon::delay_spy(int position) {
  Photon p;
  p.kind = PhotonKind::DelaySpy;
  p.time_window = kDelayedTimeWindow;
  p.position = position;
  return p;
}

PhotonBundle PhotonBundle::of(std::vector<Photon> photons) {
  PhotonBundle bundle;
  bundle.slots.reserve(photons.size());
  for (Photon& p : photons) {
    BundleSlot slot;
    slot.primary = std::move(p);
    bundle.slots.push_back(std::move(slot));
  }
  return bundle;
}

void ChannelTaps::install(Leg leg, TapHandler handler) {
  auto& cell = handlers_[static_cast<std::size_t>(leg)];
  if (cell) {
    throw std::logic_error(std::string("tap already installed on leg ") +
                           to_string(leg));
  }
  cell = std::move(handler);
}

bool ChannelTaps::has(Leg leg) const {
  return static_cast<bool>(handlers_[static_cast<std::size_t>(leg)]);
}

PhotonBundle ChannelTaps::apply(Leg leg, PhotonBundle bundle) const {
  const auto& handler = handlers_[static_cast<std::size_t>(leg)];
  return handler ? handler(std::move(bundle)) : bundle;
}

PhotonBundle transmit(PhotonBundle bundle, Leg leg, const ChannelTaps& taps) {
  const std::size_t n = bundle.size();
  PhotonBundle out = taps.apply(leg, std::move(bundle));
  if (out.size() != n) {
    throw std::logic_error("channel tap changed the sequence length");
  }
  return out;
}

PhotonBundle reorder(const PhotonBundle& bundle,
                     const std::vector<int>& permutation) {
  const std::size_t n = bundle.size();
  if (permutation.size() != n) {
    throw std::invalid_argument("permutation length mismatch");
  }
  std::vector<bool> seen(n, false);
  PhotonBundle out;
  out.slots.reserve(n);
  for (int source : permutation) {
    if (source < 0 || static_cast<std::size_t>(source) >= n ||
        seen[static_cast<std::size_t>(source)]) {
      throw std::invalid_argument("permutation is not a bijection");
    }
    seen[static_cast<std::size_t>(source)] = true;
    out.slots.push_back(bundle.slots[static_cast<std::size_t>(source)]);
  }
  return out;
}

std::vector<std::optional<BundleSlot>> restore_order(
    const PhotonBundle& returned, const std::vector<int>& announced_positions,
    std::size_t sequence_length) {
  if (announced_positions.size() != returned.size()) {
    throw std::invalid_argument(
        "announced positions do not match the returned sequence");
  }
  std::vector<std::optional<BundleSlot>> restored(sequence_length);
  for (std::size_t i = 0; i < returned.size(); ++i) {
    const int pos = announced_positions[i];
    if (pos < 0 || static_cast<std::size_t>(pos) >= sequence_length) {
      throw std::invalid_argument("announced position out of range");
    }
    if (restored[static_cast<std::size_t>(pos)].has_value()) {
      throw std::invalid_argument("announced position repeated");
    }
    restored[static_cast<std::size_t>(pos)] = returned.slots[i];
  }
  return restored;
}

FilterResult wavelength_filter(PhotonBundle bundle, int passband) {
  FilterResult result;
  for (BundleSlot& slot : bundle.slots) {
    if (slot.primary && slot.primary->wavelength != passband) {
      slot.primary.reset();
      ++result.flagged;
    }
    std::vector<Photon> kept;
    kept.reserve(slot.spies.size());
    for (Photon& spy : slot.spies) {
      if (spy.wavelength == passband) {
        kept.push_back(std::move(spy));
      } else {
        ++result.flagged;
      }
    }
    slot.spies = std::move(kept);
  }
  result.bundle = std::move(bundle);
  return result;
}

SplitResult photon_number_split(const PhotonBundle& bundle) {
  SplitResult result;
  result.counts.reserve(bundle.size());
  int multi = 0;
  for (const BundleSlot& slot : bundle.slots) {
    const int count = static_cast<int>(slot.photon_count());
    result.counts.push_back(count);
    if (count > 1) ++multi;
  }
  result.multi_photon_rate =
      bundle.size() == 0 ? 0.0 : static_cast<double>(multi) / static_cast<double>(bundle.size());
  return result;
}

}  // namespace sqss
