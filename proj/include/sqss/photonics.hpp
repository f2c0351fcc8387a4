#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace sqss {

/// What a channel photon is. Genuine photons carry a register slot of an
/// entangled triplet; the others carry classical payloads:
///  - Fake: adversary substitute prepared in the computational basis,
///    tagged with a non-standard wavelength so its owner can recognize it.
///  - Fresh: honest replacement carrying a just-measured bit.
///  - InvisibleSpy: adversary probe at an off-band wavelength.
///  - DelaySpy: adversary probe at the legitimate wavelength but shifted
///    into a later time window.
enum class PhotonKind { Genuine, Fake, Fresh, InvisibleSpy, DelaySpy };

const char* to_string(PhotonKind kind);

inline constexpr int kLegitimateWavelength = 0;
inline constexpr int kHostTimeWindow = 0;
inline constexpr int kDelayedTimeWindow = 1;

struct Photon {
  PhotonKind kind = PhotonKind::Genuine;
  int register_id = -1;  ///< Genuine only: owning triplet.
  int slot = 0;          ///< Genuine only: register slot 1..3.
  int bit = -1;          ///< Fake/Fresh only: classical payload.
  int wavelength = kLegitimateWavelength;
  int time_window = kHostTimeWindow;
  int position = -1;  ///< Index in the originally prepared sequence.

  static Photon genuine(int register_id, int slot, int position);
  static Photon fake(int bit, int wavelength, int position);
  static Photon fresh(int bit, int position);
  static Photon invisible_spy(int wavelength, int position);
  static Photon delay_spy(int position);

  bool carries_register() const { return kind == PhotonKind::Genuine; }

  bool operator==(const Photon&) const = default;
};

/// One sequence slot: the photon that belongs there plus any extra photons
/// an adversary inserted into the same slot.
struct BundleSlot {
  std::optional<Photon> primary;
  std::vector<Photon> spies;

  std::size_t photon_count() const {
    return (primary.has_value() ? 1 : 0) + spies.size();
  }

  bool operator==(const BundleSlot&) const = default;
};

/// An ordered photon sequence in flight.
struct PhotonBundle {
  std::vector<BundleSlot> slots;

  static PhotonBundle of(std::vector<Photon> photons);

  std::size_t size() const { return slots.size(); }

  bool operator==(const PhotonBundle&) const = default;
};

enum class Leg { AliceToBob = 0, AliceToCharlie = 1, BobToAlice = 2, CharlieToAlice = 3 };

const char* to_string(Leg leg);

using TapHandler = std::function<PhotonBundle(PhotonBundle)>;

/// Adversary access points on the four transmission legs; at most one
/// handler per leg.
class ChannelTaps {
 public:
  void install(Leg leg, TapHandler handler);
  bool has(Leg leg) const;
  PhotonBundle apply(Leg leg, PhotonBundle bundle) const;

 private:
  std::array<TapHandler, 4> handlers_{};
};

/// Moves a bundle across one leg, routing it through the leg's tap if one
/// is installed. The tap may transform the bundle arbitrarily but must
/// preserve its length.
PhotonBundle transmit(PhotonBundle bundle, Leg leg, const ChannelTaps& taps);

/// result.slots[i] = bundle.slots[permutation[i]]; permutation must be a
/// bijection on [0, size).
PhotonBundle reorder(const PhotonBundle& bundle,
                     const std::vector<int>& permutation);

/// Places each returned slot at its announced original position inside a
/// sequence of `sequence_length`; positions not covered stay empty.
/// `announced_positions[i]` is the original position of returned.slots[i].
std::vector<std::optional<BundleSlot>> restore_order(
    const PhotonBundle& returned, const std::vector<int>& announced_positions,
    std::size_t sequence_length);

/// Wavelength filter: photons outside the passband are absorbed and
/// counted. The slot structure is preserved.
struct FilterResult {
  PhotonBundle bundle;
  int flagged = 0;
};

FilterResult wavelength_filter(PhotonBundle bundle,
                               int passband = kLegitimateWavelength);

/// Photon number splitter: reports how many photons occupy each slot and
/// the fraction of slots carrying more than one.
struct SplitResult {
  std::vector<int> counts;
  double multi_photon_rate = 0.0;
};

SplitResult photon_number_split(const PhotonBundle& bundle);

}  // namespace sqss
