#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqss/random.hpp"

namespace sqss {

using Complex = std::complex<double>;

inline constexpr double kAmplitudeTolerance = 1e-9;

/// Three-qubit pure state. Basis labels are b1 b2 b3 with slot 1 as the
/// most significant bit: index = 4*b1 + 2*b2 + b3. Slot 1 is the qubit
/// the dealer keeps; slots 2 and 3 travel to the two agents.
struct StateVector3 {
  std::array<Complex, 8> amplitudes{};

  static int index_of(int b1, int b2, int b3) { return (b1 << 2) | (b2 << 1) | b3; }

  static StateVector3 basis(int index);

  double norm_sq() const;
  bool is_normalized(double tol = kAmplitudeTolerance) const;
  bool approx_equal(const StateVector3& other, double tol = kAmplitudeTolerance) const;
};

/// (|000> + |011> + |110> + |101>) / 2, the shared resource state.
/// Equal to Hadamards on every slot of the GHZ state.
StateVector3 make_ghz_like();

/// (|000> + |111>) / sqrt(2).
StateVector3 make_ghz();

/// Hadamard on one slot (1-based).
StateVector3 apply_hadamard(const StateVector3& state, int slot);

/// Bell basis order; the numeric value doubles as the public announcement
/// encoding: PhiPlus=0, PhiMinus=1, PsiPlus=2, PsiMinus=3.
enum class BellOutcome { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

const char* to_string(BellOutcome outcome);

/// The fixed orthonormal three-qubit basis used when both agents pick
/// CHECK: Hadamards applied to the eight GHZ-type vectors
/// (|t>_3 +- |7-t>_3)/sqrt(2), ordered so element 0 is the resource state
/// itself. A fresh, undisturbed triplet therefore always yields index 0.
const std::array<StateVector3, 8>& joint_basis();

/// How a register slot has been consumed, if at all. A slot with a
/// recorded classical bit is exactly a ZMeasured slot; Bell and joint
/// measurements collapse slots without leaving a per-slot bit.
enum class SlotStatus { Free, ZMeasured, BellMeasured, JointMeasured };

/// One entangled triplet plus the classical bookkeeping for each slot.
struct TripletRegister {
  int id = 0;
  StateVector3 state;
  std::array<SlotStatus, 3> slot_status{SlotStatus::Free, SlotStatus::Free,
                                        SlotStatus::Free};
  std::array<std::optional<int>, 3> z_outcomes{};

  TripletRegister() : state(make_ghz_like()) {}
  explicit TripletRegister(int id_) : id(id_), state(make_ghz_like()) {}

  SlotStatus status(int slot) const { return slot_status.at(check_slot(slot) - 1); }
  bool collapsed(int slot) const { return status(slot) != SlotStatus::Free; }

  /// The classical bit for a slot; present exactly when the slot was
  /// measured in the computational basis.
  std::optional<int> recorded_outcome(int slot) const {
    return z_outcomes.at(check_slot(slot) - 1);
  }

  static int check_slot(int slot);
};

/// Computational-basis measurement of one free slot. Collapses the state,
/// records and returns the outcome bit.
int measure_z(TripletRegister& reg, int slot, RandomSource& rng);

/// Bell measurement on two distinct free slots. The remaining slot keeps
/// its conditional state.
BellOutcome measure_bell(TripletRegister& reg, int slot_a, int slot_b,
                         RandomSource& rng);

/// Measurement of the whole triplet in joint_basis(). Returns the basis
/// index (0 = undisturbed resource state).
int measure_joint(TripletRegister& reg, RandomSource& rng);

// ---------------------------------------------------------------------------
// Exact outcome-distribution oracle.
//
// A measurement plan is a sequence of steps on disjoint slots. The oracle
// enumerates every branch with explicit projector matrices and returns the
// exact joint probability of each outcome tuple. It shares no code with the
// sampling path above, so agreement between the two is a meaningful check.

struct ZStep {
  int slot;
};
struct BellStep {
  int slot_a;
  int slot_b;
};
struct JointStep {};

using MeasureStep = std::variant<ZStep, BellStep, JointStep>;

/// One entry per step: Z yields 0/1, Bell 0..3, joint 0..7.
using OutcomeTuple = std::vector<int>;
using Distribution = std::map<OutcomeTuple, double>;

/// Exact joint distribution of the plan's outcomes on `state`. Outcomes
/// with probability below 1e-12 are dropped, so the support of the result
/// is the exact support. Throws std::invalid_argument if steps reuse a slot.
Distribution outcome_distribution(const StateVector3& state,
                                  const std::vector<MeasureStep>& plan);

/// Human-readable label for one outcome tuple, e.g. "1,PhiPlus" for a plan
/// [Z, Bell]. Bell entries use the outcome names, others are numeric.
std::string outcome_label(const std::vector<MeasureStep>& plan,
                          const OutcomeTuple& outcome);

}  // namespace sqss
