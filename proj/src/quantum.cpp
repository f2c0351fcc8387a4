#include "sqss/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace sqss {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Support cutoff for the exact oracle: branches below this probability are
// numerically zero for the states handled here (exact probabilities are
// multiples of 1/8 or appear only through rounding noise).
constexpr double kSupportCutoff = 1e-12;

// Bell vector k on an ordered qubit pair, as the two nonzero basis
// amplitudes: |b0 b1> gets `first`, |b0' b1'> gets `sign/sqrt(2)`.
struct BellPattern {
  int u0, v0;  // first basis ket, both qubits
  int u1, v1;  // second basis ket
  double sign;
};

constexpr BellPattern kBell[4] = {
    {0, 0, 1, 1, +1.0},  // PhiPlus
    {0, 0, 1, 1, -1.0},  // PhiMinus
    {0, 1, 1, 0, +1.0},  // PsiPlus
    {0, 1, 1, 0, -1.0},  // PsiMinus
};

int compose_index(int slot_a, int bit_a, int slot_b, int bit_b, int slot_c,
                  int bit_c) {
  int bits[4] = {0, 0, 0, 0};  // 1-based
  bits[slot_a] = bit_a;
  bits[slot_b] = bit_b;
  bits[slot_c] = bit_c;
  return StateVector3::index_of(bits[1], bits[2], bits[3]);
}

void require_free(const TripletRegister& reg, int slot) {
  if (reg.collapsed(slot)) {
    throw std::logic_error("register " + std::to_string(reg.id) + " slot " +
                           std::to_string(slot) + " already measured");
  }
}

}  // namespace

int TripletRegister::check_slot(int slot) {
  if (slot < 1 || slot > 3) {
    throw std::invalid_argument("slot must be 1, 2 or 3");
  }
  return slot;
}

StateVector3 StateVector3::basis(int index) {
  if (index < 0 || index > 7) {
    throw std::invalid_argument("basis index must be in [0, 8)");
  }
  StateVector3 s;
  s.amplitudes[static_cast<std::size_t>(index)] = 1.0;
  return s;
}

double StateVector3::norm_sq() const {
  double total = 0.0;
  for (const Complex& a : amplitudes) total += std::norm(a);
  return total;
}

bool StateVector3::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

bool StateVector3::approx_equal(const StateVector3& other, double tol) const {
  for (int i = 0; i < 8; ++i) {
    if (std::abs(amplitudes[static_cast<std::size_t>(i)] -
                 other.amplitudes[static_cast<std::size_t>(i)]) > tol) {
      return false;
    }
  }
  return true;
}

StateVector3 make_ghz_like() {
  StateVector3 s;
  s.amplitudes[StateVector3::index_of(0, 0, 0)] = 0.5;
  s.amplitudes[StateVector3::index_of(0, 1, 1)] = 0.5;
  s.amplitudes[StateVector3::index_of(1, 1, 0)] = 0.5;
  s.amplitudes[StateVector3::index_of(1, 0, 1)] = 0.5;
  return s;
}

StateVector3 make_ghz() {
  StateVector3 s;
  s.amplitudes[0] = kInvSqrt2;
  s.amplitudes[7] = kInvSqrt2;
  return s;
}

StateVector3 apply_hadamard(const StateVector3& state, int slot) {
  TripletRegister::check_slot(slot);
  const int mask = 1 << (3 - slot);
  StateVector3 out;
  for (int i = 0; i < 8; ++i) {
    const Complex a = state.amplitudes[static_cast<std::size_t>(i)];
    if (a == Complex{}) continue;
    const double sign = (i & mask) ? -1.0 : 1.0;
    // H|b> = (|0> + (-1)^b |1>)/sqrt(2) on the addressed slot.
    out.amplitudes[static_cast<std::size_t>(i & ~mask)] += a * kInvSqrt2;
    out.amplitudes[static_cast<std::size_t>(i | mask)] += a * sign * kInvSqrt2;
  }
  return out;
}

const char* to_string(BellOutcome outcome) {
  switch (outcome) {
    case BellOutcome::PhiPlus: return "PhiPlus";
    case BellOutcome::PhiMinus: return "PhiMinus";
    case BellOutcome::PsiPlus: return "PsiPlus";
    case BellOutcome::PsiMinus: return "PsiMinus";
  }
  return "?";
}

const std::array<StateVector3, 8>& joint_basis() {
  static const std::array<StateVector3, 8> basis = [] {
    std::array<StateVector3, 8> b{};
    for (int t = 0; t < 4; ++t) {
      for (int s = 0; s < 2; ++s) {
        StateVector3 ghz_type;
        ghz_type.amplitudes[static_cast<std::size_t>(t)] = kInvSqrt2;
        ghz_type.amplitudes[static_cast<std::size_t>(7 - t)] =
            (s == 0 ? kInvSqrt2 : -kInvSqrt2);
        StateVector3 g = apply_hadamard(
            apply_hadamard(apply_hadamard(ghz_type, 1), 2), 3);
        b[static_cast<std::size_t>(2 * t + s)] = g;
      }
    }
    return b;
  }();
  return basis;
}

int measure_z(TripletRegister& reg, int slot, RandomSource& rng) {
  TripletRegister::check_slot(slot);
  require_free(reg, slot);

  const int mask = 1 << (3 - slot);
  double p0 = 0.0;
  for (int i = 0; i < 8; ++i) {
    if (!(i & mask)) p0 += std::norm(reg.state.amplitudes[static_cast<std::size_t>(i)]);
  }

  const int outcome = rng.uniform01() < p0 ? 0 : 1;
  const double p = outcome == 0 ? p0 : 1.0 - p0;
  if (p <= 0.0) {
    throw std::logic_error("measurement branch with zero probability drawn");
  }

  const double scale = 1.0 / std::sqrt(p);
  for (int i = 0; i < 8; ++i) {
    const bool keep = ((i & mask) != 0) == (outcome == 1);
    auto& a = reg.state.amplitudes[static_cast<std::size_t>(i)];
    a = keep ? a * scale : Complex{};
  }

  reg.slot_status[static_cast<std::size_t>(slot - 1)] = SlotStatus::ZMeasured;
  reg.z_outcomes[static_cast<std::size_t>(slot - 1)] = outcome;
  return outcome;
}

BellOutcome measure_bell(TripletRegister& reg, int slot_a, int slot_b,
                         RandomSource& rng) {
  TripletRegister::check_slot(slot_a);
  TripletRegister::check_slot(slot_b);
  if (slot_a == slot_b) {
    throw std::invalid_argument("Bell measurement needs two distinct slots");
  }
  require_free(reg, slot_a);
  require_free(reg, slot_b);
  const int slot_c = 6 - slot_a - slot_b;

  // inner[k][x] = <Bell_k (slots a,b); x (slot c) | state>
  Complex inner[4][2];
  double prob[4];
  for (int k = 0; k < 4; ++k) {
    const BellPattern& bp = kBell[k];
    prob[k] = 0.0;
    for (int x = 0; x < 2; ++x) {
      const Complex a0 =
          reg.state.amplitudes[static_cast<std::size_t>(compose_index(
              slot_a, bp.u0, slot_b, bp.v0, slot_c, x))];
      const Complex a1 =
          reg.state.amplitudes[static_cast<std::size_t>(compose_index(
              slot_a, bp.u1, slot_b, bp.v1, slot_c, x))];
      inner[k][x] = (a0 + bp.sign * a1) * kInvSqrt2;
      prob[k] += std::norm(inner[k][x]);
    }
  }

  const double u = rng.uniform01();
  int outcome = 3;
  double cumulative = 0.0;
  for (int k = 0; k < 3; ++k) {
    cumulative += prob[k];
    if (u < cumulative) {
      outcome = k;
      break;
    }
  }
  if (prob[outcome] <= 0.0) {
    // Only reachable through rounding at a support boundary; pick the
    // likeliest branch instead of dividing by zero.
    outcome = 0;
    for (int k = 1; k < 4; ++k) {
      if (prob[k] > prob[outcome]) outcome = k;
    }
  }

  // Post-state: the Bell pair re-expanded in the computational basis,
  // tensored with slot c's conditional state.
  const BellPattern& bp = kBell[outcome];
  const double scale = 1.0 / std::sqrt(prob[outcome]);
  StateVector3 post;
  for (int x = 0; x < 2; ++x) {
    const Complex coeff = inner[outcome][x] * scale;
    post.amplitudes[static_cast<std::size_t>(
        compose_index(slot_a, bp.u0, slot_b, bp.v0, slot_c, x))] +=
        coeff * kInvSqrt2;
    post.amplitudes[static_cast<std::size_t>(
        compose_index(slot_a, bp.u1, slot_b, bp.v1, slot_c, x))] +=
        coeff * bp.sign * kInvSqrt2;
  }
  reg.state = post;

  reg.slot_status[static_cast<std::size_t>(slot_a - 1)] = SlotStatus::BellMeasured;
  reg.slot_status[static_cast<std::size_t>(slot_b - 1)] = SlotStatus::BellMeasured;
  return static_cast<BellOutcome>(outcome);
}

int measure_joint(TripletRegister& reg, RandomSource& rng) {
  for (int slot = 1; slot <= 3; ++slot) require_free(reg, slot);

  const auto& basis = joint_basis();
  Complex overlap[8];
  double prob[8];
  for (int k = 0; k < 8; ++k) {
    Complex c{};
    for (int i = 0; i < 8; ++i) {
      c += std::conj(basis[static_cast<std::size_t>(k)]
                         .amplitudes[static_cast<std::size_t>(i)]) *
           reg.state.amplitudes[static_cast<std::size_t>(i)];
    }
    overlap[k] = c;
    prob[k] = std::norm(c);
  }

  const double u = rng.uniform01();
  int outcome = 7;
  double cumulative = 0.0;
  for (int k = 0; k < 7; ++k) {
    cumulative += prob[k];
    if (u < cumulative) {
      outcome = k;
      break;
    }
  }
  if (prob[outcome] <= 0.0) {
    outcome = 0;
    for (int k = 1; k < 8; ++k) {
      if (prob[k] > prob[outcome]) outcome = k;
    }
  }

  // Projection onto a one-dimensional subspace keeps the overlap's phase.
  const Complex phase = overlap[outcome] / std::abs(overlap[outcome]);
  StateVector3 post = basis[static_cast<std::size_t>(outcome)];
  for (auto& a : post.amplitudes) a *= phase;
  reg.state = post;

  for (auto& st : reg.slot_status) st = SlotStatus::JointMeasured;
  return outcome;
}

// ---------------------------------------------------------------------------
// Exact oracle. Branches are evaluated with dense 8x8 projector matrices,
// deliberately not reusing the amplitude surgery above.

namespace {

using Matrix8 = std::array<std::array<Complex, 8>, 8>;

StateVector3 apply_matrix(const Matrix8& m, const StateVector3& v) {
  StateVector3 out;
  for (int r = 0; r < 8; ++r) {
    Complex acc{};
    for (int c = 0; c < 8; ++c) {
      acc += m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] *
             v.amplitudes[static_cast<std::size_t>(c)];
    }
    out.amplitudes[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

void add_outer(Matrix8& m, const StateVector3& v) {
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] +=
          v.amplitudes[static_cast<std::size_t>(r)] *
          std::conj(v.amplitudes[static_cast<std::size_t>(c)]);
    }
  }
}

Matrix8 z_projector(int slot, int bit) {
  Matrix8 m{};
  const int mask = 1 << (3 - slot);
  for (int i = 0; i < 8; ++i) {
    if (((i & mask) != 0) == (bit == 1)) {
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    }
  }
  return m;
}

Matrix8 bell_projector(int slot_a, int slot_b, int k) {
  Matrix8 m{};
  const int slot_c = 6 - slot_a - slot_b;
  const BellPattern& bp = kBell[static_cast<std::size_t>(k)];
  for (int x = 0; x < 2; ++x) {
    StateVector3 component;
    component.amplitudes[static_cast<std::size_t>(
        compose_index(slot_a, bp.u0, slot_b, bp.v0, slot_c, x))] = kInvSqrt2;
    component.amplitudes[static_cast<std::size_t>(
        compose_index(slot_a, bp.u1, slot_b, bp.v1, slot_c, x))] =
        bp.sign * kInvSqrt2;
    add_outer(m, component);
  }
  return m;
}

Matrix8 joint_projector(int k) {
  Matrix8 m{};
  add_outer(m, joint_basis()[static_cast<std::size_t>(k)]);
  return m;
}

int outcome_count(const MeasureStep& step) {
  if (std::holds_alternative<ZStep>(step)) return 2;
  if (std::holds_alternative<BellStep>(step)) return 4;
  return 8;
}

Matrix8 step_projector(const MeasureStep& step, int outcome) {
  if (const auto* z = std::get_if<ZStep>(&step)) {
    return z_projector(z->slot, outcome);
  }
  if (const auto* b = std::get_if<BellStep>(&step)) {
    return bell_projector(b->slot_a, b->slot_b, outcome);
  }
  return joint_projector(outcome);
}

void validate_plan(const std::vector<MeasureStep>& plan) {
  bool used[4] = {false, false, false, false};
  auto claim = [&](int slot) {
    TripletRegister::check_slot(slot);
    if (used[slot]) {
      throw std::invalid_argument("measurement plan reuses slot " +
                                  std::to_string(slot));
    }
    used[slot] = true;
  };
  for (const MeasureStep& step : plan) {
    if (const auto* z = std::get_if<ZStep>(&step)) {
      claim(z->slot);
    } else if (const auto* b = std::get_if<BellStep>(&step)) {
      if (b->slot_a == b->slot_b) {
        throw std::invalid_argument("Bell step needs two distinct slots");
      }
      claim(b->slot_a);
      claim(b->slot_b);
    } else {
      claim(1);
      claim(2);
      claim(3);
    }
  }
}

void enumerate(const StateVector3& state, double prob_so_far,
               const std::vector<MeasureStep>& plan, std::size_t depth,
               OutcomeTuple& prefix, Distribution& out) {
  if (depth == plan.size()) {
    out[prefix] += prob_so_far;
    return;
  }
  const MeasureStep& step = plan[depth];
  for (int outcome = 0; outcome < outcome_count(step); ++outcome) {
    const Matrix8 proj = step_projector(step, outcome);
    const StateVector3 projected = apply_matrix(proj, state);
    const double p = projected.norm_sq();
    if (p * prob_so_far < kSupportCutoff) continue;
    StateVector3 next = projected;
    const double scale = 1.0 / std::sqrt(p);
    for (auto& a : next.amplitudes) a *= scale;
    prefix.push_back(outcome);
    enumerate(next, prob_so_far * p, plan, depth + 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

Distribution outcome_distribution(const StateVector3& state,
                                  const std::vector<MeasureStep>& plan) {
  validate_plan(plan);
  if (!state.is_normalized(1e-6)) {
    throw std::invalid_argument("oracle input state is not normalized");
  }
  Distribution out;
  OutcomeTuple prefix;
  enumerate(state, 1.0, plan, 0, prefix, out);

  double total = 0.0;
  for (const auto& [tuple, p] : out) total += p;
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::logic_error("oracle branch probabilities do not sum to 1");
  }
  return out;
}

std::string outcome_label(const std::vector<MeasureStep>& plan,
                          const OutcomeTuple& outcome) {
  if (plan.size() != outcome.size()) {
    throw std::invalid_argument("outcome tuple length does not match plan");
  }
  std::string label;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (i > 0) label += ",";
    if (std::holds_alternative<BellStep>(plan[i])) {
      label += to_string(static_cast<BellOutcome>(outcome[i]));
    } else {
      label += std::to_string(outcome[i]);
    }
  }
  return label;
}

}  // namespace sqss
