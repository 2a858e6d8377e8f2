#pragma once

#include "fmqkd/jones.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace fmqkd {

/// Model of the two Faraday-mirror Michelson interferometers.
///
/// Alice splits a +45-polarized pulse at her PBS into a short arm (phase
/// modulator PM1, Faraday mirror) and a long arm (delay line, Faraday
/// mirror).  The two orthogonally polarized pulses travel the quantum
/// channel together and recombine at Bob's PBS after passing through his
/// mirrored pair of arms, the short one carrying PM2.  Each arm's
/// birefringence collapses to a single phase thanks to the Faraday-mirror
/// round trip, so the combined state depends only on the arm phases and
/// the two modulator settings.

/// Birefringence phases accumulated in the four interferometer arms.
template <typename Scalar>
struct ArmPhases {
  Scalar theta_sa{0};  // Alice short arm
  Scalar theta_la{0};  // Alice long arm
  Scalar theta_sb{0};  // Bob short arm
  Scalar theta_lb{0};  // Bob long arm

  /// Deviation from the balanced condition theta_sa + theta_lb ==
  /// theta_la + theta_sb.  Zero for a stable setup; a slow drift in the
  /// trunk fiber shows up here.
  Scalar drift() const { return (theta_sa + theta_lb) - (theta_la + theta_sb); }
};

/// One electro-optic phase modulator: phase, drive voltage and half-wave
/// voltage kept consistent (phase = pi * voltage / v_pi).
template <typename Scalar>
class ModulatorSetting {
 public:
  static ModulatorSetting from_phase(Scalar phase, Scalar v_pi) {
    check_v_pi(v_pi);
    return ModulatorSetting(phase, phase * v_pi / std::numbers::pi_v<Scalar>,
                            v_pi);
  }

  static ModulatorSetting from_voltage(Scalar voltage, Scalar v_pi) {
    check_v_pi(v_pi);
    return ModulatorSetting(std::numbers::pi_v<Scalar> * voltage / v_pi,
                            voltage, v_pi);
  }

  Scalar phase() const { return phase_; }
  Scalar voltage() const { return voltage_; }
  Scalar v_pi() const { return v_pi_; }

 private:
  ModulatorSetting(Scalar phase, Scalar voltage, Scalar v_pi)
      : phase_(phase), voltage_(voltage), v_pi_(v_pi) {}

  static void check_v_pi(Scalar v_pi) {
    if (!(v_pi > Scalar(0))) {
      throw std::invalid_argument("ModulatorSetting: v_pi must be positive");
    }
  }

  Scalar phase_;
  Scalar voltage_;
  Scalar v_pi_;
};

/// Linear modulator model: a drive of v_pi volts yields a pi phase shift.
template <typename Scalar>
Scalar voltage_to_phase(Scalar voltage, Scalar v_pi) {
  if (!(v_pi > Scalar(0))) {
    throw std::invalid_argument("voltage_to_phase: v_pi must be positive");
  }
  return std::numbers::pi_v<Scalar> * voltage / v_pi;
}

/// Quantum channel between the interferometers: a unitary birefringence
/// (mis)alignment, the polarization controller that corrects it, and a
/// scalar attenuation.
template <typename Scalar>
struct ChannelModel {
  JonesMatrix<Scalar> misalignment = JonesMatrix<Scalar>::Identity();
  JonesMatrix<Scalar> compensator = JonesMatrix<Scalar>::Identity();
  Scalar loss_db{0};

  static ChannelModel identity(Scalar loss_db = Scalar(0)) {
    return {JonesMatrix<Scalar>::Identity(), JonesMatrix<Scalar>::Identity(),
            loss_db};
  }

  /// Channel whose controller exactly undoes the fiber unitary.
  template <typename Derived>
  static ChannelModel compensated(const Eigen::MatrixBase<Derived>& fiber,
                                  Scalar loss_db = Scalar(0)) {
    return {fiber, fiber.adjoint().eval(), loss_db};
  }

  JonesMatrix<Scalar> jones() const { return compensator * misalignment; }
  Scalar amplitude_factor() const {
    return std::pow(Scalar(10), -loss_db / Scalar(20));
  }
  Scalar transmission() const {
    return std::pow(Scalar(10), -loss_db / Scalar(10));
  }
};

/// Amplitudes of the two pulses leaving Alice's PBS: lambda1 rides |h>,
/// lambda2 rides |v>.
template <typename Scalar>
struct LegAmplitudes {
  std::complex<Scalar> lambda1;
  std::complex<Scalar> lambda2;

  JonesVector<Scalar> as_vector() const { return {lambda1, lambda2}; }
};

/// State of the recombined pulse at Bob's PBS output.
template <typename Scalar>
struct CombinedState {
  JonesVector<Scalar> state;  // normalized, common phase factored out
  Scalar global_phase{0};     // the factored-out (unobservable) phase
  Scalar drift{0};            // arm-phase imbalance at combination time
};

/// Pulse pair leaving Alice's interferometer for a +45 input split 1/sqrt(2)
/// each way: the short arm returns -e^{i(theta_sa + pm1)}/sqrt(2) on |h>,
/// the long arm -e^{i theta_la}/sqrt(2) on |v>.
template <typename Scalar>
LegAmplitudes<Scalar> alice_leg_states(const ArmPhases<Scalar>& arms,
                                       const ModulatorSetting<Scalar>& pm1) {
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  return {-std::polar(r, arms.theta_sa + pm1.phase()),
          -std::polar(r, arms.theta_la)};
}

/// Recombines the two pulses at Bob's PBS.  The arriving |h> pulse rides
/// Bob's long arm and comes back on |v>; the arriving |v> pulse rides the
/// short arm (PM2) and comes back on |h>.  The common phase is factored
/// out so that for a balanced setup the state is exactly
/// (e^{i pm2}, e^{i pm1}) / sqrt(2).
template <typename Scalar>
CombinedState<Scalar> bob_combine(const ArmPhases<Scalar>& arms,
                                  const ModulatorSetting<Scalar>& pm2,
                                  std::complex<Scalar> lambda1,
                                  std::complex<Scalar> lambda2) {
  const std::complex<Scalar> h_amp =
      -std::polar(Scalar(1), arms.theta_sb + pm2.phase()) * lambda2;
  const std::complex<Scalar> v_amp =
      -std::polar(Scalar(1), arms.theta_lb) * lambda1;

  JonesVector<Scalar> combined(h_amp, v_amp);
  const Scalar norm = combined.norm();
  if (norm == Scalar(0)) {
    throw std::invalid_argument("bob_combine: both amplitudes are zero");
  }
  combined /= norm;

  // Audit phase: what remains on the dominant component beyond its own
  // modulator phase.
  const Scalar global_phase =
      std::abs(h_amp) >= std::abs(v_amp)
          ? std::arg(combined(0)) - pm2.phase()
          : std::arg(combined(1));  // theta_sa + theta_lb + pm1, by Eq. above
  combined *= std::polar(Scalar(1), -global_phase);

  return {combined, global_phase, arms.drift()};
}

/// Full Alice -> channel -> Bob pass.  The channel unitaries act on the
/// (|h>, |v>) amplitude pair as one Jones matrix; attenuation scales both
/// amplitudes equally and drops out of the normalized state.
template <typename Scalar>
CombinedState<Scalar> end_to_end(const ArmPhases<Scalar>& arms,
                                 const ModulatorSetting<Scalar>& pm1,
                                 const ModulatorSetting<Scalar>& pm2,
                                 const ChannelModel<Scalar>& channel) {
  const LegAmplitudes<Scalar> legs = alice_leg_states(arms, pm1);
  const JonesVector<Scalar> at_bob =
      channel.amplitude_factor() * (channel.jones() * legs.as_vector());
  return bob_combine(arms, pm2, at_bob(0), at_bob(1));
}

/// BB84 head (half-wave plate at 22.5 degrees, then a PBS): D1 sees the
/// vertical port, D2 the horizontal one.
template <typename Scalar>
struct Bb84Probabilities {
  Scalar d1;
  Scalar d2;
};

template <typename Scalar>
Bb84Probabilities<Scalar> bb84_probs(const CombinedState<Scalar>& c) {
  const JonesVector<Scalar> analyzed =
      half_wave_plate(std::numbers::pi_v<Scalar> / 8) * c.state;
  const auto split = pbs_split(analyzed);
  return {std::norm(split.reflected), std::norm(split.transmitted)};
}

/// B92 head: a single +45 polarizer in front of one detector.
template <typename Scalar>
Scalar b92_prob(const CombinedState<Scalar>& c) {
  return detection_probability(
      c.state, linear_polarizer(std::numbers::pi_v<Scalar> / 4));
}

}  // namespace fmqkd
