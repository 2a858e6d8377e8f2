#pragma once

#include "fmqkd/interferometer.hpp"
#include "fmqkd/photon_sim.hpp"

#include <cstdint>
#include <string>

namespace fmqkd {

/// Everything physical about one link: interferometer arm phases, the two
/// modulators, the channel, the source and the detectors.
struct SystemConfig {
  ArmPhases<double> arms{};
  double v_pi{5.4};          // modulator half-wave voltage, volts
  double pm1_voltage{0.0};
  double pm2_voltage{0.0};
  ChannelModel<double> channel = ChannelModel<double>::identity(17.5);
  SourceConfig source{};
  DetectorConfig detector{};

  ModulatorSetting<double> pm1() const {
    return ModulatorSetting<double>::from_voltage(pm1_voltage, v_pi);
  }
  ModulatorSetting<double> pm2() const {
    return ModulatorSetting<double>::from_voltage(pm2_voltage, v_pi);
  }
  ModulatorSetting<double> pm1_with_phase(double phase) const {
    return ModulatorSetting<double>::from_phase(phase, v_pi);
  }
  ModulatorSetting<double> pm2_with_phase(double phase) const {
    return ModulatorSetting<double>::from_phase(phase, v_pi);
  }

  /// Reference configuration: V_pi = 5.4 V, 1 MHz repetition, 100 ns gates
  /// at 3e-7/ns dark rate, a 50 km x 0.35 dB/km channel, mu = 0.1, and the
  /// detector efficiency calibrated so the maximal count rate lands at
  /// 1750 counts/s.
  static SystemConfig reference();

  /// Canonical one-line key=value description (stable field order and
  /// formatting; feeds the config hash and the CSV headers).
  std::string describe() const;

  /// FNV-1a over describe(); stamped into key files so a key can be tied
  /// back to the exact configuration that produced it.
  std::uint64_t hash() const;
};

/// Detector efficiency that makes the expected maximal click rate equal
/// `target_max_rate` given source, dark probability and channel loss.
double calibrated_efficiency(double target_max_rate, const SourceConfig& src,
                             double dark_prob_per_gate, double loss_db);

}  // namespace fmqkd
