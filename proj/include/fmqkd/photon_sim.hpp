#pragma once

#include "fmqkd/random.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fmqkd {

struct SystemConfig;

/// Faint-pulse source: Poissonian photon number after the attenuator.
struct SourceConfig {
  double mean_photon_number{0.1};  // photons per pulse
  double rep_rate{1e6};            // pulses per second
};

/// Gated single-photon detector.  The dark probability per gate is the
/// dark rate integrated over the gate width.
struct DetectorConfig {
  double efficiency{0.1};
  double dark_rate_per_ns{3e-7};
  double gate_width_ns{100.0};

  double dark_prob_per_gate() const { return dark_rate_per_ns * gate_width_ns; }
};

enum class ClickCause { None, Signal, Dark };

/// Truth for one detector gate pair.
struct GateOutcome {
  bool d1_click{false};
  bool d2_click{false};
  ClickCause d1_cause{ClickCause::None};
  ClickCause d2_cause{ClickCause::None};

  bool any_click() const { return d1_click || d2_click; }
  bool double_click() const { return d1_click && d2_click; }
};

/// Simulates one clock cycle.  Photon number is Poissonian; at least one
/// photon reaches the analyzer with probability 1 - (1 - t*eta)^n; a
/// surviving detection routes to D1 with probability p_d1 and to D2 with
/// p_d2 (anything left over is absorbed, e.g. by the B92 polarizer).
/// Each detector additionally dark-fires independently per gate.
GateOutcome simulate_gate(double p_d1, double p_d2, const SourceConfig& src,
                          const DetectorConfig& det, double transmission,
                          SeedStream& rng);

/// Detector count rates versus modulator voltage.
struct ScanResult {
  std::vector<double> voltages;
  std::vector<double> d1_counts;  // counts per second at each voltage
  std::vector<double> d2_counts;
  double duration_s{0};           // dwell per voltage point
};

/// Scans Bob's modulator voltage with Alice's phase fixed, simulating
/// `gates_per_point` detector gates per voltage through the full
/// interferometer model.
ScanResult run_scan(const std::vector<double>& voltages,
                    double base_phase_alice, const SystemConfig& system,
                    std::uint64_t gates_per_point, std::uint64_t seed);

/// Extinction ratio in dB: 10*log10(max_rate / min_rate).
double extinction_db(double max_rate, double min_rate);

/// Same after subtracting the dark rate from both extrema; the denominator
/// is floored at `floor_rate` (one count per run is the usual choice) so a
/// minimum that fluctuates to the dark level stays finite.
double dark_subtracted_extinction_db(double max_rate, double min_rate,
                                     double dark_rate, double floor_rate);

struct DriftPoint {
  double time_s{0};
  double d1_rate{0};       // counts per second in this bin
  double d2_rate{0};
  double extinction_db{0}; // nominal-max over nominal-min, signed
};

/// Stability run: both modulators held at 0 V while the arm-phase balance
/// drifts at `drift_rate` rad/s.  Per time bin, D2 sits at the nominal
/// maximum and D1 at the nominal minimum, and the extinction ratio is
/// D2 over D1 (so a full pi drift swings it negative).
std::vector<DriftPoint> drift_series(double duration_s, double drift_rate,
                                     const SystemConfig& system,
                                     double bin_s, std::uint64_t seed);

/// CSV emitters used by the CLI; `#`-prefixed header carries config and
/// seed so a file is self-describing and reproducible.
void write_scan_csv(std::ostream& out, const ScanResult& scan,
                    const SystemConfig& system, std::uint64_t seed);
void write_drift_csv(std::ostream& out, const std::vector<DriftPoint>& series,
                     const SystemConfig& system, std::uint64_t seed);

}  // namespace fmqkd
