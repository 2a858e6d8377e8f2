#include "fmqkd/photon_sim.hpp"

#include "fmqkd/config.hpp"
#include "fmqkd/interferometer.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace fmqkd {

namespace {

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0 + 1e-9; }

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

double survival_probability(double arrival, std::uint64_t n) {
  switch (n) {
    case 0:
      return 0.0;
    case 1:
      return arrival;
    case 2:
      return arrival * (2.0 - arrival);
    default:
      return 1.0 - std::pow(1.0 - arrival, static_cast<double>(n));
  }
}

}  // namespace

GateOutcome simulate_gate(double p_d1, double p_d2, const SourceConfig& src,
                          const DetectorConfig& det, double transmission,
                          SeedStream& rng) {
  if (!valid_probability(p_d1) || !valid_probability(p_d2) ||
      !(p_d1 + p_d2 <= 1.0 + 1e-9) || !valid_probability(transmission)) {
    throw std::invalid_argument("simulate_gate: invalid probabilities");
  }

  GateOutcome outcome;

  const std::uint64_t n = rng.poisson(src.mean_photon_number);
  const double arrival = transmission * det.efficiency;
  if (n > 0 && rng.bernoulli(survival_probability(arrival, n))) {
    // One detection event; anything beyond p_d1 + p_d2 is absorbed in the
    // analyzer.  A sum a hair over 1 is numerical noise, squeeze it back.
    const double scale = std::max(1.0, p_d1 + p_d2);
    const double r = rng.uniform01() * scale;
    if (r < p_d1) {
      outcome.d1_click = true;
      outcome.d1_cause = ClickCause::Signal;
    } else if (r < p_d1 + p_d2) {
      outcome.d2_click = true;
      outcome.d2_cause = ClickCause::Signal;
    }
  }

  const double dark = det.dark_prob_per_gate();
  if (rng.bernoulli(dark) && !outcome.d1_click) {
    outcome.d1_click = true;
    outcome.d1_cause = ClickCause::Dark;
  }
  if (rng.bernoulli(dark) && !outcome.d2_click) {
    outcome.d2_click = true;
    outcome.d2_cause = ClickCause::Dark;
  }
  return outcome;
}

ScanResult run_scan(const std::vector<double>& voltages,
                    double base_phase_alice, const SystemConfig& system,
                    std::uint64_t gates_per_point, std::uint64_t seed) {
  if (gates_per_point < 1) {
    throw std::invalid_argument("run_scan: gates_per_point must be >= 1");
  }

  ScanResult result;
  result.voltages = voltages;
  result.duration_s = static_cast<double>(gates_per_point) / system.source.rep_rate;

  const ModulatorSetting<double> pm1 =
      system.pm1_with_phase(base_phase_alice);
  const double transmission = system.channel.transmission();

  for (std::size_t i = 0; i < voltages.size(); ++i) {
    const ModulatorSetting<double> pm2 =
        ModulatorSetting<double>::from_voltage(voltages[i], system.v_pi);
    const Bb84Probabilities<double> probs =
        bb84_probs(end_to_end(system.arms, pm1, pm2, system.channel));

    SeedStream rng(seed, i);
    std::uint64_t d1 = 0;
    std::uint64_t d2 = 0;
    for (std::uint64_t g = 0; g < gates_per_point; ++g) {
      const GateOutcome outcome = simulate_gate(
          probs.d1, probs.d2, system.source, system.detector, transmission, rng);
      d1 += outcome.d1_click;
      d2 += outcome.d2_click;
    }
    result.d1_counts.push_back(static_cast<double>(d1) / result.duration_s);
    result.d2_counts.push_back(static_cast<double>(d2) / result.duration_s);
  }
  return result;
}

double extinction_db(double max_rate, double min_rate) {
  if (!(min_rate > 0)) {
    throw std::invalid_argument("extinction_db: min_rate must be positive");
  }
  if (!(max_rate > 0)) {
    throw std::invalid_argument("extinction_db: max_rate must be positive");
  }
  return 10.0 * std::log10(max_rate / min_rate);
}

double dark_subtracted_extinction_db(double max_rate, double min_rate,
                                     double dark_rate, double floor_rate) {
  if (!(floor_rate > 0)) {
    throw std::invalid_argument(
        "dark_subtracted_extinction_db: floor_rate must be positive");
  }
  const double numerator = max_rate - dark_rate;
  if (!(numerator > 0)) {
    throw std::invalid_argument(
        "dark_subtracted_extinction_db: maximum does not clear the dark rate");
  }
  const double denominator = std::max(min_rate - dark_rate, floor_rate);
  return 10.0 * std::log10(numerator / denominator);
}

std::vector<DriftPoint> drift_series(double duration_s, double drift_rate,
                                     const SystemConfig& system,
                                     double bin_s, std::uint64_t seed) {
  if (!(duration_s > 0) || !(bin_s > 0)) {
    throw std::invalid_argument("drift_series: durations must be positive");
  }

  const std::uint64_t n_bins =
      static_cast<std::uint64_t>(std::ceil(duration_s / bin_s));
  const std::uint64_t gates_per_bin = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(bin_s * system.source.rep_rate)));
  const double transmission = system.channel.transmission();

  std::vector<DriftPoint> series;
  series.reserve(n_bins);
  for (std::uint64_t bin = 0; bin < n_bins; ++bin) {
    const double t_mid = (static_cast<double>(bin) + 0.5) * bin_s;

    SystemConfig drifted = system;
    drifted.arms.theta_sa += drift_rate * t_mid;
    const Bb84Probabilities<double> probs = bb84_probs(end_to_end(
        drifted.arms, drifted.pm1(), drifted.pm2(), drifted.channel));

    SeedStream rng(seed, bin);
    std::uint64_t d1 = 0;
    std::uint64_t d2 = 0;
    for (std::uint64_t g = 0; g < gates_per_bin; ++g) {
      const GateOutcome outcome = simulate_gate(
          probs.d1, probs.d2, system.source, system.detector, transmission, rng);
      d1 += outcome.d1_click;
      d2 += outcome.d2_click;
    }

    // Rates from counts floored at one count so the ratio stays finite.
    DriftPoint point;
    point.time_s = t_mid;
    point.d1_rate = static_cast<double>(d1) / bin_s;
    point.d2_rate = static_cast<double>(d2) / bin_s;
    const double floor = 1.0 / bin_s;
    point.extinction_db = extinction_db(std::max(point.d2_rate, floor),
                                        std::max(point.d1_rate, floor));
    series.push_back(point);
  }
  return series;
}

void write_scan_csv(std::ostream& out, const ScanResult& scan,
                    const SystemConfig& system, std::uint64_t seed) {
  out << "# fmqkd scan seed=" << seed << " dwell_s=" << fmt_g(scan.duration_s)
      << '\n';
  out << "# config " << system.describe() << '\n';
  out << "voltage,d1_counts,d2_counts\n";
  for (std::size_t i = 0; i < scan.voltages.size(); ++i) {
    out << fmt_g(scan.voltages[i]) << ',' << fmt_g(scan.d1_counts[i]) << ','
        << fmt_g(scan.d2_counts[i]) << '\n';
  }
}

void write_drift_csv(std::ostream& out, const std::vector<DriftPoint>& series,
                     const SystemConfig& system, std::uint64_t seed) {
  out << "# fmqkd extinction seed=" << seed << '\n';
  out << "# config " << system.describe() << '\n';
  out << "time_s,d1_counts,d2_counts,extinction_db\n";
  for (const DriftPoint& p : series) {
    out << fmt_g(p.time_s) << ',' << fmt_g(p.d1_rate) << ','
        << fmt_g(p.d2_rate) << ',' << fmt_g(p.extinction_db) << '\n';
  }
}

}  // namespace fmqkd
