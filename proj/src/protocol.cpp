#include "fmqkd/protocol.hpp"

#include "fmqkd/interferometer.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace fmqkd {

namespace {

constexpr double kPhaseTol = 1e-9;

int index_of(double phase, std::span<const double> legal, const char* what) {
  for (std::size_t i = 0; i < legal.size(); ++i) {
    if (std::abs(phase - legal[i]) <= kPhaseTol) return static_cast<int>(i);
  }
  throw std::invalid_argument(std::string("unexpected ") + what + " phase");
}

int bb84_alice_index(double phase) {
  return index_of(phase, kBb84AlicePhases, "BB84 Alice");
}
int bb84_bob_index(double phase) {
  return index_of(phase, kBb84BobPhases, "BB84 Bob");
}
int b92_alice_index(double phase) {
  return index_of(phase, kB92AlicePhases, "B92 Alice");
}
int b92_bob_index(double phase) {
  return index_of(phase, kB92BobPhases, "B92 Bob");
}

Bb84Probabilities<double> bb84_cell(const SystemConfig& system,
                                    double alice_phase, double bob_phase) {
  return bb84_probs(end_to_end(system.arms,
                               system.pm1_with_phase(alice_phase),
                               system.pm2_with_phase(bob_phase),
                               system.channel));
}

double b92_cell(const SystemConfig& system, double alice_phase,
                double bob_phase) {
  return b92_prob(end_to_end(system.arms, system.pm1_with_phase(alice_phase),
                             system.pm2_with_phase(bob_phase),
                             system.channel));
}

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace

SessionResult run_session(Protocol kind, std::uint64_t n_gates,
                          const SystemConfig& system, std::uint64_t seed) {
  if (n_gates < 1) {
    throw std::invalid_argument("run_session: n_gates must be >= 1");
  }

  SeedStream choices(seed, 0);
  SeedStream gates(seed, 1);
  const double transmission = system.channel.transmission();

  SessionResult result;
  result.log.reserve(n_gates);

  if (kind == Protocol::Bb84) {
    // The phase grid is static for the whole session, so the analytic
    // probabilities per (Alice, Bob) cell are computed once.
    std::array<std::array<Bb84Probabilities<double>, 2>, 4> cell;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 2; ++b) {
        cell[a][b] =
            bb84_cell(system, kBb84AlicePhases[a], kBb84BobPhases[b]);
      }
    }
    for (std::uint64_t i = 0; i < n_gates; ++i) {
      const std::uint32_t a = choices.uniform_index(4);
      const std::uint32_t b = choices.uniform_index(2);
      const Bb84Probabilities<double>& p = cell[a][b];
      const GateOutcome outcome = simulate_gate(
          p.d1, p.d2, system.source, system.detector, transmission, gates);
      result.log.push_back(
          {i, kBb84AlicePhases[a], kBb84BobPhases[b], outcome});
    }
    result.key = sift_bb84(result.log);
  } else {
    std::array<std::array<double, 2>, 2> cell;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        cell[a][b] = b92_cell(system, kB92AlicePhases[a], kB92BobPhases[b]);
      }
    }
    for (std::uint64_t i = 0; i < n_gates; ++i) {
      const std::uint32_t a = choices.uniform_index(2);
      const std::uint32_t b = choices.uniform_index(2);
      GateOutcome outcome = simulate_gate(
          cell[a][b], 0.0, system.source, system.detector, transmission, gates);
      // Fig. 1c head has a single detector; there is no D2 here.
      outcome.d2_click = false;
      outcome.d2_cause = ClickCause::None;
      result.log.push_back(
          {i, kB92AlicePhases[a], kB92BobPhases[b], outcome});
    }
    result.key = sift_b92(result.log);
  }

  result.stats = make_stats(result.log, result.key);
  return result;
}

SiftedKey sift_bb84(std::span<const PulseRecord> records) {
  SiftedKey key;
  for (const PulseRecord& r : records) {
    if (!r.outcome.any_click() || r.outcome.double_click()) continue;
    const int a = bb84_alice_index(r.alice_phase);
    const int b = bb84_bob_index(r.bob_phase);
    if ((a & 1) != b) continue;  // bases differ
    key.alice_bits.push_back(static_cast<std::uint8_t>(a >> 1));
    key.bob_bits.push_back(r.outcome.d1_click ? 1 : 0);
    key.source_indices.push_back(r.index);
  }
  return key;
}

SiftedKey sift_b92(std::span<const PulseRecord> records) {
  SiftedKey key;
  for (const PulseRecord& r : records) {
    if (!r.outcome.d1_click) continue;
    const int a = b92_alice_index(r.alice_phase);
    const int b = b92_bob_index(r.bob_phase);
    key.alice_bits.push_back(static_cast<std::uint8_t>(a));
    // A click excludes the orthogonal cell: Bob's 3pi/2 setting reveals a
    // 0, his pi setting reveals a 1.
    key.bob_bits.push_back(b == 1 ? 0 : 1);
    key.source_indices.push_back(r.index);
  }
  return key;
}

double compute_qber(const SiftedKey& key) {
  if (key.size() == 0) {
    throw std::invalid_argument("compute_qber: empty key");
  }
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    errors += key.alice_bits[i] != key.bob_bits[i];
  }
  return static_cast<double>(errors) / static_cast<double>(key.size());
}

SessionStats make_stats(std::span<const PulseRecord> records,
                        const SiftedKey& key) {
  SessionStats stats;
  stats.gates_total = records.size();
  for (const PulseRecord& r : records) {
    stats.clicks_total += r.outcome.any_click();
    stats.double_clicks += r.outcome.double_click();
  }
  stats.sifted_length = key.size();
  stats.sifted_fraction =
      stats.clicks_total == 0
          ? 0.0
          : static_cast<double>(stats.sifted_length) /
                static_cast<double>(stats.clicks_total);
  stats.qber = key.size() == 0 ? 0.0 : compute_qber(key);
  return stats;
}

std::vector<PulseRecord> eve_intercept_resend(
    std::span<const PulseRecord> records, const SystemConfig& system,
    std::uint64_t seed) {
  SeedStream rng(seed);

  // Eve's own measurement is ideal: balanced interferometer, lossless,
  // no dark counts.  Only the routing probabilities matter.
  SystemConfig ideal = system;
  ideal.arms = {};
  ideal.channel = ChannelModel<double>::identity();
  std::array<std::array<double, 2>, 4> eve_d1;
  for (int a = 0; a < 4; ++a) {
    for (int e = 0; e < 2; ++e) {
      eve_d1[a][e] =
          bb84_cell(ideal, kBb84AlicePhases[a], kBb84BobPhases[e]).d1;
    }
  }

  std::array<std::array<Bb84Probabilities<double>, 2>, 4> bob_cell;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 2; ++b) {
      bob_cell[a][b] =
          bb84_cell(system, kBb84AlicePhases[a], kBb84BobPhases[b]);
    }
  }

  const double transmission = system.channel.transmission();
  std::vector<PulseRecord> perturbed;
  perturbed.reserve(records.size());
  for (const PulseRecord& r : records) {
    const int a = bb84_alice_index(r.alice_phase);
    const int b = bb84_bob_index(r.bob_phase);
    const int e = static_cast<int>(rng.uniform_index(2));
    const int eve_bit = rng.bernoulli(eve_d1[a][e]) ? 1 : 0;
    const int resend = e + 2 * eve_bit;  // basis phase plus pi per bit

    const Bb84Probabilities<double>& p = bob_cell[resend][b];
    const GateOutcome outcome = simulate_gate(
        p.d1, p.d2, system.source, system.detector, transmission, rng);
    perturbed.push_back({r.index, r.alice_phase, r.bob_phase, outcome});
  }
  return perturbed;
}

void write_session_csv(std::ostream& out, std::span<const PulseRecord> records,
                       const SiftedKey& key, const SystemConfig& system,
                       std::uint64_t seed) {
  out << "# fmqkd session seed=" << seed << '\n';
  out << "# config " << system.describe() << '\n';
  out << "index,alice_phase,bob_phase,d1,d2,kept,alice_bit,bob_bit\n";
  std::size_t k = 0;
  for (const PulseRecord& r : records) {
    const bool kept = k < key.source_indices.size() &&
                      key.source_indices[k] == r.index;
    out << r.index << ',' << fmt_g(r.alice_phase) << ',' << fmt_g(r.bob_phase)
        << ',' << r.outcome.d1_click << ',' << r.outcome.d2_click << ','
        << kept;
    if (kept) {
      out << ',' << static_cast<int>(key.alice_bits[k]) << ','
          << static_cast<int>(key.bob_bits[k]);
      ++k;
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

void write_key_hex(std::ostream& out, const SiftedKey& key,
                   const SystemConfig& system, std::uint64_t seed) {
  char header[96];
  std::snprintf(header, sizeof(header), "# seed=%llu config=%016llx bits=%zu",
                static_cast<unsigned long long>(seed),
                static_cast<unsigned long long>(system.hash()), key.size());
  out << header << '\n';

  static const char* hex = "0123456789abcdef";
  std::uint8_t byte = 0;
  int filled = 0;
  std::string line;
  for (std::uint8_t bit : key.alice_bits) {
    byte = static_cast<std::uint8_t>((byte << 1) | (bit & 1));
    if (++filled == 8) {
      line += hex[byte >> 4];
      line += hex[byte & 0xf];
      byte = 0;
      filled = 0;
    }
  }
  if (filled > 0) {  // zero-pad the trailing partial byte
    byte = static_cast<std::uint8_t>(byte << (8 - filled));
    line += hex[byte >> 4];
    line += hex[byte & 0xf];
  }
  out << line << '\n';
}

std::string stats_to_json(const SessionStats& stats, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["gates_total"] = stats.gates_total;
  j["clicks_total"] = stats.clicks_total;
  j["double_clicks"] = stats.double_clicks;
  j["sifted_length"] = stats.sifted_length;
  j["sifted_fraction"] = stats.sifted_fraction;
  j["qber"] = stats.qber;
  j["seed"] = seed;
  return j.dump(2);
}

}  // namespace fmqkd
