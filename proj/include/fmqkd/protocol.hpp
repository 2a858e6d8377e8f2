#pragma once

#include "fmqkd/config.hpp"
#include "fmqkd/photon_sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fmqkd {

enum class Protocol { Bb84, B92 };

/// Legal modulator phases per protocol.  BB84: Alice draws from all four,
/// Bob's two values pick his measurement basis.  B92: Alice's two phases
/// encode the bit, Bob's two phases pick which bit a click reveals.
inline constexpr double kBb84AlicePhases[4] = {0.0, 1.5707963267948966,
                                               3.141592653589793,
                                               4.71238898038469};
inline constexpr double kBb84BobPhases[2] = {0.0, 1.5707963267948966};
inline constexpr double kB92AlicePhases[2] = {0.0, 1.5707963267948966};
inline constexpr double kB92BobPhases[2] = {3.141592653589793,
                                            4.71238898038469};

/// One clock cycle of a session.
struct PulseRecord {
  std::uint64_t index{0};
  double alice_phase{0};
  double bob_phase{0};
  GateOutcome outcome{};
};

struct SiftedKey {
  std::vector<std::uint8_t> alice_bits;
  std::vector<std::uint8_t> bob_bits;
  std::vector<std::uint64_t> source_indices;

  std::size_t size() const { return alice_bits.size(); }
};

struct SessionStats {
  std::uint64_t gates_total{0};
  std::uint64_t clicks_total{0};   // gates with at least one click
  std::uint64_t double_clicks{0};
  std::uint64_t sifted_length{0};
  double sifted_fraction{0};       // sifted / clicked
  double qber{0};
};

struct SessionResult {
  SiftedKey key;
  SessionStats stats;
  std::vector<PulseRecord> log;
};

/// Runs a full session: uniform random phase choices per gate, gate-level
/// Monte Carlo through the interferometer + detector model, then sifting.
///
/// Bit conventions (fixed project-wide):
///   BB84  Alice: 0 for phase in {0, pi/2}, 1 for {pi, 3pi/2}.
///         Bob:   0 on a D2 click, 1 on a D1 click.
///   B92   Alice: 0 for phase 0, 1 for pi/2.
///         Bob:   a click with phase 3pi/2 infers 0, with pi infers 1.
SessionResult run_session(Protocol kind, std::uint64_t n_gates,
                          const SystemConfig& system, std::uint64_t seed);

/// Keeps single-click gates whose bases match ((alice_phase mod pi) ==
/// bob_phase); double clicks are dropped and only counted in the stats.
SiftedKey sift_bb84(std::span<const PulseRecord> records);

/// Keeps clicked gates; every B92 click is conclusive.
SiftedKey sift_b92(std::span<const PulseRecord> records);

/// Disagreement fraction of the sifted key.
double compute_qber(const SiftedKey& key);

/// Aggregate counters for a record log and its sifted key.
SessionStats make_stats(std::span<const PulseRecord> records,
                        const SiftedKey& key);

/// Intercept-resend adversary on a BB84 record log: Eve measures each
/// pulse in a random basis with an ideal apparatus, resends the state she
/// saw, and Bob's outcomes are re-simulated.  Alice/Bob phase fields are
/// left untouched so downstream sifting works as usual.
std::vector<PulseRecord> eve_intercept_resend(
    std::span<const PulseRecord> records, const SystemConfig& system,
    std::uint64_t seed);

/// Session log as CSV: index, phases, clicks, sift decision and bits.
void write_session_csv(std::ostream& out, std::span<const PulseRecord> records,
                       const SiftedKey& key, const SystemConfig& system,
                       std::uint64_t seed);

/// Key material as lowercase hex (Alice's bits, MSB-first per byte) under
/// a header carrying seed, config hash and bit count.
void write_key_hex(std::ostream& out, const SiftedKey& key,
                   const SystemConfig& system, std::uint64_t seed);

/// Session statistics as a JSON object with fixed field names.
std::string stats_to_json(const SessionStats& stats, std::uint64_t seed);

}  // namespace fmqkd
