#include "fmqkd/config.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace fmqkd {

namespace {

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

void append_matrix(std::string& s, const char* name,
                   const JonesMatrixd& m) {
  s += ' ';
  s += name;
  s += '=';
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (r != 0 || c != 0) s += ';';
      s += fmt_g(m(r, c).real());
      s += ',';
      s += fmt_g(m(r, c).imag());
    }
  }
}

}  // namespace

SystemConfig SystemConfig::reference() {
  SystemConfig config;
  config.detector.efficiency = calibrated_efficiency(
      1750.0, config.source, config.detector.dark_prob_per_gate(),
      config.channel.loss_db);
  return config;
}

std::string SystemConfig::describe() const {
  std::string s;
  s += "theta_sa=" + fmt_g(arms.theta_sa);
  s += " theta_la=" + fmt_g(arms.theta_la);
  s += " theta_sb=" + fmt_g(arms.theta_sb);
  s += " theta_lb=" + fmt_g(arms.theta_lb);
  s += " v_pi=" + fmt_g(v_pi);
  s += " pm1_v=" + fmt_g(pm1_voltage);
  s += " pm2_v=" + fmt_g(pm2_voltage);
  s += " loss_db=" + fmt_g(channel.loss_db);
  s += " mu=" + fmt_g(source.mean_photon_number);
  s += " rep_rate=" + fmt_g(source.rep_rate);
  s += " efficiency=" + fmt_g(detector.efficiency);
  s += " dark_per_ns=" + fmt_g(detector.dark_rate_per_ns);
  s += " gate_ns=" + fmt_g(detector.gate_width_ns);
  if (!channel.misalignment.isIdentity(0.0)) {
    append_matrix(s, "channel_u", channel.misalignment);
  }
  if (!channel.compensator.isIdentity(0.0)) {
    append_matrix(s, "channel_pc", channel.compensator);
  }
  return s;
}

std::uint64_t SystemConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : describe()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double calibrated_efficiency(double target_max_rate, const SourceConfig& src,
                             double dark_prob_per_gate, double loss_db) {
  if (!(target_max_rate > 0) || !(src.rep_rate > 0) ||
      !(src.mean_photon_number > 0)) {
    throw std::invalid_argument("calibrated_efficiency: invalid parameters");
  }
  const double p_click = target_max_rate / src.rep_rate;
  const double p_signal =
      (p_click - dark_prob_per_gate) / (1.0 - dark_prob_per_gate);
  if (!(p_signal > 0) || !(p_signal < 1)) {
    throw std::invalid_argument(
        "calibrated_efficiency: target rate not reachable");
  }
  const double transmission = std::pow(10.0, -loss_db / 10.0);
  const double efficiency =
      -std::log1p(-p_signal) / (src.mean_photon_number * transmission);
  if (!(efficiency > 0) || efficiency > 1.0) {
    throw std::invalid_argument(
        "calibrated_efficiency: no physical efficiency hits the target");
  }
  return efficiency;
}

}  // namespace fmqkd
