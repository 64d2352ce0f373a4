#include "mmwsched/radio_model.hpp"

#include <cmath>
#include <limits>

namespace mmw {

AntennaConfig AntennaConfig::from_beamwidth_deg(double beamwidth_deg,
                                                double mainlobe_gain_dbi,
                                                double sidelobe_gain) {
  AntennaConfig cfg;
  cfg.beam_count = antennas_for_beamwidth(beamwidth_deg);
  cfg.beamwidth_rad = 2.0 * kPi / cfg.beam_count;
  cfg.mainlobe_gain = dbi_to_linear(mainlobe_gain_dbi);
  cfg.sidelobe_gain = sidelobe_gain;
  cfg.validate();
  return cfg;
}

void AntennaConfig::validate() const {
  if (beam_count < 1) throw ConfigError("antenna: beam_count must be positive");
  if (std::abs(beamwidth_rad * beam_count - 2.0 * kPi) > 1e-9 * 2.0 * kPi)
    throw ConfigError("antenna: beamwidth * beam_count must equal 2*pi");
  if (!(sidelobe_gain >= 0.0) || !(sidelobe_gain < mainlobe_gain))
    throw ConfigError("antenna: require 0 <= sidelobe_gain < mainlobe_gain");
}

void RadioParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError(std::string("radio: ") + name + " must be positive");
  };
  positive(bandwidth_hz, "bandwidth_hz");
  positive(tx_power_w, "tx_power_w");
  positive(noise_density_w_per_hz, "noise_density_w_per_hz");
  positive(wavelength_m, "wavelength_m");
  positive(slot_duration_s, "slot_duration_s");
  if (!(path_loss_exponent >= 2.0 && path_loss_exponent <= 6.0))
    throw ConfigError("radio: path_loss_exponent must lie in [2, 6]");
}

double dbi_to_linear(double dbi) { return std::pow(10.0, dbi / 10.0); }

double dbm_per_mhz_to_w_per_hz(double dbm_per_mhz) {
  return std::pow(10.0, dbm_per_mhz / 10.0) * 1e-3 / 1e6;
}

double normalize_angle(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);  // [-pi, pi]
  if (t <= -kPi) t += 2.0 * kPi;
  return t;
}

double flat_top_gain(double theta, const AntennaConfig& cfg) {
  return std::abs(normalize_angle(theta)) <= cfg.beamwidth_rad / 2.0
             ? cfg.mainlobe_gain
             : cfg.sidelobe_gain;
}

double link_rate(double distance_m, const RadioParams& params, double gt,
                 double gr, double interference_w) {
  if (!(distance_m > 0.0))
    throw std::domain_error("link_rate: distance must be positive");
  if (!(interference_w >= 0.0))
    throw std::domain_error("link_rate: interference must be non-negative");
  const double lambda2 = params.wavelength_m * params.wavelength_m;
  const double received = params.tx_power_w * gt * gr * lambda2 /
                          (16.0 * kPi * kPi *
                           std::pow(distance_m, params.path_loss_exponent));
  const double noise =
      params.noise_density_w_per_hz * params.bandwidth_hz + interference_w;
  return params.bandwidth_hz * std::log2(1.0 + received / noise);
}

int slots_required(double payload_bits, double rate_bps,
                   double slot_duration_s) {
  if (rate_bps == 0.0) throw UnreachableLink("slots_required: zero link rate");
  if (!(payload_bits > 0.0) || !(rate_bps > 0.0) || !(slot_duration_s > 0.0))
    throw std::domain_error("slots_required: inputs must be positive");
  const double slots = std::ceil(payload_bits / rate_bps / slot_duration_s);
  if (slots > static_cast<double>(std::numeric_limits<int>::max()))
    throw UnreachableLink("slots_required: slot count overflows");
  return static_cast<int>(slots);
}

int antennas_for_beamwidth(double beamwidth_deg) {
  if (!(beamwidth_deg > 0.0) || beamwidth_deg > 360.0)
    throw ConfigError("beamwidth_deg must lie in (0, 360]");
  const double count = 360.0 / beamwidth_deg;
  const double rounded = std::round(count);
  if (std::abs(count - rounded) > 1e-9 || rounded * beamwidth_deg != 360.0)
    throw ConfigError("beamwidth_deg must divide 360");
  return static_cast<int>(rounded);
}

}  // namespace mmw
