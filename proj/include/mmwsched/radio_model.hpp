#pragma once

#include <stdexcept>
#include <string>

namespace mmw {

/// Raised for invalid or inconsistent configuration values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a link cannot carry any data (zero achievable rate).
class UnreachableLink : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;

/// Ideal flat-top directional antenna: constant gain inside the beam,
/// constant (small) gain outside it. Gains are linear power ratios.
struct AntennaConfig {
  int beam_count = 18;
  double beamwidth_rad = 2.0 * kPi / 18.0;
  double mainlobe_gain = 15.848931924611133;  // 12 dBi
  double sidelobe_gain = 0.0;

  /// Builds a configuration with `360 / beamwidth_deg` beams.
  static AntennaConfig from_beamwidth_deg(double beamwidth_deg,
                                          double mainlobe_gain_dbi = 12.0,
                                          double sidelobe_gain = 0.0);

  double beamwidth_deg() const { return beamwidth_rad * 180.0 / kPi; }
  void validate() const;
};

struct RadioParams {
  double bandwidth_hz = 7e9;
  double tx_power_w = 1e-4;
  double noise_density_w_per_hz = 3.981071705534973e-23;  // -134 dBm/MHz
  double path_loss_exponent = 3.0;
  double wavelength_m = kSpeedOfLight / 60e9;
  double slot_duration_s = 65.536e-6;

  void validate() const;
};

double dbi_to_linear(double dbi);

/// Converts a noise density in dBm/MHz to W/Hz.
double dbm_per_mhz_to_w_per_hz(double dbm_per_mhz);

/// Wraps an angle into (-pi, pi].
double normalize_angle(double theta);

/// Antenna gain at angle `theta` off boresight. The beam edge
/// |theta| == beamwidth/2 counts as inside the mainlobe.
double flat_top_gain(double theta, const AntennaConfig& cfg);

/// Shannon rate in bit/s over a Friis path of `distance_m` metres, with
/// total noise N0*W plus `interference_w`.
double link_rate(double distance_m, const RadioParams& params, double gt,
                 double gr, double interference_w = 0.0);

/// Number of whole slots needed to carry `payload_bits` at `rate_bps`.
int slots_required(double payload_bits, double rate_bps,
                   double slot_duration_s);

/// Number of antennas (beams) needed to cover 360 degrees.
int antennas_for_beamwidth(double beamwidth_deg);

}  // namespace mmw
