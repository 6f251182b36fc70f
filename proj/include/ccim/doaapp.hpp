#pragma once

// Direction-of-arrival demo: beamscan over an 8-element half-wavelength
// uniform linear array, with every steering inner product computed either in
// double precision or on the simulated macro.

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccim/cmacro.hpp"

namespace ccim::doa {

using cplx = std::complex<double>;
using Snapshot = std::array<cplx, kVectorLength>;

struct DoaScenario {
  int n_antennas = kVectorLength;
  double source_angle_deg = 20.0;
  double snr_db = 20.0;              // +inf for noiseless
  int n_snapshots = 32;
  std::vector<double> angle_grid;    // degrees, ascending; empty = -60..60 step 1
  double signal_frequency = 0.1234;  // cycles per snapshot of the source tone
  std::uint64_t seed = 1;
};

/// Fills the default grid and checks the invariants; throws std::invalid_argument.
DoaScenario normalized(DoaScenario s);
double field_of_view(const DoaScenario& s);

/// a_k(theta) = exp(j pi k sin theta).
Snapshot steering_vector(double angle_deg);

struct Snapshots {
  std::vector<Snapshot> x;
  std::vector<cplx> signal;  // source waveform, independent of the seed
  double noise_variance = 0.0;
};

Snapshots synth_snapshots(const DoaScenario& scenario);

struct Quantized {
  ComplexVector codes{};
  int saturations = 0;  // components clipped to +/-127
};

/// Rounds value * scale half away from zero and saturates to [-127, 127].
Quantized quantize_to_smf(std::span<const cplx> values, double scale);

struct BeamscanResult {
  double estimate_deg = 0.0;
  std::size_t estimate_index = 0;
  std::vector<double> spectrum;
  bool degenerate = false;   // all-zero spectrum
  double input_scale = 1.0;  // snapshot scale used by the macro engine
  int saturations = 0;
};

class Engine {
 public:
  virtual ~Engine() = default;
  virtual std::string name() const = 0;
  virtual BeamscanResult beamscan(const DoaScenario& scenario, const Snapshots& snaps) const = 0;
};

class FloatEngine final : public Engine {
 public:
  std::string name() const override { return "float"; }
  BeamscanResult beamscan(const DoaScenario& scenario, const Snapshots& snaps) const override;
};

/// Loads conj(steering) * 127 for grid point g into unit g % 8, row g / 8.
class MacroEngine final : public Engine {
 public:
  MacroEngine(MacroConfig cfg, std::span<const double> grid, std::string label = "macro");
  std::string name() const override { return label_; }
  BeamscanResult beamscan(const DoaScenario& scenario, const Snapshots& snaps) const override;
  const Macro& macro() const { return macro_; }
  const WeightMemory& memory() const { return mem_; }

 private:
  Macro macro_;
  WeightMemory mem_;
  std::vector<double> grid_;
  std::string label_;
};

BeamscanResult beamscan_estimate(const DoaScenario& scenario, const Snapshots& snaps, const Engine& engine);

struct EngineStats {
  std::string name;
  double rmse_vs_float_deg = 0.0;
  double rmse_vs_truth_deg = 0.0;
  double rmse_vs_float_pct_fov = 0.0;
  double rmse_vs_truth_pct_fov = 0.0;
  double match_fraction = 0.0;       // identical grid estimate to the float engine
  double within_step_fraction = 0.0; // within one grid step of the float engine
  int degenerate = 0;
};

struct TrialRow {
  int trial = 0;
  double true_angle = 0.0;
  std::vector<double> estimates;  // float engine first, then each macro engine
  double input_scale = 1.0;
};

struct RmseReport {
  DoaScenario scenario;
  int trials = 0;
  double fov_deg = 0.0;
  double grid_step_deg = 0.0;
  std::vector<std::string> engines;
  std::vector<TrialRow> rows;
  std::vector<EngineStats> stats;  // float engine first
};

/// Every engine sees the same snapshots in a trial. Trial t uses seed
/// derive_seed(scenario.seed, t).
RmseReport rmse_experiment(const DoaScenario& scenario, int trials, std::span<const Engine* const> engines);

}  // namespace ccim::doa
