#include "ccim/doaapp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ccim/random.hpp"

namespace ccim::doa {

namespace {

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

cplx inner(const Snapshot& steer, const Snapshot& x) {
  cplx acc{0.0, 0.0};
  for (int k = 0; k < kVectorLength; ++k) acc += std::conj(steer[k]) * x[k];
  return acc;
}

BeamscanResult pick(std::vector<double> spectrum, std::span<const double> grid) {
  BeamscanResult res;
  res.spectrum = std::move(spectrum);
  const auto it = std::max_element(res.spectrum.begin(), res.spectrum.end());
  res.estimate_index = static_cast<std::size_t>(it - res.spectrum.begin());
  res.estimate_deg = grid[res.estimate_index];
  res.degenerate = *it <= 0.0;
  return res;
}

int round_half_away(double v) { return static_cast<int>(v < 0 ? -std::floor(-v + 0.5) : std::floor(v + 0.5)); }

}  // namespace

DoaScenario normalized(DoaScenario s) {
  if (s.n_antennas != kVectorLength) throw std::invalid_argument("doa: n_antennas must be 8");
  if (s.n_snapshots < 1) throw std::invalid_argument("doa: n_snapshots must be >= 1");
  if (s.angle_grid.empty()) {
    for (int a = -60; a <= 60; ++a) s.angle_grid.push_back(a);
  }
  if (!std::is_sorted(s.angle_grid.begin(), s.angle_grid.end())) {
    throw std::invalid_argument("doa: angle grid must be sorted");
  }
  for (double a : s.angle_grid) {
    if (!(a > -90.0 && a < 90.0)) throw std::invalid_argument("doa: grid angles must be within (-90, 90)");
  }
  if (s.angle_grid.size() > static_cast<std::size_t>(kUnits * kRows)) {
    throw std::invalid_argument("doa: grid larger than the weight memory (512 rows)");
  }
  return s;
}

double field_of_view(const DoaScenario& s) {
  return s.angle_grid.empty() ? 0.0 : s.angle_grid.back() - s.angle_grid.front();
}

Snapshot steering_vector(double angle_deg) {
  Snapshot a;
  const double phase = std::numbers::pi * std::sin(deg2rad(angle_deg));
  for (int k = 0; k < kVectorLength; ++k) a[k] = std::polar(1.0, phase * k);
  return a;
}

Snapshots synth_snapshots(const DoaScenario& scenario) {
  const DoaScenario s = normalized(scenario);
  Snapshots out;
  out.noise_variance = std::isinf(s.snr_db) && s.snr_db > 0 ? 0.0 : std::pow(10.0, -s.snr_db / 10.0);
  std::mt19937_64 gen(s.seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(out.noise_variance / 2.0));
  const Snapshot a = steering_vector(s.source_angle_deg);
  for (int n = 0; n < s.n_snapshots; ++n) {
    const cplx sig = std::polar(1.0, 2.0 * std::numbers::pi * s.signal_frequency * n);
    Snapshot x;
    for (int k = 0; k < kVectorLength; ++k) {
      x[k] = sig * a[k];
      if (out.noise_variance > 0.0) {
        const double re = normal(gen);
        const double im = normal(gen);
        x[k] += cplx(re, im);
      }
    }
    out.signal.push_back(sig);
    out.x.push_back(x);
  }
  return out;
}

Quantized quantize_to_smf(std::span<const cplx> values, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("quantize_to_smf: scale must be positive");
  if (values.size() != kVectorLength) throw std::invalid_argument("quantize_to_smf: need 8 values");
  Quantized q;
  auto one = [&](double v) {
    int code = round_half_away(v * scale);
    if (code > kMaxMag || code < -kMaxMag) {
      ++q.saturations;
      code = std::clamp(code, -kMaxMag, kMaxMag);
    }
    return smf_encode(code);
  };
  for (int k = 0; k < kVectorLength; ++k) {
    q.codes[k] = Complex8{one(values[k].real()), one(values[k].imag())};
  }
  return q;
}

BeamscanResult FloatEngine::beamscan(const DoaScenario& scenario, const Snapshots& snaps) const {
  const std::vector<double>& grid = scenario.angle_grid;
  std::vector<double> spectrum(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const Snapshot a = steering_vector(grid[g]);
    for (const Snapshot& x : snaps.x) spectrum[g] += std::norm(inner(a, x));
    spectrum[g] /= static_cast<double>(snaps.x.size());
  }
  return pick(std::move(spectrum), grid);
}

MacroEngine::MacroEngine(MacroConfig cfg, std::span<const double> grid, std::string label)
    : macro_(std::move(cfg)), grid_(grid.begin(), grid.end()), label_(std::move(label)) {
  if (grid_.size() > static_cast<std::size_t>(kUnits * kRows)) {
    throw std::invalid_argument("doa: grid larger than the weight memory (512 rows)");
  }
  for (std::size_t g = 0; g < grid_.size(); ++g) {
    Snapshot w = steering_vector(grid_[g]);
    for (auto& c : w) c = std::conj(c);
    const Quantized q = quantize_to_smf(w, kMaxMag);
    mem_.write(static_cast<int>(g % kUnits), static_cast<int>(g / kUnits), q.codes);
  }
}

BeamscanResult MacroEngine::beamscan(const DoaScenario& scenario, const Snapshots& snaps) const {
  if (scenario.angle_grid != grid_) throw std::invalid_argument("doa: scenario grid differs from loaded weights");
  double peak = 0.0;
  for (const Snapshot& x : snaps.x) {
    for (const cplx& c : x) peak = std::max({peak, std::abs(c.real()), std::abs(c.imag())});
  }
  const double scale = peak > 0.0 ? kMaxMag / peak : 1.0;
  // Converts code^2 back to the float engine's units.
  const double back = kLsbProductUnits / (kMaxMag * scale);

  std::vector<double> spectrum(grid_.size(), 0.0);
  int saturations = 0;
  std::mt19937_64 noise(derive_seed(scenario.seed, 0xd0a));
  const int groups = static_cast<int>((grid_.size() + kUnits - 1) / kUnits);
  for (const Snapshot& x : snaps.x) {
    const Quantized q = quantize_to_smf(x, scale);
    saturations += q.saturations;
    for (int r = 0; r < groups; ++r) {
      RowSelect rows;
      rows.fill(r);
      const MacroOutput out = macro_.execute(mem_, q.codes, rows, &noise);
      for (int u = 0; u < kUnits; ++u) {
        const std::size_t g = static_cast<std::size_t>(r) * kUnits + u;
        if (g >= grid_.size()) break;
        const double re = out.units[u].re_code * back;
        const double im = out.units[u].im_code * back;
        spectrum[g] += re * re + im * im;
      }
    }
  }
  for (double& v : spectrum) v /= static_cast<double>(snaps.x.size());
  BeamscanResult res = pick(std::move(spectrum), grid_);
  res.input_scale = scale;
  res.saturations = saturations;
  return res;
}

BeamscanResult beamscan_estimate(const DoaScenario& scenario, const Snapshots& snaps, const Engine& engine) {
  return engine.beamscan(normalized(scenario), snaps);
}

RmseReport rmse_experiment(const DoaScenario& scenario, int trials, std::span<const Engine* const> engines) {
  if (trials < 1) throw std::invalid_argument("rmse_experiment: trials must be >= 1");
  RmseReport rep;
  rep.scenario = normalized(scenario);
  rep.trials = trials;
  rep.fov_deg = field_of_view(rep.scenario);
  rep.grid_step_deg = rep.scenario.angle_grid.size() > 1 ? rep.scenario.angle_grid[1] - rep.scenario.angle_grid[0] : 0.0;

  FloatEngine reference;
  std::vector<const Engine*> all{&reference};
  all.insert(all.end(), engines.begin(), engines.end());
  for (const Engine* e : all) rep.engines.push_back(e->name());

  rep.rows.resize(static_cast<std::size_t>(trials));
  std::vector<std::vector<char>> degenerate(static_cast<std::size_t>(trials), std::vector<char>(all.size(), 0));
  parallel_for(rep.rows.size(), [&](std::size_t t) {
    DoaScenario s = rep.scenario;
    s.seed = derive_seed(scenario.seed, t);
    const Snapshots snaps = synth_snapshots(s);
    TrialRow row;
    row.trial = static_cast<int>(t);
    row.true_angle = s.source_angle_deg;
    for (std::size_t e = 0; e < all.size(); ++e) {
      const BeamscanResult r = all[e]->beamscan(s, snaps);
      row.estimates.push_back(r.estimate_deg);
      degenerate[t][e] = r.degenerate;
      if (e > 0) row.input_scale = r.input_scale;
    }
    rep.rows[t] = std::move(row);
  });

  const double one_step = rep.grid_step_deg * 1.0001;
  for (std::size_t e = 0; e < all.size(); ++e) {
    EngineStats st;
    st.name = all[e]->name();
    double sq_f = 0.0, sq_t = 0.0;
    int match = 0, within = 0;
    for (std::size_t t = 0; t < rep.rows.size(); ++t) {
      const TrialRow& row = rep.rows[t];
      const double df = row.estimates[e] - row.estimates[0];
      const double dt = row.estimates[e] - row.true_angle;
      sq_f += df * df;
      sq_t += dt * dt;
      if (row.estimates[e] == row.estimates[0]) ++match;
      if (std::abs(df) <= one_step) ++within;
      if (degenerate[t][e]) ++st.degenerate;
    }
    const double n = static_cast<double>(trials);
    st.rmse_vs_float_deg = std::sqrt(sq_f / n);
    st.rmse_vs_truth_deg = std::sqrt(sq_t / n);
    if (rep.fov_deg > 0) {
      st.rmse_vs_float_pct_fov = 100.0 * st.rmse_vs_float_deg / rep.fov_deg;
      st.rmse_vs_truth_pct_fov = 100.0 * st.rmse_vs_truth_deg / rep.fov_deg;
    }
    st.match_fraction = match / n;
    st.within_step_fraction = within / n;
    rep.stats.push_back(st);
  }
  return rep;
}

}  // namespace ccim::doa
