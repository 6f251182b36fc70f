#include "ccim/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ccim/random.hpp"

namespace ccim::metrology {

namespace {

constexpr std::int64_t kTrialBlock = 4096;

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

std::vector<double> residuals(const std::vector<double>& x, const std::vector<double>& y, Line l) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = y[i] - (l.slope * x[i] + l.intercept);
  return r;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

std::size_t argmax_abs(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  return best;
}

Smf8 random_smf(std::mt19937_64& gen) {
  return Smf8::from_raw(static_cast<std::uint8_t>(gen() & 0xffu));
}

}  // namespace

SweepResult transfer_sweep(const Macro& macro, const SweepOptions& opts) {
  if (opts.repeats < 1) throw std::invalid_argument("transfer_sweep: repeats must be >= 1");
  const double noise_std = macro.config().adc.comparator_noise_std;
  std::mt19937_64 noise(opts.noise_seed);
  ComplexVector weights;
  weights.fill(complex_encode(-kMaxMag, -kMaxMag));

  SweepResult res;
  std::vector<double> xs, codes, analog;
  for (int x = -kMaxMag; x <= kMaxMag; ++x) {
    ComplexVector input;
    input.fill(complex_encode(x, -x));
    SweepPoint pt;
    pt.x = x;
    // Noise-free conversions are deterministic, so one repeat suffices.
    const int reps = noise_std > 0.0 ? opts.repeats : 1;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
      const UnitTrace t = macro.compute(opts.unit, input, weights, noise_std > 0.0 ? &noise : nullptr);
      sum += t.re.code;
      if (r == 0) pt.analog_value = t.re.dcim + t.re.referred;
    }
    pt.mean_code = sum / reps;
    pt.ideal_code = oracle_reference(input, weights, macro.config().partition).re_code;
    pt.true_value = static_cast<double>(full_precision_reference(input, weights).first) /
                    static_cast<double>(kLsbProductUnits);
    res.points.push_back(pt);
    xs.push_back(x);
    codes.push_back(pt.mean_code);
    analog.push_back(pt.analog_value);
  }

  const Line fit = least_squares(xs, codes);
  res.gain = fit.slope;
  res.offset = fit.intercept;
  res.inl = residuals(xs, codes, fit);
  const Line endpoints{(codes.back() - codes.front()) / (xs.back() - xs.front()),
                       codes.front() - xs.front() * (codes.back() - codes.front()) / (xs.back() - xs.front())};
  res.inl_endpoint = residuals(xs, codes, endpoints);
  res.analog_inl = residuals(xs, analog, least_squares(xs, analog));
  for (const SweepPoint& p : res.points) res.error_vs_ideal.push_back(p.mean_code - p.true_value);
  res.max_abs_inl = max_abs(res.inl);
  res.max_abs_inl_endpoint = max_abs(res.inl_endpoint);
  res.max_abs_error_vs_ideal = max_abs(res.error_vs_ideal);
  res.max_abs_analog_inl = max_abs(res.analog_inl);
  return res;
}

RmsReport rms_error(const Macro& macro, std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("rms_error: trials must be >= 1");
  const std::int64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
  struct Partial {
    std::int64_t sum_sq = 0;
    std::int64_t max_abs = 0;
  };
  std::vector<Partial> partial(static_cast<std::size_t>(blocks));
  parallel_for(partial.size(), [&](std::size_t b) {
    std::mt19937_64 gen(derive_seed(seed, b));
    const std::int64_t begin = static_cast<std::int64_t>(b) * kTrialBlock;
    const std::int64_t end = std::min(trials, begin + kTrialBlock);
    Partial acc;
    for (std::int64_t t = begin; t < end; ++t) {
      ComplexVector x, w;
      for (auto& c : x) c = Complex8{random_smf(gen), random_smf(gen)};
      for (auto& c : w) c = Complex8{random_smf(gen), random_smf(gen)};
      const UnitTrace tr = macro.compute(static_cast<int>(t % kUnits), x, w, &gen);
      const auto [re, im] = full_precision_reference(x, w);
      const std::int64_t er = tr.re.code * kLsbProductUnits - re;
      const std::int64_t ei = tr.im.code * kLsbProductUnits - im;
      acc.sum_sq += er * er + ei * ei;
      acc.max_abs = std::max({acc.max_abs, er < 0 ? -er : er, ei < 0 ? -ei : ei});
    }
    partial[b] = acc;
  });

  RmsReport rep;
  rep.trials = trials;
  rep.samples = 2 * trials;
  rep.seed = seed;
  for (const Partial& p : partial) {
    rep.sum_sq_error += p.sum_sq;
    rep.max_abs_error = std::max(rep.max_abs_error, p.max_abs);
  }
  const double rms = std::sqrt(static_cast<double>(rep.sum_sq_error) / static_cast<double>(rep.samples));
  rep.rms_lsb = rms / static_cast<double>(kLsbProductUnits);
  rep.rms_pct_fs = 100.0 * rms / static_cast<double>(kFullScale);
  rep.rms_pct_range = rep.rms_pct_fs / 2.0;
  return rep;
}

RmsReport rms_error(const MacroConfig& cfg, std::int64_t trials, std::uint64_t seed) {
  return rms_error(Macro(cfg), trials, seed);
}

Distribution summarize(std::vector<double> values) {
  Distribution d;
  if (values.empty()) return d;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(values.size() - 1, lo + 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  d.median = quantile(0.5);
  d.p05 = quantile(0.05);
  d.p95 = quantile(0.95);
  double sum = 0.0;
  for (double v : values) sum += v;
  d.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - d.mean) * (v - d.mean);
    const double sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
    // Asymptotic standard error of the median for a near-normal sample.
    d.stderr_median = 1.2533 * sd / std::sqrt(static_cast<double>(values.size()));
  }
  return d;
}

MismatchCurve mismatch_sweep(const MacroConfig& base, const std::vector<double>& sigma_list,
                             int seeds_per_point, std::int64_t trials_per_seed, std::uint64_t seed) {
  if (sigma_list.empty()) throw std::invalid_argument("mismatch_sweep: sigma list is empty");
  if (seeds_per_point < 1) throw std::invalid_argument("mismatch_sweep: seeds_per_point must be >= 1");
  MismatchCurve curve;
  curve.seeds_per_point = seeds_per_point;
  curve.trials_per_seed = trials_per_seed;
  curve.seed = seed;
  for (double sigma : sigma_list) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("mismatch_sweep: sigma must be >= 0");
    MismatchPoint pt;
    pt.sigma_u = sigma;
    pt.per_seed.resize(static_cast<std::size_t>(seeds_per_point));
    for (int s = 0; s < seeds_per_point; ++s) {
      MacroConfig cfg = base;
      cfg.analog.sigma_u = sigma;
      cfg.mismatch_seed = derive_seed(seed, 2 * static_cast<std::uint64_t>(s));
      const RmsReport rep = rms_error(cfg, trials_per_seed, derive_seed(seed, 2 * static_cast<std::uint64_t>(s) + 1));
      pt.per_seed[static_cast<std::size_t>(s)] = rep.rms_pct_fs;
    }
    pt.rms = summarize(pt.per_seed);
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

bool medians_non_decreasing(const MismatchCurve& curve, double k) {
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const Distribution& a = curve.points[i - 1].rms;
    const Distribution& b = curve.points[i].rms;
    const double tol = k * std::hypot(a.stderr_median, b.stderr_median);
    if (b.median < a.median - tol) return false;
  }
  return true;
}

ZeroCrossingReport zero_crossing_inl(const MacroConfig& base, int seeds, std::uint64_t seed,
                                     const SweepOptions& opts, int window) {
  ZeroCrossingReport rep;
  rep.window = window;
  const int runs = base.ideal() ? 1 : seeds;
  for (int s = 0; s < runs; ++s) {
    MacroConfig cfg = base;
    if (!base.ideal()) cfg.mismatch_seed = derive_seed(seed, static_cast<std::uint64_t>(s));
    const SweepResult sw = transfer_sweep(Macro(cfg), opts);
    ZeroCrossingEntry e;
    e.mismatch_seed = cfg.mismatch_seed;
    e.max_abs_analog_inl = sw.max_abs_analog_inl;
    e.max_abs_inl = sw.max_abs_inl;
    e.code_argmax = sw.points[argmax_abs(sw.inl)].x;
    // A linear analog transfer has no meaningful INL peak.
    if (sw.max_abs_analog_inl > 1e-9) e.analog_argmax = sw.points[argmax_abs(sw.analog_inl)].x;
    if (e.analog_argmax) {
      ++rep.analog_defined;
      if (std::abs(*e.analog_argmax) <= window) ++rep.analog_near_zero;
    }
    if (std::abs(e.code_argmax) <= window) ++rep.code_near_zero;
    rep.entries.push_back(e);
  }
  if (rep.analog_defined > 0) rep.analog_fraction = static_cast<double>(rep.analog_near_zero) / rep.analog_defined;
  if (!rep.entries.empty()) rep.code_fraction = static_cast<double>(rep.code_near_zero) / rep.entries.size();
  return rep;
}

AdcCharacterization adc_characterization(double sigma_u, int lsb_units, int seeds, std::uint64_t seed,
                                         const adc::AdcConfig& cfg) {
  if (seeds < 1) throw std::invalid_argument("adc_characterization: seeds must be >= 1");
  AdcCharacterization out;
  out.sigma_u = sigma_u;
  out.lsb_units = lsb_units;
  adc::AdcConfig quiet = cfg;
  quiet.comparator_noise_std = 0.0;

  std::vector<adc::Linearity> lin(static_cast<std::size_t>(seeds));
  std::vector<char> mono(static_cast<std::size_t>(seeds));
  parallel_for(lin.size(), [&](std::size_t s) {
    const adc::CdacInstance cdac = adc::sample_cdac(sigma_u, lsb_units, derive_seed(seed, s));
    const adc::Transitions t = adc::transition_levels(cdac, quiet);
    mono[s] = t.monotonic;
    lin[s] = adc::dnl_inl(t);
  });
  for (std::size_t s = 0; s < lin.size(); ++s) {
    out.dnl_rms.push_back(lin[s].dnl_rms);
    out.dnl_max.push_back(lin[s].dnl_max);
    out.inl_max.push_back(lin[s].inl_max);
    if (!mono[s]) ++out.non_monotonic;
  }
  out.dnl_rms_dist = summarize(out.dnl_rms);
  out.dnl_max_dist = summarize(out.dnl_max);
  out.inl_max_dist = summarize(out.inl_max);

  const std::size_t n_codes = lin.front().dnl.size();
  for (std::size_t c = 0; c < n_codes; ++c) {
    double sum = 0.0, sq = 0.0;
    for (const auto& l : lin) sum += l.dnl[c];
    const double mean = sum / static_cast<double>(lin.size());
    for (const auto& l : lin) sq += (l.dnl[c] - mean) * (l.dnl[c] - mean);
    const double sd = lin.size() > 1 ? std::sqrt(sq / static_cast<double>(lin.size() - 1)) : 0.0;
    out.worst_code_dnl_sigma = std::max(out.worst_code_dnl_sigma, sd);
  }
  return out;
}

}  // namespace ccim::metrology
