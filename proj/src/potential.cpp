#include "shocklab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "shocklab/errors.hpp"
#include "shocklab/fourier.hpp"

namespace shocklab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double smoothstep5(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }

}  // namespace

double envelope_value(const Envelope& env, double t) {
  return std::visit(
      overloaded{
          [](const ConstantEnvelope&) { return 1.0; },
          [t](const GaussianEnvelope& g) {
            const double z = (t - g.center) / g.width;
            return std::exp(-0.5 * z * z);
          },
          [t](const CompactBumpEnvelope& b) {
            if (t >= b.cutoff) return 0.0;
            const double start = b.cutoff - b.taper;
            if (t <= start) return 1.0;
            return 1.0 - smoothstep5((t - start) / b.taper);
          },
          [t](const PeriodicEnvelope& p) { return std::cos(kTwoPi * t / p.period); },
      },
      env);
}

PotentialSpec::PotentialSpec() { envelopes_.push_back({"constant", ConstantEnvelope{}}); }

PotentialSpec PotentialSpec::single_mode(int k, double amp_cos, double amp_sin, Envelope env) {
  PotentialSpec spec;
  const auto idx = spec.set_envelope("mode", env);
  spec.add_mode(k, amp_cos, amp_sin, spec.envelopes_[idx].name);
  return spec;
}

std::size_t PotentialSpec::set_envelope(std::string name, Envelope shape) {
  if (name == "constant" && !std::holds_alternative<ConstantEnvelope>(shape))
    throw InvalidArgument("the envelope name 'constant' is reserved");
  if (const auto* b = std::get_if<CompactBumpEnvelope>(&shape); b && !(b->taper > 0.0 && b->taper <= b->cutoff))
    throw InvalidArgument("compact_bump needs 0 < taper <= cutoff");
  if (const auto* g = std::get_if<GaussianEnvelope>(&shape); g && !(g->width > 0.0))
    throw InvalidArgument("gaussian envelope needs width > 0");
  if (const auto* p = std::get_if<PeriodicEnvelope>(&shape); p && !(p->period > 0.0))
    throw InvalidArgument("periodic envelope needs period > 0");
  for (std::size_t i = 0; i < envelopes_.size(); ++i) {
    if (envelopes_[i].name == name) {
      envelopes_[i].shape = shape;
      return i;
    }
  }
  envelopes_.push_back({std::move(name), shape});
  return envelopes_.size() - 1;
}

void PotentialSpec::add_mode(int k, double amp_cos, double amp_sin, std::string_view envelope) {
  if (k < 1) throw InvalidArgument("wavenumber must be a positive integer");
  if (!std::isfinite(amp_cos) || !std::isfinite(amp_sin)) throw InvalidArgument("mode amplitude must be finite");
  modes_.push_back({k, amp_cos, amp_sin, envelope_index(envelope)});
}

std::size_t PotentialSpec::envelope_index(std::string_view name) const {
  for (std::size_t i = 0; i < envelopes_.size(); ++i)
    if (envelopes_[i].name == name) return i;
  throw InvalidArgument("unknown envelope '" + std::string(name) + "'");
}

namespace {

// Envelope values at t, one per registered envelope.
std::vector<double> envelope_values(const PotentialSpec& spec, double t) {
  std::vector<double> g;
  g.reserve(spec.envelopes().size());
  for (const auto& e : spec.envelopes()) g.push_back(envelope_value(e.shape, t));
  return g;
}

struct ModeJet {
  double u = 0.0, uq = 0.0, uqq = 0.0;
};

ModeJet accumulate(const PotentialSpec& spec, double q, double t) {
  ModeJet out;
  if (spec.modes().empty()) return out;
  // Small fixed buffer covers typical specs without allocating per call.
  double local[8];
  std::vector<double> heap;
  const double* g = local;
  if (spec.envelopes().size() <= 8) {
    for (std::size_t i = 0; i < spec.envelopes().size(); ++i) local[i] = envelope_value(spec.envelopes()[i].shape, t);
  } else {
    heap = envelope_values(spec, t);
    g = heap.data();
  }
  for (const auto& m : spec.modes()) {
    const double amp = g[m.envelope];
    if (amp == 0.0) continue;
    const double w = kTwoPi * m.k;
    const double c = std::cos(w * q);
    const double s = std::sin(w * q);
    const double v = amp * (m.cos * c + m.sin * s);
    out.u += v;
    out.uq += amp * w * (m.sin * c - m.cos * s);
    out.uqq -= w * w * v;
  }
  return out;
}

// Combined (cos, sin) amplitude per wavenumber at time t.
std::map<int, std::pair<double, double>> amplitudes_by_k(const PotentialSpec& spec, double t) {
  const auto g = envelope_values(spec, t);
  std::map<int, std::pair<double, double>> by_k;
  for (const auto& m : spec.modes()) {
    auto& a = by_k[m.k];
    a.first += g[m.envelope] * m.cos;
    a.second += g[m.envelope] * m.sin;
  }
  return by_k;
}

}  // namespace

double eval_u(const PotentialSpec& spec, double q, double t) { return accumulate(spec, q, t).u; }

double eval_force(const PotentialSpec& spec, double q, double t) { return accumulate(spec, q, t).uq; }

double eval_u_qq(const PotentialSpec& spec, double q, double t) { return accumulate(spec, q, t).uqq; }

ForceSample sample_force(const PotentialSpec& spec, double q, double t) {
  const auto j = accumulate(spec, q, t);
  return {j.uq, j.uqq};
}

double force_energy(const PotentialSpec& spec, double t) {
  double e = 0.0;
  for (const auto& [k, a] : amplitudes_by_k(spec, t)) {
    const double w = kTwoPi * k;
    e += 0.5 * w * w * (a.first * a.first + a.second * a.second);
  }
  return e;
}

double curvature_bound(const PotentialSpec& spec, double t0, double t1, int samples) {
  if (samples < 2) throw InvalidArgument("curvature_bound needs at least two time samples");
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (samples - 1);
    double sum = 0.0;
    for (const auto& [k, a] : amplitudes_by_k(spec, t)) {
      const double w = kTwoPi * k;
      sum += w * w * std::hypot(a.first, a.second);
    }
    best = std::max(best, sum);
  }
  return best;
}

bool vanishes_after(const PotentialSpec& spec, double cutoff) {
  for (const auto& m : spec.modes()) {
    if (m.cos == 0.0 && m.sin == 0.0) continue;
    const auto* b = std::get_if<CompactBumpEnvelope>(&spec.envelopes()[m.envelope].shape);
    if (b == nullptr || b->cutoff > cutoff) return false;
  }
  return true;
}

bool is_zero(const PotentialSpec& spec) {
  return std::all_of(spec.modes().begin(), spec.modes().end(),
                     [](const PotentialMode& m) { return m.cos == 0.0 && m.sin == 0.0; });
}

}  // namespace shocklab
