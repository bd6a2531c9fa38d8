#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace shocklab {

struct ConstantEnvelope {};

/// exp(-(t - center)^2 / (2 width^2))
struct GaussianEnvelope {
  double center = 0.0;
  double width = 1.0;
};

/// Equal to 1 for t <= cutoff - taper, 0 for t >= cutoff, joined by the quintic
/// smoothstep so the envelope is C^2. The value 1 extends to negative times.
struct CompactBumpEnvelope {
  double cutoff = 1.0;
  double taper = 0.25;
};

/// cos(2 pi t / period)
struct PeriodicEnvelope {
  double period = 1.0;
};

using Envelope = std::variant<ConstantEnvelope, GaussianEnvelope, CompactBumpEnvelope, PeriodicEnvelope>;

[[nodiscard]] double envelope_value(const Envelope& env, double t);

struct NamedEnvelope {
  std::string name;
  Envelope shape;
};

struct PotentialMode {
  int k = 1;
  double cos = 0.0;
  double sin = 0.0;
  std::size_t envelope = 0;  // index into PotentialSpec::envelopes
};

/// Forcing potential u(q,t) = sum_m g_m(t) (a_m cos 2 pi k_m q + b_m sin 2 pi k_m q).
/// The first envelope is always the built-in "constant".
class PotentialSpec {
 public:
  PotentialSpec();

  static PotentialSpec zero() { return {}; }
  static PotentialSpec single_mode(int k, double amp_cos, double amp_sin, Envelope env = ConstantEnvelope{});

  /// Registers (or replaces) a named envelope and returns its index.
  std::size_t set_envelope(std::string name, Envelope shape);
  void add_mode(int k, double amp_cos, double amp_sin, std::string_view envelope = "constant");

  [[nodiscard]] const std::vector<NamedEnvelope>& envelopes() const { return envelopes_; }
  [[nodiscard]] const std::vector<PotentialMode>& modes() const { return modes_; }
  [[nodiscard]] std::size_t envelope_index(std::string_view name) const;

 private:
  std::vector<NamedEnvelope> envelopes_;
  std::vector<PotentialMode> modes_;
};

/// Force and its q-derivative, the two quantities the characteristic flow needs.
struct ForceSample {
  double force = 0.0;      // u_q
  double curvature = 0.0;  // u_qq
};

[[nodiscard]] double eval_u(const PotentialSpec& spec, double q, double t);
[[nodiscard]] double eval_force(const PotentialSpec& spec, double q, double t);
[[nodiscard]] double eval_u_qq(const PotentialSpec& spec, double q, double t);
[[nodiscard]] ForceSample sample_force(const PotentialSpec& spec, double q, double t);

/// Closed-form integral over one period of u_q(q,t)^2.
[[nodiscard]] double force_energy(const PotentialSpec& spec, double t);

/// max over sampled t in [t0, t1] of sum_k (2 pi k)^2 |A_k(t)|, where A_k is the
/// combined amplitude of wavenumber k. Bounds sup_q |u_qq| and equals it for a
/// single wavenumber.
[[nodiscard]] double curvature_bound(const PotentialSpec& spec, double t0, double t1, int samples = 2001);

/// True when every mode with nonzero amplitude is switched off for t >= cutoff.
[[nodiscard]] bool vanishes_after(const PotentialSpec& spec, double cutoff);

[[nodiscard]] bool is_zero(const PotentialSpec& spec);

}  // namespace shocklab
