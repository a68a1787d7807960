#include "semisort/datagen.hpp"

#include <cmath>
#include <limits>

namespace semisort {

std::string to_string(Family f) {
  switch (f) {
    case Family::uniform: return "uniform";
    case Family::exponential: return "exponential";
    case Family::zipfian: return "zipfian";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "uniform") return Family::uniform;
  if (name == "exponential" || name == "exp") return Family::exponential;
  if (name == "zipfian" || name == "zipf") return Family::zipfian;
  throw ConfigError("unknown distribution '" + name + "' (expected uniform, exponential or zipfian)");
}

void validate(const DistributionSpec& spec) {
  if (spec.key_bits != 32 && spec.key_bits != 64 && spec.key_bits != 128)
    throw ConfigError("key width must be 32, 64 or 128 bits");
  const double p = spec.parameter;
  if (!std::isfinite(p)) throw ConfigError("distribution parameter must be finite");
  switch (spec.family) {
    case Family::uniform:
      if (p < 1 || p != std::floor(p)) throw ConfigError("uniform mu must be an integer >= 1");
      if (spec.key_bits == 32 && p > 4294967296.0)
        throw ConfigError("uniform mu exceeds the 32-bit key range");
      if (p >= 18446744073709551616.0) throw ConfigError("uniform mu exceeds the 64-bit key range");
      break;
    case Family::exponential:
      if (!(p > 0)) throw ConfigError("exponential lambda must be > 0");
      break;
    case Family::zipfian:
      if (!(p > 0)) throw ConfigError("zipfian s must be > 0");
      if (spec.key_bits == 32 && spec.n > 4294967295ULL)
        throw ConfigError("zipfian ranks exceed the 32-bit key range");
      break;
  }
}

namespace {

// log1p(x)/x, accurate near 0.
double helper1(double x) {
  return std::abs(x) > 1e-8 ? std::log1p(x) / x : 1.0 - x * (0.5 - x * (1.0 / 3.0 - 0.25 * x));
}

// expm1(x)/x, accurate near 0.
double helper2(double x) {
  return std::abs(x) > 1e-8 ? std::expm1(x) / x : 1.0 + x * 0.5 * (1.0 + x * (1.0 / 3.0) * (1.0 + 0.25 * x));
}

}  // namespace

ZipfSampler::ZipfSampler(std::uint64_t n, double s) : n_(n == 0 ? 1 : n), s_(s) {
  h_integral_x1_ = h_integral(1.5) - 1.0;
  h_integral_n_ = h_integral(static_cast<double>(n_) + 0.5);
  squeeze_ = 2.0 - h_integral_inverse(h_integral(2.5) - h(2.0));
}

double ZipfSampler::h(double x) const { return std::exp(-s_ * std::log(x)); }

// Integral of h from 1 to x: (x^(1-s) - 1) / (1 - s), or log(x) at s = 1.
double ZipfSampler::h_integral(double x) const {
  const double log_x = std::log(x);
  return helper2((1.0 - s_) * log_x) * log_x;
}

double ZipfSampler::h_integral_inverse(double x) const {
  double t = x * (1.0 - s_);
  if (t < -1.0) t = -1.0;
  return std::exp(helper1(t) * x);
}

std::uint64_t ZipfSampler::operator()(SplitMix64& rng) const {
  for (;;) {
    const double u = h_integral_n_ + rng.unit() * (h_integral_x1_ - h_integral_n_);
    const double x = h_integral_inverse(u);
    double kd = std::floor(x + 0.5);
    if (kd < 1.0) kd = 1.0;
    if (kd > static_cast<double>(n_)) kd = static_cast<double>(n_);
    const auto k = static_cast<std::uint64_t>(kd);
    if (kd - x <= squeeze_ || u >= h_integral(kd + 0.5) - h(kd)) return k;
  }
}

KeyStream::KeyStream(const DistributionSpec& spec)
    : spec_(spec),
      zipf_(spec.family == Family::zipfian ? spec.n : 1, spec.family == Family::zipfian ? spec.parameter : 1.0) {
  if (spec.family == Family::uniform) mu_ = static_cast<std::uint64_t>(spec.parameter);
}

KeyStream::Draw KeyStream::operator()(std::size_t i) const {
  SplitMix64 rng(stream_seed(spec_.seed, i));
  Draw d{};
  switch (spec_.family) {
    case Family::uniform:
      d.key = rng.bounded(mu_);
      break;
    case Family::exponential: {
      const double x = -std::log1p(-rng.unit()) / spec_.parameter;
      d.key = x >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(x);
      break;
    }
    case Family::zipfian:
      d.key = zipf_(rng);
      break;
  }
  if (spec_.key_bits == 32 && d.key > 0xffffffffULL) d.key = 0xffffffffULL;
  d.value_lo = rng();
  d.value_hi = rng();
  return d;
}

}  // namespace semisort
