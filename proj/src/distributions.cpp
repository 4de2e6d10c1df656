#include "knde/distributions.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace knde {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const double kNormConst = 1.0 / std::sqrt(2.0 * kPi);
// Mass of the standard normal on [-1, 1]; normalizes the truncated marginal.
const double kTruncMass = std::erf(1.0 / kSqrt2);

double normal_pdf(double t) { return kNormConst * std::exp(-0.5 * t * t); }
double normal_cdf(double t) { return 0.5 * std::erfc(-t / kSqrt2); }

//! Uniform stream plus the exact transforms used by the samplers.
//! mt19937_64 has a standardized output sequence, and the 53-bit mantissa
//! conversion is platform-independent, so draws are reproducible anywhere.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  // [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // (0, 1); safe to feed into log/tan transforms
  double uniform_open() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform_open();
    double u2 = uniform_open();
    double m = std::sqrt(-2.0 * std::log(u1));
    spare_ = m * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return m * std::cos(2.0 * kPi * u2);
  }

  double truncated_normal() {
    double z;
    do {
      z = normal();
    } while (std::abs(z) > 1.0);
    return z;
  }

  double cauchy() { return std::tan(kPi * (uniform_open() - 0.5)); }

  // Inverse CDF of the |x| tail law (|x|+1)^(-3/2)/4.
  double heavy_tail() {
    double v = 2.0 * uniform_open() - 1.0;
    double m = 1.0 - std::abs(v);
    double mag = 1.0 / (m * m) - 1.0;
    return v < 0.0 ? -mag : mag;
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

double heavy_tail_pdf(double t) {
  return 0.25 * std::pow(std::abs(t) + 1.0, -1.5);
}

double heavy_tail_cdf(double t) {
  double half = 0.5 * (1.0 - 1.0 / std::sqrt(std::abs(t) + 1.0));
  return t < 0.0 ? 0.5 - half : 0.5 + half;
}

// Smallest w with two_tail(w) <= q, found by doubling then bisection.
template <typename TwoTail>
double solve_halfwidth(TwoTail two_tail, double q) {
  double hi = 1.0;
  while (two_tail(hi) > q && hi < 1e300) hi *= 2.0;
  double lo = hi * 0.5;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (two_tail(mid) > q)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace

DistId dist_id_from_string(const std::string& id) {
  if (id == "uniform") return DistId::Uniform;
  if (id == "gaussian") return DistId::Gaussian;
  if (id == "trunc-gaussian") return DistId::TruncGaussian;
  if (id == "cauchy") return DistId::Cauchy;
  if (id == "heavytail-beta13") return DistId::HeavyTailBeta13;
  throw std::invalid_argument("unknown distribution id '" + id + "'");
}

std::string to_string(DistId id) {
  switch (id) {
    case DistId::Uniform: return "uniform";
    case DistId::Gaussian: return "gaussian";
    case DistId::TruncGaussian: return "trunc-gaussian";
    case DistId::Cauchy: return "cauchy";
    case DistId::HeavyTailBeta13: return "heavytail-beta13";
  }
  throw std::logic_error("unreachable distribution id");
}

Distribution::Distribution(DistId id, int dim) : id_(id), dim_(dim) {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
}

double Distribution::marginal_pdf(double t) const {
  switch (id_) {
    case DistId::Uniform: return (t >= 0.0 && t <= 1.0) ? 1.0 : 0.0;
    case DistId::Gaussian: return normal_pdf(t);
    case DistId::TruncGaussian:
      return (t >= -1.0 && t <= 1.0) ? normal_pdf(t) / kTruncMass : 0.0;
    case DistId::Cauchy: return 1.0 / (kPi * (1.0 + t * t));
    case DistId::HeavyTailBeta13: return heavy_tail_pdf(t);
  }
  throw std::logic_error("unreachable distribution id");
}

double Distribution::marginal_cdf(double t) const {
  switch (id_) {
    case DistId::Uniform: return std::clamp(t, 0.0, 1.0);
    case DistId::Gaussian: return normal_cdf(t);
    case DistId::TruncGaussian:
      if (t <= -1.0) return 0.0;
      if (t >= 1.0) return 1.0;
      return (normal_cdf(t) - normal_cdf(-1.0)) / kTruncMass;
    case DistId::Cauchy: return 0.5 + std::atan(t) / kPi;
    case DistId::HeavyTailBeta13: return heavy_tail_cdf(t);
  }
  throw std::logic_error("unreachable distribution id");
}

double Distribution::pdf(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("pdf: point dimension mismatch");
  double p = 1.0;
  for (int j = 0; j < dim_; ++j) p *= marginal_pdf(x(j));
  return p;
}

SampleSet Distribution::sample(Index n, std::uint64_t seed) const {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  RngStream rng(seed);
  PointMatrix pts(n, dim_);
  for (Index i = 0; i < n; ++i) {
    for (int j = 0; j < dim_; ++j) {
      double v = 0.0;
      switch (id_) {
        case DistId::Uniform: v = rng.uniform(); break;
        case DistId::Gaussian: v = rng.normal(); break;
        case DistId::TruncGaussian: v = rng.truncated_normal(); break;
        case DistId::Cauchy: v = rng.cauchy(); break;
        case DistId::HeavyTailBeta13: v = rng.heavy_tail(); break;
      }
      pts(i, j) = v;
    }
  }
  return SampleSet{std::move(pts), seed, name()};
}

bool Distribution::has_bounded_support() const {
  return id_ == DistId::Uniform || id_ == DistId::TruncGaussian;
}

SupportRegion Distribution::support() const {
  if (id_ == DistId::Uniform) return make_cube(dim_, 0.0, 1.0);
  if (id_ == DistId::TruncGaussian) return make_cube(dim_, -1.0, 1.0);
  return Unbounded{};
}

std::optional<double> Distribution::tail_beta() const {
  switch (id_) {
    case DistId::Gaussian: return 1.0;
    case DistId::Cauchy: return 0.5;
    case DistId::HeavyTailBeta13: return 1.0 / 3.0;
    default: return std::nullopt;
  }
}

Box Distribution::effective_region(double mass_tol) const {
  if (!(mass_tol > 0.0 && mass_tol < 1.0))
    throw std::invalid_argument("mass_tol must lie in (0, 1)");
  if (id_ == DistId::Uniform) return make_cube(dim_, 0.0, 1.0);
  if (id_ == DistId::TruncGaussian) return make_cube(dim_, -1.0, 1.0);

  // Per-coordinate two-tail budget q keeps the product box above 1 - tol.
  double q = mass_tol / dim_;
  double w = 0.0;
  switch (id_) {
    case DistId::Gaussian:
      // Never smaller than the conventional [-5, 5] evaluation window.
      w = std::max(5.0, solve_halfwidth(
                            [](double t) { return std::erfc(t / kSqrt2); }, q));
      break;
    case DistId::Cauchy:
      w = 1.0 / std::tan(0.5 * kPi * q);
      break;
    case DistId::HeavyTailBeta13:
      w = 1.0 / (q * q) - 1.0;
      break;
    default:
      throw std::logic_error("unreachable distribution id");
  }
  return make_cube(dim_, -w, w);
}

}  // namespace knde
