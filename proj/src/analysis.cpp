#include "spidernet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "spidernet/error.hpp"

namespace spidernet {

namespace {

// T_n(lambda) = cos(n arccos lambda) on [-1, 1].
double chebyshev_T(int n, double lambda) {
  return std::cos(static_cast<double>(std::abs(n)) * std::acos(std::clamp(lambda, -1.0, 1.0)));
}

void require_nonnegative(int l, int m) {
  if (l < 0 || m < 0) throw InvalidParams("polynomial indices must be non-negative");
}

// Ladder evolution specialised to real amplitudes: U is real, so a real start
// vector stays real. The shift sends psi_{n-1}^+ to psi_n^- and back; it is
// done by swapping the roles of two buffers and moving their origin by one
// slot, so a step is a single vectorisable coin pass.
class RealLadder {
 public:
  static constexpr double kNegligible = 1e-150;

  explicit RealLadder(const PqParams& params, std::size_t capacity)
      : sp_(std::sqrt(params.p)), sr_(std::sqrt(params.r)), sq_(std::sqrt(params.q)),
        buf_x_(capacity + 4, 0.0), buf_y_(capacity + 4, 0.0), zero_(capacity + 4, 0.0) {
    plus_ = buf_x_.data() + 1;
    minus_ = buf_y_.data() + 1;
    plus_[0] = 1.0;
  }

  void step() {
    double* __restrict p = plus_;
    double* __restrict z = zero_.data();
    double* __restrict m = minus_;
    for (std::size_t n = 1; n <= top_; ++n) {
      const double t = sp_ * p[n] + sr_ * z[n] + sq_ * m[n];
      p[n] = 2.0 * sp_ * t - p[n];
      z[n] = 2.0 * sr_ * t - z[n];
      m[n] = 2.0 * sq_ * t - m[n];
    }
    // new plus[k] = minus[k+1], new minus[k] = plus[k-1]. Past the fastest
    // group velocity the amplitudes decay exponentially; the range stops
    // growing once they are negligible, before they turn subnormal.
    const bool grows = std::abs(p[top_]) > kNegligible;
    plus_ = m + 1;
    minus_ = p - 1;
    if (grows) ++top_;
  }

  double stratum_probability(std::size_t level) const {
    if (level > top_) return 0.0;
    return plus_[level] * plus_[level] + zero_[level] * zero_[level] +
           minus_[level] * minus_[level];
  }

 private:
  double sp_, sr_, sq_;
  std::vector<double> buf_x_, buf_y_, zero_;
  double* plus_;
  double* minus_;
  std::size_t top_ = 0;
};

}  // namespace

double amplitude(const FreeMeixnerLaw& law, int l, int m, int n,
                 std::optional<QuadratureSpec> spec) {
  require_nonnegative(l, m);
  const QuadratureSpec qs = spec.value_or(QuadratureSpec::for_oscillation(
      static_cast<std::size_t>(std::abs(n)), static_cast<std::size_t>(l + m)));
  return integrate(
      law,
      [&](double x) { return chebyshev_T(n, x) * normalized_p(law, l, x) * normalized_p(law, m, x); },
      qs);
}

double amplitude_shifted(const FreeMeixnerLaw& law, int l, int m, int n, ShiftSide which,
                         std::optional<QuadratureSpec> spec) {
  switch (which) {
    case ShiftSide::kLeft:
      return amplitude(law, l, m, n - 1, spec);
    case ShiftSide::kRight:
      return amplitude(law, l, m, n + 1, spec);
    case ShiftSide::kBoth:
      return amplitude(law, l, m, n, spec);
  }
  throw InvalidParams("unknown shift side");
}

double asymptotic_amplitude(const PqParams& params, int l, int n) {
  if (l < 0) throw InvalidParams("polynomial index must be non-negative");
  const FreeMeixnerLaw law = law_from_pq(params);
  if (!law.atom) return 0.0;
  const double xi = law.atom->location;
  return law.atom->mass * normalized_p(law, l, xi) *
         std::cos(static_cast<double>(n) * std::acos(xi));
}

LocalizationReport classify(const SpidernetParams& sp) {
  sp.validate();
  LocalizationReport rep;
  rep.params = sp;
  const std::int64_t gap = sp.b - sp.c;
  const std::int64_t num = gap * gap - sp.c;
  rep.localized = num > 0;
  rep.w_numerator = std::max<std::int64_t>(num, 0);
  rep.w_denominator = gap * (gap + 1);
  const std::int64_t g = std::gcd(rep.w_numerator, rep.w_denominator);
  rep.w_numerator /= g;
  rep.w_denominator /= g;
  rep.w = static_cast<double>(rep.w_numerator) / static_cast<double>(rep.w_denominator);
  rep.xi = -1.0 / static_cast<double>(gap);
  rep.theta_tilde = std::acos(rep.xi);
  rep.qbar_origin = rep.w * rep.w / 2.0;
  return rep;
}

std::vector<double> cesaro_origin_series(const PqParams& params, int N) {
  params.validate();
  if (N < 1) throw InvalidParams("Cesaro average needs N >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(N));
  RealLadder walk(params, static_cast<std::size_t>(N));
  double sum = 0.0;
  for (int n = 0; n < N; ++n) {
    if (n > 0) walk.step();
    sum += walk.stratum_probability(0);
    out.push_back(sum / static_cast<double>(n + 1));
  }
  return out;
}

double cesaro_origin(const PqParams& params, int N) { return cesaro_origin_series(params, N).back(); }

std::vector<double> cesaro_strata(const PqParams& params, int N, std::size_t levels) {
  params.validate();
  if (N < 1) throw InvalidParams("Cesaro average needs N >= 1");
  std::vector<double> sum(levels + 1, 0.0);
  RealLadder walk(params, static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    if (n > 0) walk.step();
    for (std::size_t l = 0; l <= levels; ++l) sum[l] += walk.stratum_probability(l);
  }
  for (double& v : sum) v /= static_cast<double>(N);
  return sum;
}

LocalizationBound exp_localization_bound(const SpidernetParams& sp, int l) {
  const LocalizationReport rep = classify(sp);
  if (!rep.localized) {
    throw NotLocalized("S(" + std::to_string(sp.a) + "," + std::to_string(sp.b) + "," +
                       std::to_string(sp.c) + ") has no initial point localization");
  }
  if (l < 1) throw InvalidParams("the stratum bound holds for l >= 1");
  const double a = sp.a;
  const double b = sp.b;
  const double c = sp.c;
  const double w2 = rep.w * rep.w;
  const double gap2 = (b - c) * (b - c);
  return {b / (2.0 * c) * w2 * std::pow(c / gap2, l), b / (2.0 * a) * w2 * std::pow(1.0 / gap2, l)};
}

double random_walk_return(const FreeMeixnerLaw& law, int n, std::optional<QuadratureSpec> spec) {
  if (n < 0) throw InvalidParams("step count must be non-negative");
  const QuadratureSpec qs =
      spec.value_or(QuadratureSpec::for_oscillation(0, static_cast<std::size_t>(n)));
  return integrate(law, [n](double x) { return std::pow(x, n); }, qs);
}

std::vector<double> markov_return(const PqParams& params, int n_max) {
  params.validate();
  if (n_max < 0) throw InvalidParams("step count must be non-negative");
  const auto len = static_cast<std::size_t>(n_max) + 2;
  std::vector<double> dist(len, 0.0);
  std::vector<double> next(len, 0.0);
  dist[0] = 1.0;
  std::vector<double> out{1.0};
  for (int n = 1; n <= n_max; ++n) {
    std::fill(next.begin(), next.end(), 0.0);
    next[1] += dist[0];
    for (std::size_t k = 1; k + 1 < len; ++k) {
      next[k + 1] += params.p * dist[k];
      next[k] += params.r * dist[k];
      next[k - 1] += params.q * dist[k];
    }
    dist.swap(next);
    out.push_back(dist[0]);
  }
  return out;
}

}  // namespace spidernet
