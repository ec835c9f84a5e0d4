#include "spidernet/pq_walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spidernet/error.hpp"
#include "spidernet/tridiagonal.hpp"

namespace spidernet {

namespace {

constexpr double kSumTolerance = 1e-14;

}  // namespace

PqParams PqParams::from_pq(double p, double q) {
  PqParams out{p, q, 1.0 - p - q};
  if (std::abs(out.r) <= kSumTolerance) out.r = 0.0;
  out.validate();
  return out;
}

PqParams PqParams::from_pqr(double p, double q, double r) {
  if (std::abs(p + q + r - 1.0) > kSumTolerance) {
    throw InvalidParams("p + q + r must equal 1");
  }
  PqParams out{p, q, std::abs(r) <= kSumTolerance ? 0.0 : r};
  out.validate();
  return out;
}

void PqParams::validate() const {
  if (!(p > 0.0) || !(q > 0.0) || !(r >= 0.0) || std::abs(p + q + r - 1.0) > kSumTolerance) {
    throw InvalidParams("(p,q,r) must satisfy p>0, q>0, r=1-p-q>=0; got (" + std::to_string(p) +
                        "," + std::to_string(q) + "," + std::to_string(r) + ")");
  }
}

PqParams params_from_spidernet(const SpidernetParams& sp) {
  sp.validate();
  const double b = sp.b;
  PqParams out{sp.c / b, 1.0 / b, sp.intra_degree() / b};
  out.validate();
  return out;
}

double ReducedState::squared_norm() const {
  double sum = std::norm(sites[0].plus);
  for (std::size_t n = 1; n < sites.size(); ++n) {
    sum += std::norm(sites[n].plus) + std::norm(sites[n].zero) + std::norm(sites[n].minus);
  }
  return sum;
}

ReducedState ReducedState::origin() {
  ReducedState s;
  s.sites[0].plus = 1.0;
  return s;
}

Complex inner_product(const ReducedState& lhs, const ReducedState& rhs) {
  const std::size_t n = std::min(lhs.sites.size(), rhs.sites.size());
  Complex sum = std::conj(lhs.sites[0].plus) * rhs.sites[0].plus;
  for (std::size_t k = 1; k < n; ++k) {
    const ReducedSite& x = lhs.sites[k];
    const ReducedSite& y = rhs.sites[k];
    sum += std::conj(x.plus) * y.plus + std::conj(x.zero) * y.zero + std::conj(x.minus) * y.minus;
  }
  return sum;
}

ReducedState psi_vector(const PqParams& params, std::size_t n) {
  ReducedState s;
  s.sites.resize(n + 1);
  if (n == 0) {
    s.sites[0].plus = 1.0;
  } else {
    s.sites[n] = {std::sqrt(params.p), std::sqrt(params.r), std::sqrt(params.q)};
  }
  return s;
}

Complex psi_overlap(const PqParams& params, const ReducedState& s, std::size_t n) {
  if (n >= s.sites.size()) return 0.0;
  if (n == 0) return s.sites[0].plus;
  const ReducedSite& x = s.sites[n];
  return std::sqrt(params.p) * x.plus + std::sqrt(params.r) * x.zero + std::sqrt(params.q) * x.minus;
}

namespace {

// 2 Pi - I on one triple, Pi the projection onto (sqrt p, sqrt r, sqrt q).
void reflect(ReducedSite& x, double sp, double sr, double sq) {
  const Complex inner = sp * x.plus + sr * x.zero + sq * x.minus;
  x.plus = 2.0 * sp * inner - x.plus;
  x.zero = 2.0 * sr * inner - x.zero;
  x.minus = 2.0 * sq * inner - x.minus;
}

void coin_inplace(const PqParams& params, ReducedState& s, std::size_t last_reflected) {
  const double sp = std::sqrt(params.p);
  const double sr = std::sqrt(params.r);
  const double sq = std::sqrt(params.q);
  for (std::size_t n = 1; n <= last_reflected && n < s.sites.size(); ++n) {
    reflect(s.sites[n], sp, sr, sq);
  }
}

// psi_n^+ -> psi_{n+1}^-, psi_n^- -> psi_{n-1}^+, psi_n^o fixed. Grows the
// ladder by one site when the outermost + amplitude is nonzero.
void shift_inplace(ReducedState& s) {
  const std::size_t L = s.active_length();
  for (std::size_t n = 0; n <= L; ++n) {
    const Complex outgoing = s.sites[n].plus;
    s.sites[n].plus = n + 1 <= L ? s.sites[n + 1].minus : Complex{};
    if (n + 1 <= L) {
      s.sites[n + 1].minus = outgoing;
    } else if (outgoing != Complex{}) {
      s.sites.push_back(ReducedSite{Complex{}, Complex{}, outgoing});
    }
  }
}

}  // namespace

ReducedState reduced_coin(const PqParams& params, const ReducedState& s) {
  ReducedState out = s;
  coin_inplace(params, out, out.active_length());
  return out;
}

ReducedState reduced_shift(const PqParams& /*params*/, const ReducedState& s) {
  ReducedState out = s;
  shift_inplace(out);
  return out;
}

void reduced_step_inplace(const PqParams& params, ReducedState& s) {
  coin_inplace(params, s, s.active_length());
  shift_inplace(s);
}

ReducedState reduced_step(const PqParams& params, const ReducedState& s) {
  ReducedState out = s;
  reduced_step_inplace(params, out);
  return out;
}

ReducedState reduced_evolve(const PqParams& params, const ReducedState& s0, int n) {
  if (n < 0) throw InvalidParams("number of steps must be non-negative");
  ReducedState s = s0;
  s.sites.reserve(s.sites.size() + static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) reduced_step_inplace(params, s);
  return s;
}

double origin_probability(const ReducedState& s) { return std::norm(s.sites[0].plus); }

double stratum_probability(const ReducedState& s, std::size_t level) {
  if (level >= s.sites.size()) return 0.0;
  const ReducedSite& x = s.sites[level];
  if (level == 0) return std::norm(x.plus);
  return std::norm(x.plus) + std::norm(x.zero) + std::norm(x.minus);
}

WalkState embed(const Spidernet& g, const ReducedState& s) {
  const std::size_t L = s.active_length();
  if (static_cast<std::size_t>(g.radius()) < L + 1) {
    throw RadiusTooSmall("embedding a ladder vector of length " + std::to_string(L) +
                         " needs radius >= " + std::to_string(L + 1));
  }
  const SpidernetParams& sp = g.params();
  const double a = sp.a;
  const double c = sp.c;
  const double d = sp.intra_degree();
  if (d == 0.0) {
    for (const ReducedSite& x : s.sites) {
      if (x.zero != Complex{}) {
        throw DimensionMismatch("tree spidernets have no intra-stratum half-edges");
      }
    }
  }

  const auto& he = g.half_edges();
  WalkState out{std::vector<Complex>(g.half_edge_count())};
  for (std::size_t j = 0; j <= L; ++j) {
    const int stratum = static_cast<int>(j);
    const ReducedSite& x = s.sites[j];
    const double cj = std::pow(c, static_cast<double>(j));
    const Complex fwd = x.plus / std::sqrt(a * cj);
    const Complex intra = j == 0 || d == 0.0 ? Complex{} : x.zero / std::sqrt(a * d * cj / c);
    const Complex back = j == 0 ? Complex{} : x.minus / std::sqrt(a * cj / c);
    const std::size_t first = g.stratum_offset(stratum);
    for (std::size_t u = first; u < first + g.stratum_size(stratum); ++u) {
      for (std::size_t h = he.block_begin(u); h < he.block_end(u); ++h) {
        const int target = g.stratum_of(he.target(h));
        out.amplitudes[h] = target > stratum ? fwd : target < stratum ? back : intra;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cutoff walk

CutoffWalk::CutoffWalk(const PqParams& params, std::size_t N) : params_(params), N_(N) {
  params_.validate();
  if (N < 2) throw InvalidParams("the cutoff walk needs N >= 2");
}

ReducedState CutoffWalk::zero_state() const {
  ReducedState s;
  s.sites.resize(N_ + 1);
  return s;
}

void CutoffWalk::check(const ReducedState& s) const {
  if (s.sites.size() != N_ + 1) {
    throw DimensionMismatch("cutoff state must have N+1 sites");
  }
}

// Basis order: psi_0^+, then (psi_n^+, psi_n^o, psi_n^-) for n = 1..N-1, then psi_N^-.
Complex& CutoffWalk::slot(ReducedState& s, std::size_t k) const {
  if (k == 0) return s.sites[0].plus;
  if (k == dimension() - 1) return s.sites[N_].minus;
  ReducedSite& site = s.sites[(k - 1) / 3 + 1];
  switch ((k - 1) % 3) {
    case 0: return site.plus;
    case 1: return site.zero;
    default: return site.minus;
  }
}

ReducedState CutoffWalk::basis(std::size_t k) const {
  if (k >= dimension()) throw DimensionMismatch("basis index out of range");
  ReducedState s = zero_state();
  slot(s, k) = 1.0;
  return s;
}

Complex CutoffWalk::coordinate(const ReducedState& s, std::size_t k) const {
  check(s);
  ReducedState copy = s;
  return slot(copy, k);
}

ReducedState CutoffWalk::coin(const ReducedState& s) const {
  check(s);
  ReducedState out = s;
  coin_inplace(params_, out, N_ - 1);
  return out;
}

ReducedState CutoffWalk::shift(const ReducedState& s) const {
  check(s);
  if (s.sites[N_].plus != Complex{} || s.sites[N_].zero != Complex{}) {
    throw DimensionMismatch("cutoff state has amplitude outside H(N)");
  }
  ReducedState out = s;
  shift_inplace(out);
  return out;
}

ReducedState CutoffWalk::step(const ReducedState& s) const { return shift(coin(s)); }

ReducedState CutoffWalk::psi(std::size_t n) const {
  if (n > N_) throw DimensionMismatch("Psi index beyond cutoff");
  ReducedState s = zero_state();
  if (n == 0) {
    s.sites[0].plus = 1.0;
  } else if (n == N_) {
    s.sites[N_].minus = 1.0;
  } else {
    s.sites[n] = {std::sqrt(params_.p), std::sqrt(params_.r), std::sqrt(params_.q)};
  }
  return s;
}

ReducedState CutoffWalk::from_gamma(const std::vector<double>& gamma) const {
  if (gamma.size() != N_ + 1) throw DimensionMismatch("gamma must have N+1 entries");
  ReducedState s = zero_state();
  s.sites[0].plus = gamma[0];
  for (std::size_t n = 1; n < N_; ++n) {
    s.sites[n] = {gamma[n] * std::sqrt(params_.p), gamma[n] * std::sqrt(params_.r),
                  gamma[n] * std::sqrt(params_.q)};
  }
  s.sites[N_].minus = gamma[N_];
  return s;
}

double CutoffWalk::trace() const {
  double tr = 0.0;
  for (std::size_t k = 0; k < dimension(); ++k) {
    ReducedState image = step(basis(k));
    tr += slot(image, k).real();
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Spectra

double JacobiMatrixT::trace() const {
  double s = 0.0;
  for (double x : diagonal) s += x;
  return s;
}

JacobiMatrixT build_T(const PqParams& params, std::size_t N) {
  params.validate();
  if (N < 2) throw InvalidParams("T_N needs N >= 2");
  JacobiMatrixT t;
  t.N = N;
  t.diagonal.assign(N + 1, params.r);
  t.diagonal.front() = 0.0;
  t.diagonal.back() = 0.0;
  t.off_diagonal.assign(N, std::sqrt(params.p * params.q));
  t.off_diagonal.front() = std::sqrt(params.q);
  t.off_diagonal.back() = std::sqrt(params.p);
  return t;
}

TEigensystem eigensystem_T(const JacobiMatrixT& t, double tol) {
  TridiagonalEigen eig = symmetric_tridiagonal_eigen(t.diagonal, t.off_diagonal, tol);
  for (auto& v : eig.vectors) {
    if (v[0] < 0.0) {
      for (double& x : v) x = -x;
    }
  }
  return {std::move(eig.values), std::move(eig.vectors)};
}

namespace {

constexpr double kSnap = 1e-9;

ReducedState combine(const ReducedState& x, Complex alpha, const ReducedState& y, Complex beta) {
  ReducedState out = x;
  for (std::size_t n = 0; n < out.sites.size(); ++n) {
    out.sites[n].plus = alpha * x.sites[n].plus + beta * y.sites[n].plus;
    out.sites[n].zero = alpha * x.sites[n].zero + beta * y.sites[n].zero;
    out.sites[n].minus = alpha * x.sites[n].minus + beta * y.sites[n].minus;
  }
  return out;
}

double distance(const ReducedState& x, const ReducedState& y) {
  return std::sqrt(combine(x, 1.0, y, -1.0).squared_norm());
}

}  // namespace

UEigensystem u_eigensystem(const PqParams& params, std::size_t N, double tol) {
  const CutoffWalk walk(params, N);
  TEigensystem es = eigensystem_T(build_T(params, N), tol);

  // 1 is always an eigenvalue of T; -1 is one exactly when r = 0.
  if (std::abs(es.lambda.front() - 1.0) > kSnap) {
    throw ConvergenceFailure("largest eigenvalue of T_N is not 1");
  }
  es.lambda.front() = 1.0;
  const bool tree = params.r == 0.0;
  if (tree) {
    if (std::abs(es.lambda.back() + 1.0) > kSnap) {
      throw ConvergenceFailure("T_N with r = 0 must have eigenvalue -1");
    }
    es.lambda.back() = -1.0;
  }

  UEigensystem out;
  out.N = N;
  out.omega0 = walk.from_gamma(es.vectors[0]);
  out.max_residual = distance(walk.step(out.omega0), out.omega0);

  const std::size_t K = tree ? N - 1 : N;
  for (std::size_t j = 1; j <= K; ++j) {
    const double lambda = std::clamp(es.lambda[j], -1.0, 1.0);
    const double theta = std::acos(lambda);
    const ReducedState omega = walk.from_gamma(es.vectors[j]);
    const ReducedState s_omega = walk.shift(omega);
    const double scale = 1.0 / (std::sqrt(2.0) * std::sin(theta));
    for (int sign : {+1, -1}) {
      const Complex phase = std::polar(1.0, sign * theta);
      ReducedState v = combine(omega, scale, s_omega, -scale * phase);
      const ReducedState uv = walk.step(v);
      out.max_residual = std::max(out.max_residual, distance(uv, combine(v, phase, v, 0.0)));
      (sign > 0 ? out.omega_plus : out.omega_minus).push_back(std::move(v));
    }
    out.theta.push_back(theta);
  }
  if (tree) {
    const ReducedState omega_n = walk.from_gamma(es.vectors[N]);
    out.max_residual =
        std::max(out.max_residual, distance(walk.step(omega_n), combine(omega_n, -1.0, omega_n, 0.0)));
  }
  out.minus_one_multiplicity = walk.dimension() - 1 - 2 * K;
  return out;
}

std::vector<SpectralAtom> discrete_spectral_measure(const PqParams& params, std::size_t N) {
  const TEigensystem es = eigensystem_T(build_T(params, N));
  std::vector<SpectralAtom> atoms;
  atoms.reserve(es.lambda.size());
  for (std::size_t j = 0; j < es.lambda.size(); ++j) {
    atoms.push_back({es.lambda[j], es.vectors[j][0] * es.vectors[j][0]});
  }
  return atoms;
}

}  // namespace spidernet
