#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "spidernet/error.hpp"
#include "spidernet/free_meixner.hpp"
#include "spidernet/pq_walk.hpp"

using namespace spidernet;

namespace {

const PqParams kLoc = PqParams::from_pqr(0.5, 1.0 / 6.0, 1.0 / 3.0);  // S(4,6,3)
const PqParams kTree = PqParams::from_pq(2.0 / 3.0, 1.0 / 3.0);      // S(3,3,2)

double distance(const ReducedState& x, const ReducedState& y) {
  const std::size_t n = std::max(x.sites.size(), y.sites.size());
  ReducedState a = x;
  ReducedState b = y;
  a.sites.resize(n);
  b.sites.resize(n);
  double s = std::norm(a.sites[0].plus - b.sites[0].plus);
  for (std::size_t k = 1; k < n; ++k) {
    s += std::norm(a.sites[k].plus - b.sites[k].plus) + std::norm(a.sites[k].zero - b.sites[k].zero) +
         std::norm(a.sites[k].minus - b.sites[k].minus);
  }
  return std::sqrt(s);
}

ReducedState random_reduced(std::size_t length, std::mt19937_64& rng, bool with_zero = true) {
  std::normal_distribution<double> normal;
  ReducedState s;
  s.sites.resize(length + 1);
  s.sites[0].plus = {normal(rng), normal(rng)};
  for (std::size_t n = 1; n <= length; ++n) {
    s.sites[n] = {{normal(rng), normal(rng)},
                  with_zero ? Complex{normal(rng), normal(rng)} : Complex{},
                  {normal(rng), normal(rng)}};
  }
  const double norm = std::sqrt(s.squared_norm());
  for (auto& x : s.sites) {
    x.plus /= norm;
    x.zero /= norm;
    x.minus /= norm;
  }
  return s;
}

double amplitude_by_cutoff(const CutoffWalk& w, std::size_t l, std::size_t m, int n) {
  ReducedState s = w.psi(m);
  for (int k = 0; k < n; ++k) s = w.step(s);
  return inner_product(w.psi(l), s).real();
}

}  // namespace

TEST_SUITE("pq_walk") {

TEST_CASE("parameters from spidernets") {
  const PqParams a = params_from_spidernet({4, 6, 3});
  CHECK(a.p == doctest::Approx(0.5));
  CHECK(a.q == doctest::Approx(1.0 / 6.0));
  CHECK(a.r == doctest::Approx(1.0 / 3.0));
  CHECK(params_from_spidernet({5, 7, 6}).r == 0.0);
  const PqParams b = params_from_spidernet({2, 4, 1});
  CHECK(b.p == 0.25);
  CHECK(b.q == 0.25);
  CHECK(b.r == 0.5);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(PqParams::from_pq(0.0, 0.5), InvalidParams);
  CHECK_THROWS_AS(PqParams::from_pq(0.7, 0.5), InvalidParams);
  CHECK_THROWS_AS(PqParams::from_pqr(0.5, 0.2, 0.2), InvalidParams);
  CHECK(PqParams::from_pq(0.7, 0.3).r == 0.0);
}

TEST_CASE("coin: fixes Psi_n, negates its complement, involution") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const ReducedState psi = psi_vector(kLoc, n);
    CHECK(distance(reduced_coin(kLoc, psi), psi) < 1e-15);
    // (sqrt q, 0, -sqrt p) is orthogonal to (sqrt p, sqrt r, sqrt q).
    ReducedState perp;
    perp.sites.resize(n + 1);
    perp.sites[n] = {std::sqrt(kLoc.q), 0.0, -std::sqrt(kLoc.p)};
    ReducedState neg = perp;
    neg.sites[n] = {-std::sqrt(kLoc.q), 0.0, std::sqrt(kLoc.p)};
    CHECK(distance(reduced_coin(kLoc, perp), neg) < 1e-15);
  }
  std::mt19937_64 rng(1);
  const ReducedState s = random_reduced(6, rng);
  CHECK(distance(reduced_coin(kLoc, reduced_coin(kLoc, s)), s) < 1e-14);
  CHECK(reduced_coin(kLoc, ReducedState::origin()).sites[0].plus == Complex{1.0});
}

TEST_CASE("coin acts on psi_n^+ as in the explicit formula") {
  ReducedState plus;
  plus.sites.resize(3);
  plus.sites[2].plus = 1.0;
  const ReducedSite out = reduced_coin(kLoc, plus).sites[2];
  CHECK(out.plus.real() == doctest::Approx(2 * kLoc.p - 1));
  CHECK(out.zero.real() == doctest::Approx(2 * std::sqrt(kLoc.p * kLoc.r)));
  CHECK(out.minus.real() == doctest::Approx(2 * std::sqrt(kLoc.p * kLoc.q)));
}

TEST_CASE("shift") {
  const ReducedState s = reduced_shift(kLoc, ReducedState::origin());
  REQUIRE(s.sites.size() == 2);
  CHECK(s.sites[0].plus == Complex{});
  CHECK(s.sites[1].minus == Complex{1.0});
  ReducedState zero;
  zero.sites.resize(3);
  zero.sites[2].zero = 1.0;
  CHECK(distance(reduced_shift(kLoc, zero), zero) == 0.0);
  std::mt19937_64 rng(2);
  const ReducedState r = random_reduced(5, rng);
  CHECK(distance(reduced_shift(kLoc, reduced_shift(kLoc, r)), r) == 0.0);
}

TEST_CASE("evolution from the origin") {
  CHECK(origin_probability(reduced_evolve(kLoc, ReducedState::origin(), 1)) == 0.0);
  ReducedState s = ReducedState::origin();
  for (int n = 0; n < 10000; ++n) reduced_step_inplace(kLoc, s);
  CHECK(std::abs(s.squared_norm() - 1.0) < 1e-10);
  CHECK(s.active_length() <= 10000);
  double total = 0.0;
  for (std::size_t l = 0; l < s.sites.size(); ++l) total += stratum_probability(s, l);
  CHECK(total == doctest::Approx(s.squared_norm()).epsilon(1e-14));
  CHECK_THROWS_AS(reduced_evolve(kLoc, s, -1), InvalidParams);
}

TEST_CASE("embedding: isotropic state, isometry, intertwining") {
  const Spidernet g = build_spidernet({4, 6, 3}, 8);
  const PqParams pq = params_from_spidernet(g.params());
  CHECK(oracle::max_abs_diff(embed(g, ReducedState::origin()), isotropic_initial_state(g)) < 1e-16);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const ReducedState r = random_reduced(2, rng);
    const WalkState w = embed(g, r);
    CHECK(w.squared_norm() == doctest::Approx(r.squared_norm()).epsilon(1e-13));
    WalkState full = w;
    ReducedState red = r;
    for (int n = 1; n <= 5; ++n) {
      full = step(g, full);
      reduced_step_inplace(pq, red);
      CHECK(oracle::max_abs_diff(full, embed(g, red)) < 1e-12);
    }
  }
}

TEST_CASE("embedding into a tree and radius checks") {
  const Spidernet tree = build_spidernet({3, 3, 2}, 4);
  const PqParams pq = params_from_spidernet(tree.params());
  ReducedState s = reduced_evolve(pq, ReducedState::origin(), 2);
  CHECK(oracle::max_abs_diff(embed(tree, s), evolve(tree, isotropic_initial_state(tree), 2)) < 1e-14);
  ReducedState bad;
  bad.sites.resize(2);
  bad.sites[1].zero = 1.0;
  CHECK_THROWS_AS(embed(tree, bad), DimensionMismatch);
  CHECK_THROWS_AS(embed(tree, reduced_evolve(pq, ReducedState::origin(), 4)), RadiusTooSmall);
}

TEST_CASE("T_N for N = 2 and basic properties") {
  const PqParams pq = kLoc;
  const JacobiMatrixT t = build_T(pq, 2);
  CHECK(t.diagonal == std::vector<double>{0.0, pq.r, 0.0});
  CHECK(t.off_diagonal == std::vector<double>{std::sqrt(pq.q), std::sqrt(pq.p)});
  for (std::size_t N : {2u, 5u, 9u}) {
    const Eigen::MatrixXd m = oracle::dense_T(build_T(pq, N));
    const Eigen::MatrixXd m2 = m * m;
    for (Eigen::Index i = 0; i < m.rows(); ++i) CHECK(m2(i, i) <= 1.0 + 1e-15);
    const Eigen::MatrixXd shifted = m - Eigen::MatrixXd::Identity(m.rows(), m.cols());
    CHECK(std::abs(shifted.determinant()) < 1e-14);
    CHECK(build_T(pq, N).trace() == doctest::Approx(pq.r * static_cast<double>(N - 1)));
  }
  CHECK_THROWS_AS(build_T(pq, 1), InvalidParams);
}

TEST_CASE("T_N eigensystem") {
  for (std::size_t N : {3u, 8u, 15u}) {
    const TEigensystem loc = eigensystem_T(build_T(kLoc, N));
    CHECK(loc.lambda.front() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(loc.lambda.back() > -1.0 + 1e-6);
    double sum = 0.0;
    for (double l : loc.lambda) sum += l;
    CHECK(sum == doctest::Approx(kLoc.r * static_cast<double>(N - 1)).epsilon(1e-12));
    for (const auto& v : loc.vectors) CHECK(v[0] > 0.0);
    const TEigensystem tree = eigensystem_T(build_T(kTree, N));
    CHECK(tree.lambda.back() == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("T_N eigenvectors against the normalized polynomials") {
  const std::size_t N = 8;
  const TEigensystem es = eigensystem_T(build_T(kLoc, N));
  const FreeMeixnerLaw law = law_from_pq(kLoc);
  double worst = 0.0;
  double worst_last = 0.0;
  double worst_last_scaled = 0.0;
  for (std::size_t j = 0; j <= N; ++j) {
    const double v0 = es.vectors[j][0];
    for (std::size_t n = 0; n < N; ++n) {
      const double predicted = v0 * normalized_p(law, static_cast<int>(n), es.lambda[j]);
      worst = std::max(worst, std::abs(es.vectors[j][n] - predicted));
    }
    const double p_last = normalized_p(law, static_cast<int>(N), es.lambda[j]);
    worst_last = std::max(worst_last, std::abs(es.vectors[j][N] - v0 * p_last));
    worst_last_scaled =
        std::max(worst_last_scaled, std::abs(es.vectors[j][N] - std::sqrt(kLoc.q) * v0 * p_last));
  }
  CHECK(worst < 1e-9);
  MESSAGE("last component: |v_N - sqrt(rho) p_N| max = " << worst_last
          << ", |v_N - sqrt(q) sqrt(rho) p_N| max = " << worst_last_scaled);
  CHECK(worst_last_scaled < 1e-9);
}

TEST_CASE("cutoff walk spectrum") {
  for (const PqParams& pq : {kLoc, kTree}) {
    for (std::size_t N : {3u, 5u, 8u}) {
      const CutoffWalk walk(pq, N);
      const UEigensystem ue = u_eigensystem(pq, N);
      CHECK(ue.max_residual < 1e-10);
      const double expected_trace = (2 * pq.r - 1) * static_cast<double>(N - 1);
      CHECK(walk.trace() == doctest::Approx(expected_trace).epsilon(1e-12).scale(1.0));
      CHECK(ue.minus_one_multiplicity == (pq.r > 0 ? N - 2 : N));
      CHECK(std::is_sorted(ue.theta.begin(), ue.theta.end()));
      for (std::size_t j = 0; j < ue.theta.size(); ++j) {
        CHECK(ue.omega_plus[j].squared_norm() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(ue.omega_minus[j].squared_norm() == doctest::Approx(1.0).epsilon(1e-10));
      }

      // Dense oracle: eigenvalue count at -1 and phases.
      const Eigen::MatrixXd u = oracle::dense_cutoff_U(walk);
      CHECK(u.trace() == doctest::Approx(expected_trace).epsilon(1e-12).scale(1.0));
      const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(u.cast<Complex>());
      std::size_t minus_ones = 0;
      std::vector<double> phases;
      for (Eigen::Index k = 0; k < ces.eigenvalues().size(); ++k) {
        const Complex z = ces.eigenvalues()(k);
        CHECK(std::abs(std::abs(z) - 1.0) < 1e-10);
        if (std::abs(z + 1.0) < 1e-8) {
          ++minus_ones;
        } else if (std::arg(z) > 1e-8) {
          phases.push_back(std::arg(z));
        }
      }
      std::sort(phases.begin(), phases.end());
      CHECK(minus_ones == ue.minus_one_multiplicity);
      REQUIRE(phases.size() == ue.theta.size());
      for (std::size_t j = 0; j < phases.size(); ++j) CHECK(std::abs(phases[j] - ue.theta[j]) < 1e-10);
    }
  }
  CHECK(u_eigensystem(kLoc, 5).minus_one_multiplicity == 3);
  CHECK(u_eigensystem(kTree, 5).minus_one_multiplicity == 5);
}

TEST_CASE("discrete spectral measure") {
  const FreeMeixnerLaw law = law_from_pq(kLoc);
  for (std::size_t N : {4u, 9u}) {
    const std::vector<SpectralAtom> mu = discrete_spectral_measure(kLoc, N);
    double total = 0.0;
    for (const SpectralAtom& a : mu) {
      CHECK(a.weight >= 0.0);
      total += a.weight;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    const Eigen::MatrixXd t = oracle::dense_T(build_T(kLoc, N));
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(t.rows(), t.cols());
    for (int m = 0; m <= 2 * static_cast<int>(N); ++m) {
      double moment = 0.0;
      for (const SpectralAtom& a : mu) moment += a.weight * std::pow(a.lambda, m);
      CHECK(moment == doctest::Approx(power(0, 0)).epsilon(1e-11).scale(1.0));
      if (m < static_cast<int>(N)) {
        CHECK(moment == doctest::Approx(oracle::jacobi_moment(law, m)).epsilon(1e-11).scale(1.0));
      }
      power = power * t;
    }
  }
  const std::vector<SpectralAtom> half = discrete_spectral_measure(PqParams::from_pq(0.5, 0.5), 2);
  REQUIRE(half.size() == 3);
  CHECK(half[0].lambda == doctest::Approx(1.0));
  CHECK(half[1].lambda == doctest::Approx(0.0).scale(1.0));
  CHECK(half[2].lambda == doctest::Approx(-1.0));
}

TEST_CASE("spectral reconstruction of the return amplitude") {
  ReducedState s = ReducedState::origin();
  for (int n = 0; n <= 50; ++n) {
    const std::size_t N = static_cast<std::size_t>(n) + 2;
    const TEigensystem es = eigensystem_T(build_T(kLoc, N));
    double spectral = 0.0;
    for (std::size_t j = 0; j < es.lambda.size(); ++j) {
      const double lambda = std::clamp(es.lambda[j], -1.0, 1.0);
      spectral += std::cos(n * std::acos(lambda)) * es.vectors[j][0] * es.vectors[j][0];
    }
    CHECK(std::abs(s.sites[0].plus.real() - spectral) < 1e-10);
    reduced_step_inplace(kLoc, s);
  }
}

TEST_CASE("shift identities") {
  for (std::size_t l = 0; l <= 3; ++l) {
    for (std::size_t m = 0; m <= 3; ++m) {
      const ReducedState psi_l = psi_vector(kLoc, l);
      const ReducedState psi_m = psi_vector(kLoc, m);
      const ReducedState s_psi_l = reduced_shift(kLoc, psi_l);
      const ReducedState s_psi_m = reduced_shift(kLoc, psi_m);
      ReducedState u_psi_m = psi_m;
      ReducedState u_s_psi_m = s_psi_m;
      std::vector<double> plain;
      for (int n = 0; n <= 20; ++n) {
        plain.push_back(inner_product(psi_l, u_psi_m).real());
        const double left = inner_product(s_psi_l, u_psi_m).real();
        const double both = inner_product(s_psi_l, u_s_psi_m).real();
        const double right = inner_product(psi_l, u_s_psi_m).real();
        if (n >= 1) CHECK(std::abs(left - plain[static_cast<std::size_t>(n - 1)]) < 1e-13);
        CHECK(std::abs(both - plain.back()) < 1e-13);
        u_psi_m = reduced_step(kLoc, u_psi_m);
        u_s_psi_m = reduced_step(kLoc, u_s_psi_m);
        CHECK(std::abs(right - inner_product(psi_l, u_psi_m).real()) < 1e-13);
      }
    }
  }
}

TEST_CASE("cutoff independence") {
  // N and N' both exceed min{l+n, m+n} = 4.
  const CutoffWalk small(kLoc, 5);
  const CutoffWalk large(kLoc, 12);
  CHECK(std::abs(amplitude_by_cutoff(small, 1, 4, 3) - amplitude_by_cutoff(large, 1, 4, 3)) < 1e-15);
  const ReducedState inf = reduced_evolve(kLoc, psi_vector(kLoc, 4), 3);
  CHECK(std::abs(psi_overlap(kLoc, inf, 1).real() - amplitude_by_cutoff(large, 1, 4, 3)) < 1e-15);
}

TEST_CASE("cutoff walk plumbing") {
  const CutoffWalk w(kLoc, 4);
  CHECK(w.dimension() == 11);
  CHECK_THROWS_AS(CutoffWalk(kLoc, 1), InvalidParams);
  CHECK_THROWS_AS(w.basis(11), DimensionMismatch);
  CHECK_THROWS_AS(w.psi(5), DimensionMismatch);
  CHECK_THROWS_AS(w.step(ReducedState::origin()), DimensionMismatch);
  // The coin leaves psi_N^- alone.
  CHECK(distance(w.coin(w.psi(4)), w.psi(4)) == 0.0);
}

}
