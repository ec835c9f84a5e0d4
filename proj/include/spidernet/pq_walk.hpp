#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "spidernet/graph.hpp"
#include "spidernet/grover_walk.hpp"

namespace spidernet {

/// Transition weights of the one-dimensional walk: forward p, stay r, back q.
struct PqParams {
  double p = 0.5;
  double q = 0.5;
  double r = 0.0;

  /// r is derived as 1-p-q; values within 1e-14 of zero are snapped to 0.
  static PqParams from_pq(double p, double q);
  /// Requires p+q+r = 1 to 1e-14.
  static PqParams from_pqr(double p, double q, double r);

  void validate() const;
};

/// p = c/b, q = 1/b, r = (b-c-1)/b.
PqParams params_from_spidernet(const SpidernetParams& sp);

/// Coefficients on (psi_n^+, psi_n^o, psi_n^-). Site 0 only uses `plus`.
struct ReducedSite {
  Complex plus{};
  Complex zero{};
  Complex minus{};
};

/// A vector of the ladder space: sites[0].plus is the psi_0^+ coefficient,
/// sites[n] holds the triple at level n. The active length is sites.size()-1.
struct ReducedState {
  std::vector<ReducedSite> sites{ReducedSite{}};

  std::size_t active_length() const { return sites.size() - 1; }
  double squared_norm() const;

  /// psi_0^+.
  static ReducedState origin();
};

Complex inner_product(const ReducedState& lhs, const ReducedState& rhs);

/// Psi_0 = psi_0^+ and Psi_n = sqrt(p) psi_n^+ + sqrt(r) psi_n^o + sqrt(q) psi_n^-.
ReducedState psi_vector(const PqParams& params, std::size_t n);

/// <Psi_n, s>.
Complex psi_overlap(const PqParams& params, const ReducedState& s, std::size_t n);

ReducedState reduced_coin(const PqParams& params, const ReducedState& s);
ReducedState reduced_shift(const PqParams& params, const ReducedState& s);
ReducedState reduced_step(const PqParams& params, const ReducedState& s);
void reduced_step_inplace(const PqParams& params, ReducedState& s);
ReducedState reduced_evolve(const PqParams& params, const ReducedState& s0, int n);

double origin_probability(const ReducedState& s);
double stratum_probability(const ReducedState& s, std::size_t level);

/// Image of a ladder vector in the half-edge space of g. Requires
/// radius >= active length + 1. Isometric and intertwines U.
WalkState embed(const Spidernet& g, const ReducedState& s);

/// The (p,q)-walk on the path of length N: H(N) keeps psi_0^+, the triples at
/// levels 1..N-1 and psi_N^-. States are ReducedStates with N+1 sites whose
/// last site uses only `minus`. The coin leaves psi_N^- fixed.
class CutoffWalk {
 public:
  CutoffWalk(const PqParams& params, std::size_t N);

  const PqParams& params() const { return params_; }
  std::size_t length() const { return N_; }
  std::size_t dimension() const { return 3 * N_ - 1; }

  ReducedState zero_state() const;
  ReducedState basis(std::size_t k) const;
  Complex coordinate(const ReducedState& s, std::size_t k) const;

  ReducedState coin(const ReducedState& s) const;
  ReducedState shift(const ReducedState& s) const;
  ReducedState step(const ReducedState& s) const;

  /// Psi_0..Psi_N, with Psi_N = psi_N^-.
  ReducedState psi(std::size_t n) const;
  /// sum_n gamma[n] Psi_n for gamma of length N+1.
  ReducedState from_gamma(const std::vector<double>& gamma) const;

  /// Trace of U in the canonical basis.
  double trace() const;

 private:
  void check(const ReducedState& s) const;
  Complex& slot(ReducedState& s, std::size_t k) const;

  PqParams params_;
  std::size_t N_;
};

/// Compression of U to span{Psi_0..Psi_N}: symmetric tridiagonal with
/// diagonal (0, r, ..., r, 0) and off-diagonal (sqrt q, sqrt pq, ..., sqrt pq, sqrt p).
struct JacobiMatrixT {
  std::size_t N = 2;
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;

  double trace() const;
  std::size_t size() const { return diagonal.size(); }
};

JacobiMatrixT build_T(const PqParams& params, std::size_t N);

struct TEigensystem {
  std::vector<double> lambda;                // descending, lambda[0] = 1
  std::vector<std::vector<double>> vectors;  // vectors[j][n] = <Psi_n, Omega_j>, vectors[j][0] > 0
};

TEigensystem eigensystem_T(const JacobiMatrixT& t, double tol = 1e-12);

struct UEigensystem {
  std::size_t N = 0;
  /// 0 < theta_1 < ... < theta_K < pi; K = N, or N-1 when r = 0.
  std::vector<double> theta;
  ReducedState omega0;
  std::vector<ReducedState> omega_plus;
  std::vector<ReducedState> omega_minus;
  std::size_t minus_one_multiplicity = 0;
  /// max ||U v - e^{i phi} v|| over the constructed eigenvectors.
  double max_residual = 0.0;
};

UEigensystem u_eigensystem(const PqParams& params, std::size_t N, double tol = 1e-12);

struct SpectralAtom {
  double lambda = 0.0;
  double weight = 0.0;
};

/// mu_N = sum_j |<Omega_j, Psi_0>|^2 delta_{lambda_j}.
std::vector<SpectralAtom> discrete_spectral_measure(const PqParams& params, std::size_t N);

}  // namespace spidernet
