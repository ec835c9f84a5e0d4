#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "spidernet/free_meixner.hpp"
#include "spidernet/graph.hpp"
#include "spidernet/pq_walk.hpp"

namespace spidernet {

/// <Psi_l, U^n Psi_m> = integral of T_|n|(lambda) p_l(lambda) p_m(lambda) against
/// the law. Without a spec the node count follows QuadratureSpec::for_oscillation.
double amplitude(const FreeMeixnerLaw& law, int l, int m, int n,
                 std::optional<QuadratureSpec> spec = std::nullopt);

enum class ShiftSide {
  kLeft,   // <S Psi_l, U^n Psi_m>
  kRight,  // <Psi_l, U^n S Psi_m>
  kBoth,   // <S Psi_l, U^n S Psi_m>
};

double amplitude_shifted(const FreeMeixnerLaw& law, int l, int m, int n, ShiftSide which,
                         std::optional<QuadratureSpec> spec = std::nullopt);

/// w p_l(xi) cos(n theta~): the atom's share of <Psi_l, U^n Psi_0>. Zero when
/// the law has no atom.
double asymptotic_amplitude(const PqParams& params, int l, int n);

struct LocalizationReport {
  SpidernetParams params;
  /// w = w_numerator / w_denominator, with w_numerator clipped at 0.
  std::int64_t w_numerator = 0;
  std::int64_t w_denominator = 1;
  double w = 0.0;
  double xi = 0.0;
  double theta_tilde = 0.0;
  bool localized = false;
  double qbar_origin = 0.0;
};

/// w = max{((b-c)^2 - c) / ((b-c)(b-c+1)), 0}, cos theta~ = -1/(b-c),
/// qbar = w^2/2. Localized exactly when (b-c)^2 > c.
LocalizationReport classify(const SpidernetParams& sp);

/// (1/N) sum_{n<N} |<Psi_0, U^n Psi_0>|^2 by reduced evolution. N >= 1.
double cesaro_origin(const PqParams& params, int N);

/// Running Cesaro averages: element k is (1/(k+1)) sum_{n<=k} P(X_n = o).
std::vector<double> cesaro_origin_series(const PqParams& params, int N);

/// (1/N) sum_{n<N} P(X_n in V_l) for l = 0..levels.
std::vector<double> cesaro_strata(const PqParams& params, int N, std::size_t levels);

struct LocalizationBound {
  double stratum = 0.0;
  double per_vertex = 0.0;
};

/// Lower bounds on the time-averaged probability of V_l and of a single vertex
/// of V_l (rotationally symmetric case). l >= 1; NotLocalized unless b > c+sqrt c.
LocalizationBound exp_localization_bound(const SpidernetParams& sp, int l);

/// P(X_n = o) for the isotropic classical random walk: integral of lambda^n.
double random_walk_return(const FreeMeixnerLaw& law, int n,
                          std::optional<QuadratureSpec> spec = std::nullopt);

/// Same probabilities for n = 0..n_max from the birth-death chain on the strata:
/// 0 -> 1 surely, otherwise forward p, stay r, back q.
std::vector<double> markov_return(const PqParams& params, int n_max);

}  // namespace spidernet
