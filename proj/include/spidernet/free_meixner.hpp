#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "spidernet/pq_walk.hpp"

namespace spidernet {

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Free Meixner law with Jacobi coefficients omega_1, then omega, omega, ...
/// and alpha_1 = 0, then alpha, alpha, ...: an absolutely continuous part on
/// [alpha - 2 sqrt(omega), alpha + 2 sqrt(omega)] plus (here) at most one atom.
struct FreeMeixnerLaw {
  double omega1 = 1.0;
  double omega = 1.0;
  double alpha = 0.0;
  std::optional<Atom> atom;

  double support_lo() const;
  double support_hi() const;

  /// Jacobi coefficients, n >= 1.
  double jacobi_omega(std::size_t n) const { return n == 1 ? omega1 : omega; }
  double jacobi_alpha(std::size_t n) const { return n == 1 ? 0.0 : alpha; }

  double atom_mass() const { return atom ? atom->mass : 0.0; }
};

/// The law with parameters (q, pq, r): atom at -q/(1-p) of mass
/// max{((1-p)^2 - pq) / ((1-p)(1-p+q)), 0}. Requires p >= q (ParamsOutOfRange).
FreeMeixnerLaw law_from_pq(const PqParams& params);

/// A law given directly by its Jacobi data, accepted only when it has no atoms
/// (density mass 1 to 1e-10); otherwise ParamsOutOfRange.
FreeMeixnerLaw absolutely_continuous_law(double omega1, double omega, double alpha);

/// Density of the absolutely continuous part. OutOfSupport outside the band.
double density(const FreeMeixnerLaw& law, double x);

/// Chebyshev polynomial of the second kind U_n(x).
double chebyshev_U(int n, double x);

/// Monic orthogonal polynomial P_n by the three-term recurrence.
double orth_poly_recurrence(const FreeMeixnerLaw& law, int n, double x);

/// P_n through the shifted Chebyshev polynomials U_n(x/2).
double orth_poly_closed_cheb(const FreeMeixnerLaw& law, int n, double x);

/// P_n through R_pm(x) = x - alpha pm sqrt((x-alpha)^2 - 4 omega); defined only
/// for (x-alpha)^2 > 4 omega, OutOfDomain otherwise.
double orth_poly_closed_R(const FreeMeixnerLaw& law, int n, double x);

/// Orthonormal p_n = P_n / sqrt(omega_1 omega_2 ... omega_n), evaluated by the
/// normalized recurrence (no under/overflow for large n).
double normalized_p(const FreeMeixnerLaw& law, int n, double x);

/// p_n at -q/(1-p) in closed form: (1/sqrt p) (-sqrt(pq)/(1-p))^n for n >= 1,
/// 1 for n = 0. Requires (1-p)^2 > pq.
double special_value(const PqParams& params, int n);

enum class QuadratureScheme { kMidpoint, kGaussLegendre };

struct QuadratureSpec {
  std::size_t nodes = 2048;
  QuadratureScheme scheme = QuadratureScheme::kMidpoint;

  /// max(2048, 16 (oscillation + degree)) midpoint nodes.
  static QuadratureSpec for_oscillation(std::size_t oscillation, std::size_t degree);
  void validate() const;
};

struct QuadratureNode {
  double x = 0.0;
  double weight = 0.0;
};

/// Nodes and weights representing integration against the law: the
/// absolutely continuous part under x = alpha + 2 sqrt(omega) cos(phi),
/// followed by the atom (if any) as a final node.
std::vector<QuadratureNode> quadrature_nodes(const FreeMeixnerLaw& law, const QuadratureSpec& spec);

/// Integral of f against the density alone.
double integrate_density(const FreeMeixnerLaw& law, const std::function<double(double)>& f,
                         const QuadratureSpec& spec = {});

/// Integral of f against the full law (density + atom).
double integrate(const FreeMeixnerLaw& law, const std::function<double(double)>& f,
                 const QuadratureSpec& spec = {});

}  // namespace spidernet
