#include "spidernet/free_meixner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spidernet/error.hpp"

namespace spidernet {

double FreeMeixnerLaw::support_lo() const { return alpha - 2.0 * std::sqrt(omega); }
double FreeMeixnerLaw::support_hi() const { return alpha + 2.0 * std::sqrt(omega); }

FreeMeixnerLaw law_from_pq(const PqParams& params) {
  params.validate();
  const double p = params.p;
  const double q = params.q;
  if (p < q) {
    throw ParamsOutOfRange("the atom structure is only known for p >= q; got p=" +
                           std::to_string(p) + ", q=" + std::to_string(q));
  }
  FreeMeixnerLaw law{q, p * q, params.r, std::nullopt};
  const double gap = (1.0 - p) * (1.0 - p) - p * q;
  if (gap > 0.0) {
    law.atom = Atom{-q / (1.0 - p), gap / ((1.0 - p) * (1.0 - p + q))};
  }
  return law;
}

FreeMeixnerLaw absolutely_continuous_law(double omega1, double omega, double alpha) {
  if (!(omega1 > 0.0) || !(omega > 0.0)) {
    throw ParamsOutOfRange("Jacobi weights must be positive");
  }
  FreeMeixnerLaw law{omega1, omega, alpha, std::nullopt};
  const double mass = integrate_density(law, [](double) { return 1.0; });
  if (std::abs(mass - 1.0) > 1e-10) {
    throw ParamsOutOfRange("law with Jacobi data (" + std::to_string(omega1) + "," +
                           std::to_string(omega) + "," + std::to_string(alpha) +
                           ") has atoms; only the single-atom (p,q) family is supported");
  }
  return law;
}

namespace {

double denominator(const FreeMeixnerLaw& law, double x) {
  return (law.omega - law.omega1) * x * x + law.omega1 * law.alpha * x + law.omega1 * law.omega1;
}

}  // namespace

double density(const FreeMeixnerLaw& law, double x) {
  const double half_width = 2.0 * std::sqrt(law.omega);
  const double slack = 1e-12 * std::max(1.0, half_width);
  const double dx = x - law.alpha;
  if (std::abs(dx) > half_width + slack) {
    throw OutOfSupport("x = " + std::to_string(x) + " lies outside [" +
                       std::to_string(law.support_lo()) + ", " + std::to_string(law.support_hi()) +
                       "]");
  }
  const double radicand = std::max(0.0, 4.0 * law.omega - dx * dx);
  if (radicand == 0.0) return 0.0;
  return law.omega1 / (2.0 * std::numbers::pi) * std::sqrt(radicand) / denominator(law, x);
}

double chebyshev_U(int n, double x) {
  if (n < 0) return 0.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double orth_poly_recurrence(const FreeMeixnerLaw& law, int n, double x) {
  if (n < 0) throw InvalidParams("polynomial degree must be non-negative");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = x - law.jacobi_alpha(1);
  for (int k = 1; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double next = (x - law.jacobi_alpha(kk + 1)) * cur - law.jacobi_omega(kk) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double orth_poly_closed_cheb(const FreeMeixnerLaw& law, int n, double x) {
  if (n < 0) throw InvalidParams("polynomial degree must be non-negative");
  if (n == 0) return 1.0;
  if (n == 1) return x;
  const double s = std::sqrt(law.omega);
  const double y = (x - law.alpha) / s;
  auto u_tilde = [y](int k) { return chebyshev_U(k, y / 2.0); };
  return std::pow(s, n) * u_tilde(n) + law.alpha * std::pow(s, n - 1) * u_tilde(n - 1) +
         (law.omega - law.omega1) * std::pow(s, n - 2) * u_tilde(n - 2);
}

double orth_poly_closed_R(const FreeMeixnerLaw& law, int n, double x) {
  if (n < 0) throw InvalidParams("polynomial degree must be non-negative");
  const double dx = x - law.alpha;
  const double disc = dx * dx - 4.0 * law.omega;
  if (!(disc > 0.0)) {
    throw OutOfDomain("R-form needs (x - alpha)^2 > 4 omega; x = " + std::to_string(x));
  }
  if (n == 0) return 1.0;
  const double root = std::sqrt(disc);
  const double rp = dx + root;
  const double rm = dx - root;
  const double num = (x * rp - 2.0 * law.omega1) * std::pow(rp, n - 1) -
                     (x * rm - 2.0 * law.omega1) * std::pow(rm, n - 1);
  return num / (std::pow(2.0, n - 1) * (rp - rm));
}

double normalized_p(const FreeMeixnerLaw& law, int n, double x) {
  if (n < 0) throw InvalidParams("polynomial degree must be non-negative");
  double prev = 1.0;
  if (n == 0) return prev;
  // x p_k = b_{k+1} p_{k+1} + alpha_{k+1} p_k + b_k p_{k-1}, b_k = sqrt(omega_k).
  double cur = (x - law.jacobi_alpha(1)) / std::sqrt(law.jacobi_omega(1));
  for (int k = 1; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double next = ((x - law.jacobi_alpha(kk + 1)) * cur -
                         std::sqrt(law.jacobi_omega(kk)) * prev) /
                        std::sqrt(law.jacobi_omega(kk + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

double special_value(const PqParams& params, int n) {
  params.validate();
  const double p = params.p;
  const double q = params.q;
  if (!((1.0 - p) * (1.0 - p) - p * q > 0.0)) {
    throw ParamsOutOfRange("the closed form needs (1-p)^2 > pq");
  }
  if (n < 0) throw InvalidParams("polynomial degree must be non-negative");
  if (n == 0) return 1.0;
  return std::pow(-std::sqrt(p * q) / (1.0 - p), n) / std::sqrt(p);
}

QuadratureSpec QuadratureSpec::for_oscillation(std::size_t oscillation, std::size_t degree) {
  return {std::max<std::size_t>(2048, 16 * (oscillation + degree)), QuadratureScheme::kMidpoint};
}

void QuadratureSpec::validate() const {
  if (nodes < 2) throw InvalidParams("quadrature needs at least 2 nodes");
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_M.
void gauss_legendre(std::size_t m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  const double md = static_cast<double>(m);
  for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (md + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (std::size_t k = 2; k <= m; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p1 = z, p0 = 1.0;
      dp = md * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = -z;
    nodes[m - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    weights[i] = w;
    weights[m - 1 - i] = w;
  }
}

}  // namespace

std::vector<QuadratureNode> quadrature_nodes(const FreeMeixnerLaw& law, const QuadratureSpec& spec) {
  spec.validate();
  const double s = std::sqrt(law.omega);
  // rho(x) dx = (omega1 / 2pi) * 4 omega sin^2(phi) / D(x) dphi on [0, pi].
  auto weight_in_phi = [&](double phi) {
    const double x = law.alpha + 2.0 * s * std::cos(phi);
    const double sin_phi = std::sin(phi);
    return law.omega1 / (2.0 * std::numbers::pi) * 4.0 * law.omega * sin_phi * sin_phi /
           denominator(law, x);
  };

  std::vector<QuadratureNode> out;
  out.reserve(spec.nodes + 1);
  const double m = static_cast<double>(spec.nodes);
  if (spec.scheme == QuadratureScheme::kMidpoint) {
    const double h = std::numbers::pi / m;
    for (std::size_t k = 0; k < spec.nodes; ++k) {
      const double phi = (static_cast<double>(k) + 0.5) * h;
      out.push_back({law.alpha + 2.0 * s * std::cos(phi), h * weight_in_phi(phi)});
    }
  } else {
    std::vector<double> t;
    std::vector<double> w;
    gauss_legendre(spec.nodes, t, w);
    for (std::size_t k = 0; k < spec.nodes; ++k) {
      const double phi = 0.5 * std::numbers::pi * (t[k] + 1.0);
      out.push_back({law.alpha + 2.0 * s * std::cos(phi),
                     0.5 * std::numbers::pi * w[k] * weight_in_phi(phi)});
    }
  }
  if (law.atom) out.push_back({law.atom->location, law.atom->mass});
  return out;
}

double integrate_density(const FreeMeixnerLaw& law, const std::function<double(double)>& f,
                         const QuadratureSpec& spec) {
  FreeMeixnerLaw continuous = law;
  continuous.atom.reset();
  double sum = 0.0;
  for (const QuadratureNode& node : quadrature_nodes(continuous, spec)) sum += node.weight * f(node.x);
  return sum;
}

double integrate(const FreeMeixnerLaw& law, const std::function<double(double)>& f,
                 const QuadratureSpec& spec) {
  double sum = 0.0;
  for (const QuadratureNode& node : quadrature_nodes(law, spec)) sum += node.weight * f(node.x);
  return sum;
}

}  // namespace spidernet
