#include "spidernet/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spidernet/error.hpp"

namespace spidernet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void normalize(std::vector<double>& x) {
  const double n = std::sqrt(dot(x, x));
  for (double& v : x) v /= n;
}

// LU factorisation with partial pivoting of T - shift*I, in the layout of
// LAPACK's dgttrf. Zero pivots are replaced by a tiny perturbation, which is
// what inverse iteration wants.
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(std::span<const double> diag, std::span<const double> off, double shift,
                       double tiny)
      : n_(diag.size()), dl_(off.begin(), off.end()), d_(n_), du_(off.begin(), off.end()),
        du2_(n_ > 2 ? n_ - 2 : 0, 0.0), swapped_(n_, false) {
    for (std::size_t i = 0; i < n_; ++i) d_[i] = diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] == 0.0) d_[i] = tiny;
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n_) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    if (n_ > 0 && d_[n_ - 1] == 0.0) d_[n_ - 1] = tiny;
  }

  void solve(std::vector<double>& b) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (swapped_[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl_[i] * b[i];
    }
    for (std::size_t k = n_; k-- > 0;) {
      double v = b[k];
      if (k + 1 < n_) v -= du_[k] * b[k + 1];
      if (k + 2 < n_) v -= du2_[k] * b[k + 2];
      b[k] = v / d_[k];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<bool> swapped_;
};

double residual(std::span<const double> diag, std::span<const double> off,
                const std::vector<double>& x, double lambda) {
  const std::size_t n = diag.size();
  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double y = (diag[i] - lambda) * x[i];
    if (i > 0) y += off[i - 1] * x[i - 1];
    if (i + 1 < n) y += off[i] * x[i + 1];
    r2 += y * y;
  }
  return std::sqrt(r2);
}

double rayleigh(std::span<const double> diag, std::span<const double> off,
                const std::vector<double>& x) {
  const std::size_t n = diag.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += diag[i] * x[i] * x[i];
    if (i + 1 < n) s += 2.0 * off[i] * x[i] * x[i + 1];
  }
  return s;
}

}  // namespace

std::size_t sturm_count(std::span<const double> diagonal, std::span<const double> off_diagonal,
                        double x) {
  std::size_t count = 0;
  double q = 1.0;
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < diagonal.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : off_diagonal[i - 1] * off_diagonal[i - 1];
    q = diagonal[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

TridiagonalEigen symmetric_tridiagonal_eigen(std::span<const double> diagonal,
                                             std::span<const double> off_diagonal, double tol) {
  const std::size_t n = diagonal.size();
  if (n == 0) return {};
  if (off_diagonal.size() + 1 != n) {
    throw DimensionMismatch("off-diagonal must have one entry fewer than the diagonal");
  }
  if (!(tol > 0.0)) throw InvalidParams("eigensolver tolerance must be positive");
  for (double e : off_diagonal) {
    if (e == 0.0) throw InvalidParams("tridiagonal matrix must be unreduced (nonzero off-diagonal)");
  }

  // Gershgorin interval.
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off_diagonal[i - 1]);
    if (i + 1 < n) r += std::abs(off_diagonal[i]);
    lo = std::min(lo, diagonal[i] - r);
    hi = std::max(hi, diagonal[i] + r);
  }
  const double norm = std::max({std::abs(lo), std::abs(hi), std::numeric_limits<double>::min()});
  const double width_goal = std::max(tol, 2.0 * kEps) * norm;

  // Ascending eigenvalues by bisection.
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    double left = lo - width_goal;
    double right = hi + width_goal;
    while (right - left > width_goal) {
      const double mid = 0.5 * (left + right);
      if (mid <= left || mid >= right) break;
      if (sturm_count(diagonal, off_diagonal, mid) > k) {
        right = mid;
      } else {
        left = mid;
      }
    }
    values[k] = 0.5 * (left + right);
  }

  // Inverse iteration; vectors of close eigenvalues are kept orthogonal.
  const double tiny = kEps * norm;
  const double cluster = 1e-3 * norm;
  const double accept = 10.0 * width_goal + 100.0 * kEps * norm;
  std::vector<std::vector<double>> vectors(n);
  for (std::size_t k = 0; k < n; ++k) {
    const ShiftedTridiagonalLU lu(diagonal, off_diagonal, values[k], tiny);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3 * static_cast<double>(k));
    }
    normalize(x);
    auto iterate = [&] {
      lu.solve(x);
      for (std::size_t m = k; m-- > 0;) {
        if (values[k] - values[m] > cluster) break;
        const double proj = dot(x, vectors[m]);
        for (std::size_t i = 0; i < n; ++i) x[i] -= proj * vectors[m][i];
      }
      normalize(x);
    };
    bool converged = false;
    for (int iter = 0; iter < 8 && !converged; ++iter) {
      iterate();
      converged = residual(diagonal, off_diagonal, x, values[k]) <= accept;
    }
    // The acceptance test is met as soon as the residual reaches the shift
    // error; one more pass removes what is left of the other eigenvectors.
    if (converged) iterate();
    if (!converged) {
      throw ConvergenceFailure("inverse iteration did not converge for eigenvalue " +
                               std::to_string(values[k]));
    }
    // The Rayleigh quotient is second-order accurate; keep it inside the bracket.
    const double refined = rayleigh(diagonal, off_diagonal, x);
    if (std::abs(refined - values[k]) <= width_goal) values[k] = refined;
    vectors[k] = std::move(x);
  }

  // Refinement may swap the members of a pair closer than the bisection width.
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] > values[j]; });
  TridiagonalEigen out;
  for (std::size_t k : order) {
    out.values.push_back(values[k]);
    out.vectors.push_back(std::move(vectors[k]));
  }
  return out;
}

}  // namespace spidernet
