#include <hypolab/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace hypolab::spectral {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw PreconditionError("vector length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return dot(a, a); }

double DiscreteOperator::norm_bound() const {
  double r = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(offdiag[i - 1]);
    if (i + 1 < size()) row += std::abs(offdiag[i]);
    r = std::max(r, row);
  }
  return r;
}

std::vector<double> DiscreteOperator::apply(std::span<const double> u) const {
  if (u.size() != size()) throw PreconditionError("vector length does not match operator");
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    double s = diag[i] * u[i];
    if (i > 0) s += offdiag[i - 1] * u[i - 1];
    if (i + 1 < size()) s += offdiag[i] * u[i + 1];
    out[i] = s;
  }
  return out;
}

DiscreteOperator from_tridiagonal(std::vector<double> diag, std::vector<double> offdiag) {
  if (diag.empty() || offdiag.size() + 1 != diag.size()) throw PreconditionError("tridiagonal shape mismatch");
  DiscreteOperator A;
  A.nodes = diag.size() + 2;
  A.diag = std::move(diag);
  A.offdiag = std::move(offdiag);
  return A;
}

DiscreteOperator build_schrodinger(const coeff::CoeffFn& a, double zeta, double R, std::size_t nodes) {
  if (nodes < 3 || nodes % 2 == 0) throw PreconditionError("grid needs an odd node count >= 3");
  if (!(R > 0.0)) throw PreconditionError("half-length R must be positive");
  DiscreteOperator A;
  A.R = R;
  A.nodes = nodes;
  A.h = 2.0 * R / static_cast<double>(nodes - 1);
  const std::size_t m = nodes - 2;
  const double mid = static_cast<double>(nodes - 1) / 2.0;
  const double inv_h2 = 1.0 / (A.h * A.h);
  const double z2 = zeta * zeta;
  A.y.resize(m);
  A.diag.resize(m);
  A.offdiag.assign(m - 1, -inv_h2);
  for (std::size_t i = 0; i < m; ++i) {
    // Symmetric placement keeps y = 0 exact and a(y_i) = a(-y_i) bitwise for even weights.
    A.y[i] = (static_cast<double>(i + 1) - mid) * A.h;
    A.diag[i] = 2.0 * inv_h2 + a.eval(A.y[i]) * z2;
  }
  return A;
}

DiscreteOperator dirichlet_laplacian(double R, std::size_t nodes) {
  return build_schrodinger(coeff::parse_coeff("0"), 0.0, R, nodes);
}

std::size_t sturm_count(const DiscreteOperator& A, double x) {
  const std::size_t n = A.size();
  const double tiny = std::numeric_limits<double>::min();
  std::size_t count = 0;
  double q = A.diag[0] - x;
  for (std::size_t i = 0;;) {
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
    if (++i == n) break;
    const double e = A.offdiag[i - 1];
    q = A.diag[i] - x - e * e / q;
  }
  return count;
}

namespace {

std::pair<double, double> gershgorin(const DiscreteOperator& A) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < A.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(A.offdiag[i - 1]);
    if (i + 1 < A.size()) r += std::abs(A.offdiag[i]);
    lo = std::min(lo, A.diag[i] - r);
    hi = std::max(hi, A.diag[i] + r);
  }
  const double pad = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  return {lo - pad, hi + pad};
}

// k-th smallest eigenvalue (0-based) by bisection down to adjacent doubles.
double bisect(const DiscreteOperator& A, std::size_t k, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (sturm_count(A, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Solves (A - sigma I) x = b by Gaussian elimination with partial pivoting on the tridiagonal band.
std::vector<double> shifted_solve(const DiscreteOperator& A, double sigma, std::vector<double> b) {
  const std::size_t n = A.size();
  if (n == 1) {
    double d = A.diag[0] - sigma;
    if (d == 0.0) d = std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(A.diag[0]));
    b[0] /= d;
    return b;
  }
  // Rows after pivoting have up to three nonzeros: u0 (diagonal), u1, u2.
  std::vector<double> u0(n), u1(n), u2(n, 0.0);
  double d = A.diag[0] - sigma;
  double up = A.offdiag[0];
  const double guard = std::numeric_limits<double>::epsilon() * std::max(1.0, A.norm_bound());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double sub = A.offdiag[i];
    const double next_d = A.diag[i + 1] - sigma;
    const double next_up = (i + 2 < n) ? A.offdiag[i + 1] : 0.0;
    if (std::abs(d) >= std::abs(sub)) {
      if (d == 0.0) d = guard;
      const double m = sub / d;
      u0[i] = d;
      u1[i] = up;
      u2[i] = 0.0;
      b[i + 1] -= m * b[i];
      d = next_d - m * up;
      up = next_up;
    } else {
      const double m = d / sub;
      u0[i] = sub;
      u1[i] = next_d;
      u2[i] = next_up;
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= m * b[i];
      d = up - m * next_d;
      up = -m * next_up;
    }
  }
  if (d == 0.0) d = guard;
  u0[n - 1] = d;
  b[n - 1] /= u0[n - 1];
  b[n - 2] = (b[n - 2] - u1[n - 2] * b[n - 1]) / u0[n - 2];
  for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - u1[i] * b[i + 1] - u2[i] * b[i + 2]) / u0[i];
  return b;
}

void normalize(std::vector<double>& v) {
  const double s = std::sqrt(norm2(v));
  if (!(s > 0.0) || !std::isfinite(s)) throw SolverError("inverse iteration produced a degenerate vector");
  for (double& x : v) x /= s;
}

// Fix the sign so the component of largest magnitude (first on ties) is positive.
void canonical_sign(std::span<double> v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[arg]) * (1.0 + 1e-12)) arg = i;
  if (v[arg] < 0.0)
    for (double& x : v) x = -x;
}

}  // namespace

std::vector<double> smallest_eigenvalues(const DiscreteOperator& A, std::size_t k) {
  if (k < 1 || k > A.size()) {
    throw PreconditionError("requested " + std::to_string(k) + " eigenvalues of a " + std::to_string(A.size()) +
                            "x" + std::to_string(A.size()) + " operator");
  }
  const auto [lo, hi] = gershgorin(A);
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = bisect(A, i, lo, hi);
  return out;
}

Eigenpairs smallest_eigenpairs(const DiscreteOperator& A, std::size_t k) {
  Eigenpairs ep;
  ep.values = smallest_eigenvalues(A, k);
  const double scale = std::max(1.0, A.norm_bound());
  const double cluster = 1e-7 * scale;
  for (std::size_t i = 0; i < k; ++i) {
    const double lambda = ep.values[i];
    std::vector<double> v(A.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = 1.0 + 0.1 * std::sin(0.7 * static_cast<double>(j + 1) + i);
    for (int it = 0; it < 4; ++it) {
      v = shifted_solve(A, lambda, std::move(v));
      for (std::size_t p = 0; p < i; ++p) {
        if (std::abs(ep.values[p] - lambda) > cluster) continue;
        const double c = dot(v, ep.vectors[p]);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * ep.vectors[p][j];
      }
      normalize(v);
    }
    canonical_sign(v);
    ep.vectors.push_back(std::move(v));
  }
  return ep;
}

// ---------------------------------------------------------------------------

SpectralSurrogate::SpectralSurrogate(std::vector<double> values, std::vector<double> vectors, std::size_t n,
                                     double shift)
    : values_(std::move(values)), vectors_(std::move(vectors)), n_(n), shift_(shift) {
  if (values_.size() != n_ || vectors_.size() != n_ * n_) throw PreconditionError("surrogate shape mismatch");
}

std::span<const double> SpectralSurrogate::eigenvector(std::size_t k) const {
  if (k >= n_) throw PreconditionError("eigenvector index out of range");
  return {vectors_.data() + k * n_, n_};
}

std::vector<double> SpectralSurrogate::coefficients(std::span<const double> u) const {
  if (u.size() != n_) throw PreconditionError("vector length does not match surrogate");
  std::vector<double> c(n_);
  for (std::size_t k = 0; k < n_; ++k) c[k] = dot(eigenvector(k), u);
  return c;
}

std::vector<double> SpectralSurrogate::combine(std::span<const double> c) const {
  if (c.size() != n_) throw PreconditionError("coefficient length does not match surrogate");
  std::vector<double> out(n_, 0.0);
  for (std::size_t k = 0; k < n_; ++k) {
    if (c[k] == 0.0) continue;
    const auto e = eigenvector(k);
    for (std::size_t i = 0; i < n_; ++i) out[i] += c[k] * e[i];
  }
  return out;
}

SpectralSurrogate full_decomposition(const DiscreteOperator& A) {
  const std::size_t n = A.size();
  if (n > full_decomposition_budget) {
    throw PreconditionError("full decomposition limited to " + std::to_string(full_decomposition_budget) +
                            " unknowns, got " + std::to_string(n));
  }
  // Implicit-shift QL on the tridiagonal matrix; z accumulates rotations (row-major, z[i*n + k]).
  std::vector<double> d = A.diag;
  std::vector<double> e(n, 0.0);
  std::copy(A.offdiag.begin(), A.offdiag.end(), e.begin());
  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;

  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw SolverError("QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = m;
        bool underflow = false;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = z[k * n + i + 1];
            z[k * n + i + 1] = s * z[k * n + i] + c * f;
            z[k * n + i] = c * z[k * n + i] - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  const double shift = std::max(0.0, 1.0 - d[order[0]]);
  std::vector<double> values(n);
  std::vector<double> vectors(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = d[order[k]] + shift;
    for (std::size_t i = 0; i < n; ++i) vectors[k * n + i] = z[i * n + order[k]];
    canonical_sign(std::span<double>(vectors.data() + k * n, n));
  }
  return {std::move(values), std::move(vectors), n, shift};
}

std::vector<double> apply_function(const SpectralSurrogate& S, const ScalarFn& f, std::span<const double> u) {
  std::vector<double> c = S.coefficients(u);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double fk = f(S.eigenvalue(k));
    if (!std::isfinite(fk)) {
      throw DomainError("spectral function is not finite at lambda = " + std::to_string(S.eigenvalue(k)));
    }
    c[k] *= fk;
  }
  return S.combine(c);
}

double cutoff(double lambda) {
  constexpr double e = std::numbers::e;
  const double s = (e - std::abs(lambda)) / (e - 1.0);
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

double cutoff_j(int j, double lambda) { return cutoff(lambda * std::exp(-static_cast<double>(j))); }

double band(int j, double lambda) {
  if (j < 0) throw PreconditionError("band index must be nonnegative");
  return cutoff_j(j, lambda) - cutoff_j(j - 1, lambda);
}

std::vector<double> lp_project(const SpectralSurrogate& S, int j, std::span<const double> u) {
  return apply_function(S, [j](double l) { return band(j, l); }, u);
}

int last_band(const SpectralSurrogate& S) {
  const double top = S.eigenvalues().back();
  int J = 0;
  while (std::exp(static_cast<double>(J - 1)) <= top) ++J;
  return J;
}

SandwichReport lp_sandwich_check(const SpectralSurrogate& S, const ScalarFn& f, std::span<const double> u) {
  SandwichReport r;
  const std::vector<double> c = S.coefficients(u);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double fk = f(S.eigenvalue(k));
    r.middle += fk * fk * c[k] * c[k];
  }
  const int J = last_band(S);
  for (int j = 0; j <= J; ++j) {
    double pj = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double b = band(j, S.eigenvalue(k));
      pj += b * b * c[k] * c[k];
    }
    const double flo = f(std::exp(static_cast<double>(j - 1)));
    const double fhi = f(std::exp(static_cast<double>(j + 1)));
    r.lower += flo * flo * pj;
    r.upper += 2.0 * fhi * fhi * pj;
  }
  const double tol = 1e-12 * std::max(r.middle, std::numeric_limits<double>::min());
  r.holds = r.lower <= r.middle + tol && r.middle <= r.upper + tol;
  return r;
}

}  // namespace hypolab::spectral
