#pragma once

#include <hypolab/coeff.hpp>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hypolab::spectral {

/// Symmetric tridiagonal matrix on the interior nodes of a uniform Dirichlet grid.
/// `nodes` counts grid points including both boundary points, so the matrix has nodes - 2 rows.
struct DiscreteOperator {
  double R = 0.0;
  std::size_t nodes = 0;
  double h = 0.0;
  std::vector<double> y;  // interior node coordinates
  std::vector<double> diag;
  std::vector<double> offdiag;  // size() - 1 entries

  std::size_t size() const noexcept { return diag.size(); }
  /// Gershgorin bound on the spectral radius.
  double norm_bound() const;
  std::vector<double> apply(std::span<const double> u) const;
};

/// Plain matrix without grid metadata.
DiscreteOperator from_tridiagonal(std::vector<double> diag, std::vector<double> offdiag);

/// H_zeta = -d^2/dy^2 + a(y) zeta^2 on [-R, R] with Dirichlet ends; nodes must be odd and >= 3.
DiscreteOperator build_schrodinger(const coeff::CoeffFn& a, double zeta, double R, std::size_t nodes);
DiscreteOperator dirichlet_laplacian(double R, std::size_t nodes);

/// Number of eigenvalues strictly below x (Sturm sequence).
std::size_t sturm_count(const DiscreteOperator& A, double x);

/// The k smallest eigenvalues in ascending order by Sturm bisection, each to
/// absolute accuracy 1e-10 max(1, |lambda|) or the floating-point limit.
std::vector<double> smallest_eigenvalues(const DiscreteOperator& A, std::size_t k);

struct Eigenpairs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // unit Euclidean norm
};

/// Smallest k eigenpairs; vectors by inverse iteration, reorthogonalised within clusters.
Eigenpairs smallest_eigenpairs(const DiscreteOperator& A, std::size_t k);

inline constexpr std::size_t full_decomposition_budget = 4096;

/// Complete eigendecomposition of B = A + shift I with shift = max(0, 1 - lambda_1), so lambda_1 >= 1.
class SpectralSurrogate {
 public:
  SpectralSurrogate(std::vector<double> values, std::vector<double> vectors, std::size_t n, double shift);

  std::size_t size() const noexcept { return n_; }
  double shift() const noexcept { return shift_; }
  const std::vector<double>& eigenvalues() const noexcept { return values_; }
  double eigenvalue(std::size_t k) const { return values_.at(k); }
  /// k-th orthonormal eigenvector.
  std::span<const double> eigenvector(std::size_t k) const;

  /// <u, e_k> for all k.
  std::vector<double> coefficients(std::span<const double> u) const;
  /// sum_k c_k e_k.
  std::vector<double> combine(std::span<const double> c) const;

 private:
  std::vector<double> values_;
  std::vector<double> vectors_;  // column k holds e_k, stored contiguously
  std::size_t n_;
  double shift_;
};

SpectralSurrogate full_decomposition(const DiscreteOperator& A);

using ScalarFn = std::function<double(double)>;

/// f(B)u = sum_k f(lambda_k) <u, e_k> e_k.
std::vector<double> apply_function(const SpectralSurrogate& S, const ScalarFn& f, std::span<const double> u);

/// Smooth even cutoff: 1 on [-1, 1], 0 outside [-e, e], nonincreasing in |lambda|.
double cutoff(double lambda);
/// Phi_j(lambda) = Phi(lambda e^-j).
double cutoff_j(int j, double lambda);
/// psi_j = Phi_j - Phi_{j-1}; supported in e^{j-1} <= |lambda| <= e^{j+1}.
double band(int j, double lambda);

/// P_j u = psi_j(B) u.
std::vector<double> lp_project(const SpectralSurrogate& S, int j, std::span<const double> u);
/// Smallest J with e^{J-1} > lambda_max; bands beyond J vanish on the spectrum.
int last_band(const SpectralSurrogate& S);

struct SandwichReport {
  double lower = 0.0;   // sum_j f(e^{j-1})^2 |P_j u|^2
  double middle = 0.0;  // |f(B) u|^2
  double upper = 0.0;   // 2 sum_j f(e^{j+1})^2 |P_j u|^2
  double slack_lower() const { return middle - lower; }
  double slack_upper() const { return upper - middle; }
  bool holds = false;
};

/// Evaluates both sides of the band sandwich for nondecreasing f >= 0.
SandwichReport lp_sandwich_check(const SpectralSurrogate& S, const ScalarFn& f, std::span<const double> u);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace hypolab::spectral
