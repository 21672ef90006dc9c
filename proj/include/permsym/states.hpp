#pragma once

#include "permsym/oracle.hpp"
#include "permsym/perturb.hpp"
#include "permsym/symspace.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace permsym {

inline void require_excitations(int N, int M)
{
  if (N < 1) throw std::invalid_argument("state: N must be at least 1");
  if (M < 1 || M > N) throw std::invalid_argument("state: need 1 <= M <= N");
}

// M excited atoms out of N, no interatomic coherence.
inline SymOpVector<Rational> mixed_state(int N, int M)
{
  require_excitations(N, M);
  return SymOpVector<Rational>(N, MultiIndex{N - M, 0, 0, M}, Rational(1));
}

// Symmetric Dicke projector |D_M><D_M|; coefficient C(M,i) C(N-M,i) at (N-M-i, i, i, M-i).
inline SymOpVector<Rational> dicke_state(int N, int M)
{
  require_excitations(N, M);
  SymOpVector<Rational> v(N);
  for (int i = 0; i <= std::min(M, N - M); ++i)
    v.add({N - M - i, i, i, M - i}, Rational(binomial(M, i) * binomial(N - M, i)));
  return v;
}

// Multinomial coefficients at (N-M, i, j, M-i-j) as printed; not a positive operator (see tests).
inline SymOpVector<Rational> multinomial_dicke_state(int N, int M)
{
  require_excitations(N, M);
  SymOpVector<Rational> v(N);
  for (int i = 0; i <= M; ++i)
    for (int j = 0; i + j <= M; ++j)
      v.add({N - M, i, j, M - i - j}, Rational(factorial(M) / (factorial(i) * factorial(j) * factorial(M - i - j))));
  return v;
}

inline SymOpVector<Rational> initial_state(StateKind kind, int N, int M)
{
  return kind == StateKind::mixed ? mixed_state(N, M) : dicke_state(N, M);
}

struct PhysicalityReport {
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;
  double trace = 0.0;
  double min_eigenvalue = 0.0;
  double purity = 0.0;

  bool physical() const { return hermitian && unit_trace && positive; }
};

inline PhysicalityReport check_physical(const SymOpVector<Rational>& v, double tol = 1e-10)
{
  const auto s = oracle::embed(v);
  PhysicalityReport r;
  r.hermitian = (s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff() < tol;
  const auto tr = s.rho.trace();
  r.trace = tr.real();
  r.unit_trace = std::abs(tr - 1.0) < tol;
  const Eigen::MatrixXcd h = 0.5 * (s.rho + s.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = eig.eigenvalues().minCoeff();
  r.positive = r.min_eigenvalue > -tol;
  r.purity = (s.rho * s.rho).trace().real();
  return r;
}

}  // namespace permsym
