#pragma once

#include <string>

#include "lsopr/spectra.hpp"

namespace lsopr {

enum class SpaceKind { Psd, NonSym, Sym, Diag };

std::string to_string(SpaceKind kind);

struct MatrixSpace {
  SpaceKind kind = SpaceKind::Psd;
  int n = 1;
  int p = 1;  // column count; equals n except for NonSym

  bool symmetric() const { return kind != SpaceKind::NonSym; }
  static MatrixSpace psd(int n) { return {SpaceKind::Psd, n, n}; }
  static MatrixSpace nonsym(int n, int p) { return {SpaceKind::NonSym, n, p}; }
  static MatrixSpace sym(int n) { return {SpaceKind::Sym, n, n}; }
  static MatrixSpace diag(int n) { return {SpaceKind::Diag, n, n}; }
};

enum class FunctionKind {
  Zero,
  LpBall,            // ||lambda||_ell <= c
  TraceBox,          // L <= sum lambda <= U
  SpectralNormBall,  // max |lambda_i| <= c
  TraceLogDet,       // sum lambda <= U  and  sum log(1 + lambda_i) >= L
  NuclearBall,       // sum |lambda_i| <= z
  FrobeniusSq,       // sum lambda_i^2 <= z
  LogDetLb,          // sum log(lambda_i + alpha) >= z
};

std::string to_string(FunctionKind kind);

/// Convex spectral constraint f(lambda) <= 0 from the catalogue of shapes
/// used by the supported applications. Multi-part constraints (TraceLogDet,
/// TraceBox) fold their parts with a max.
struct SpectralFunction {
  FunctionKind kind = FunctionKind::Zero;
  double ell = 2.0;    // LpBall norm index; may be INFINITY
  double c = 0.0;      // LpBall / SpectralNormBall radius
  double lo = 0.0;     // TraceBox L / TraceLogDet L
  double hi = 0.0;     // TraceBox U / TraceLogDet U
  double z = 0.0;      // NuclearBall / FrobeniusSq / LogDetLb level
  double alpha = 0.0;  // LogDetLb shift

  static SpectralFunction zero();
  static SpectralFunction lp_ball(double ell, double c);
  static SpectralFunction trace_box(double lo, double hi);
  static SpectralFunction spectral_norm_ball(double c);
  static SpectralFunction trace_logdet(double hi, double lo);
  static SpectralFunction nuclear_ball(double z);
  static SpectralFunction frobenius_sq(double z);
  static SpectralFunction logdet_lb(double alpha, double z);

  bool sign_invariant() const;
  double eval(const Vector& lambda) const;
};

inline double f_eval(const SpectralFunction& f, const Vector& lambda) {
  return f.eval(lambda);
}

struct DomainSet {
  MatrixSpace space;
  int k = 1;
  int ktilde = 1;
  SpectralFunction f;

  static DomainSet make(MatrixSpace space, int k, SpectralFunction f);
  static DomainSet make(MatrixSpace space, int k, int ktilde, SpectralFunction f);
};

/// Strengthened rank: 1 for a bounded function of the nuclear norm,
/// conservatively k otherwise.
int infer_ktilde(const MatrixSpace& space, int k, const SpectralFunction& f);

/// Spectrum of X in the ordering the domain's space reasons about:
/// eigenvalues (descending) for Psd/Sym, diagonal entries (descending) for
/// Diag, singular values for NonSym.
Vector domain_spectrum(const Matrix& x, const DomainSet& d);

bool is_diagonal(const Matrix& x, double tol = 1e-9);

bool is_member_domain(const Matrix& x, const DomainSet& d,
                      double rank_tol = Tolerances::rank,
                      double f_tol = Tolerances::membership);

/// A spectrum vector lambda (descending, length n) with f(lambda) <= 0 and
/// support of size <= k; throws DomainError when the domain set is empty.
Vector feasible_spectrum(const SpectralFunction& f, int n, int k);

}  // namespace lsopr
