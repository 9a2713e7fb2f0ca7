#include "lsopr/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsopr {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Psd: return "psd";
    case SpaceKind::NonSym: return "nonsym";
    case SpaceKind::Sym: return "sym";
    case SpaceKind::Diag: return "diag";
  }
  return "?";
}

std::string to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::Zero: return "zero";
    case FunctionKind::LpBall: return "lp_ball";
    case FunctionKind::TraceBox: return "trace_box";
    case FunctionKind::SpectralNormBall: return "spectral_norm_ball";
    case FunctionKind::TraceLogDet: return "trace_logdet";
    case FunctionKind::NuclearBall: return "nuclear_ball";
    case FunctionKind::FrobeniusSq: return "frobenius_sq";
    case FunctionKind::LogDetLb: return "logdet_lb";
  }
  return "?";
}

SpectralFunction SpectralFunction::zero() { return {}; }

SpectralFunction SpectralFunction::lp_ball(double ell, double c) {
  if (ell < 1.0 || c < 0.0) throw DomainError("lp_ball: need ell >= 1 and c >= 0");
  SpectralFunction f;
  f.kind = FunctionKind::LpBall;
  f.ell = ell;
  f.c = c;
  return f;
}

SpectralFunction SpectralFunction::trace_box(double lo, double hi) {
  SpectralFunction f;
  f.kind = FunctionKind::TraceBox;
  f.lo = lo;
  f.hi = hi;
  return f;
}

SpectralFunction SpectralFunction::spectral_norm_ball(double c) {
  SpectralFunction f;
  f.kind = FunctionKind::SpectralNormBall;
  f.c = c;
  return f;
}

SpectralFunction SpectralFunction::trace_logdet(double hi, double lo) {
  SpectralFunction f;
  f.kind = FunctionKind::TraceLogDet;
  f.hi = hi;
  f.lo = lo;
  return f;
}

SpectralFunction SpectralFunction::nuclear_ball(double z) {
  SpectralFunction f;
  f.kind = FunctionKind::NuclearBall;
  f.z = z;
  return f;
}

SpectralFunction SpectralFunction::frobenius_sq(double z) {
  SpectralFunction f;
  f.kind = FunctionKind::FrobeniusSq;
  f.z = z;
  return f;
}

SpectralFunction SpectralFunction::logdet_lb(double alpha, double z) {
  if (alpha <= 0.0) throw DomainError("logdet_lb: alpha must be positive");
  SpectralFunction f;
  f.kind = FunctionKind::LogDetLb;
  f.alpha = alpha;
  f.z = z;
  return f;
}

bool SpectralFunction::sign_invariant() const {
  switch (kind) {
    case FunctionKind::Zero:
    case FunctionKind::LpBall:
    case FunctionKind::SpectralNormBall:
    case FunctionKind::NuclearBall:
    case FunctionKind::FrobeniusSq:
      return true;
    case FunctionKind::TraceBox:
    case FunctionKind::TraceLogDet:
    case FunctionKind::LogDetLb:
      return false;
  }
  return false;
}

double SpectralFunction::eval(const Vector& lambda) const {
  const double sum = lambda.sum();
  switch (kind) {
    case FunctionKind::Zero:
      return 0.0;
    case FunctionKind::LpBall: {
      if (std::isinf(ell)) return lambda.cwiseAbs().maxCoeff() - c;
      if (ell == 1.0) return lambda.cwiseAbs().sum() - c;
      double acc = 0.0;
      for (int i = 0; i < lambda.size(); ++i) acc += std::pow(std::abs(lambda(i)), ell);
      return std::pow(acc, 1.0 / ell) - c;
    }
    case FunctionKind::TraceBox:
      return std::max(sum - hi, lo - sum);
    case FunctionKind::SpectralNormBall:
      return lambda.size() > 0 ? lambda.cwiseAbs().maxCoeff() - c : -c;
    case FunctionKind::TraceLogDet: {
      double logdet = 0.0;
      for (int i = 0; i < lambda.size(); ++i) {
        const double arg = 1.0 + lambda(i);
        if (arg <= 0.0) throw DomainError("trace_logdet: log argument <= 0");
        logdet += std::log(arg);
      }
      return std::max(sum - hi, lo - logdet);
    }
    case FunctionKind::NuclearBall:
      return lambda.cwiseAbs().sum() - z;
    case FunctionKind::FrobeniusSq:
      return lambda.squaredNorm() - z;
    case FunctionKind::LogDetLb: {
      double logdet = 0.0;
      for (int i = 0; i < lambda.size(); ++i) {
        const double arg = lambda(i) + alpha;
        if (arg <= 0.0) throw DomainError("logdet_lb: log argument <= 0");
        logdet += std::log(arg);
      }
      return z - logdet;
    }
  }
  return 0.0;
}

DomainSet DomainSet::make(MatrixSpace space, int k, SpectralFunction f) {
  return make(space, k, infer_ktilde(space, k, f), f);
}

DomainSet DomainSet::make(MatrixSpace space, int k, int ktilde, SpectralFunction f) {
  if (k < 1 || k > space.n) throw DomainError("domain: need 1 <= k <= n");
  if (ktilde < 1 || ktilde > k) throw DomainError("domain: need 1 <= ktilde <= k");
  if (space.kind == SpaceKind::NonSym && space.p < space.n)
    throw DomainError("domain: nonsym space expects n <= p");
  DomainSet d;
  d.space = space;
  d.k = k;
  d.ktilde = ktilde;
  d.f = f;
  return d;
}

int infer_ktilde(const MatrixSpace& space, int k, const SpectralFunction& f) {
  (void)space;
  if (f.kind == FunctionKind::NuclearBall) return 1;
  return k;
}

bool is_diagonal(const Matrix& x, double tol) {
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j)
      if (i != j && std::abs(x(i, j)) > tol * scale) return false;
  return true;
}

Vector domain_spectrum(const Matrix& x, const DomainSet& d) {
  switch (d.space.kind) {
    case SpaceKind::Psd:
    case SpaceKind::Sym:
      return sorted_eigs(x).values;
    case SpaceKind::Diag: {
      if (!is_diagonal(x)) throw DomainError("domain_spectrum: matrix is not diagonal");
      return sorted_descending(x.diagonal());
    }
    case SpaceKind::NonSym:
      return sorted_svd(x).values;
  }
  return Vector();
}

bool is_member_domain(const Matrix& x, const DomainSet& d, double rank_tol, double f_tol) {
  if (x.rows() != d.space.n || x.cols() != d.space.p) {
    throw DomainError("is_member_domain: shape mismatch");
  }
  Vector lambda = domain_spectrum(x, d);
  if (d.space.kind == SpaceKind::Psd && lambda.size() > 0 &&
      lambda(lambda.size() - 1) < -1e-7 * (1.0 + lambda.cwiseAbs().maxCoeff())) {
    return false;
  }
  if (numeric_rank(lambda, rank_tol) > d.k) return false;
  return d.f.eval(lambda) <= f_tol;
}

Vector feasible_spectrum(const SpectralFunction& f, int n, int k) {
  Vector lambda = Vector::Zero(n);
  switch (f.kind) {
    case FunctionKind::Zero:
    case FunctionKind::LpBall:
    case FunctionKind::SpectralNormBall:
    case FunctionKind::NuclearBall:
    case FunctionKind::FrobeniusSq:
      return lambda;  // f(0) <= 0 for every ball kind
    case FunctionKind::TraceBox: {
      if (f.lo > f.hi) throw DomainError("trace_box: empty domain (L > U)");
      if (f.hi < 0.0) throw DomainError("trace_box: empty domain for nonnegative spectra");
      lambda(0) = std::max(0.0, f.lo);
      return lambda;
    }
    case FunctionKind::TraceLogDet: {
      if (f.lo <= 0.0) return lambda;
      // Equal spread minimizes the trace needed to reach the log-det floor.
      if (static_cast<double>(k) * std::log1p(f.hi / k) < f.lo - 1e-12) {
        throw DomainError("trace_logdet: empty domain");
      }
      const double v = std::expm1(f.lo / k);
      for (int i = 0; i < k; ++i) lambda(i) = v;
      return lambda;
    }
    case FunctionKind::LogDetLb: {
      if (static_cast<double>(n) * std::log(f.alpha) >= f.z) return lambda;
      const double covered = static_cast<double>(n - k) * std::log(f.alpha);
      const double v = std::exp((f.z - covered) / k) - f.alpha;
      for (int i = 0; i < k; ++i) lambda(i) = std::max(v, 0.0);
      return lambda;
    }
  }
  return lambda;
}

}  // namespace lsopr
