#include "lsopr/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace lsopr {

namespace {

constexpr double kTiny = 1e-14;

double bisect_increasing(const std::function<double(double)>& g, double lo, double hi,
                         int iters = 200) {
  // g increasing with g(lo) <= 0 <= g(hi); returns the root.
  double a = lo, b = hi;
  for (int it = 0; it < iters && (b - a) > 1e-15 * (1.0 + std::abs(b)); ++it) {
    const double m = 0.5 * (a + b);
    if (g(m) <= 0.0) a = m;
    else b = m;
  }
  return 0.5 * (a + b);
}

VectorPricing lnorm_on_gains(const Vector& gains, int n, double c, double ell) {
  // maximize gains . mu over mu >= 0, ||mu||_ell <= c; gains length = support.
  const int k = static_cast<int>(gains.size());
  VectorPricing out;
  out.lambda = Vector::Zero(n);
  Vector pos = gains.cwiseMax(0.0);
  if (pos.maxCoeff() <= 0.0 || c <= 0.0) {
    out.value = 0.0;
    return out;
  }
  if (std::isinf(ell)) {  // box: mu_i = c wherever the gain is positive
    for (int i = 0; i < k; ++i)
      if (gains(i) > 0.0) out.lambda(i) = c;
    out.value = c * pos.sum();
    return out;
  }
  if (ell == 1.0) {  // all mass on the best gain
    int best = 0;
    pos.maxCoeff(&best);
    out.lambda(best) = c;
    out.value = c * pos(best);
    return out;
  }
  const double q = ell / (ell - 1.0);
  double denom = 0.0;
  for (int i = 0; i < k; ++i) denom += std::pow(pos(i), q);
  for (int i = 0; i < k; ++i) {
    out.lambda(i) = c * std::pow(std::pow(pos(i), q) / denom, 1.0 / ell);
  }
  out.value = out.lambda.head(k).dot(gains);
  return out;
}

// TraceLogDet: maximize beta . lambda s.t. lambda >= 0 on support k,
// sum lambda <= U, sum log(1+lambda) >= L.
VectorPricing price_trace_logdet(const Vector& beta, int k, double U, double L) {
  const int n = static_cast<int>(beta.size());
  VectorPricing out;
  out.lambda = Vector::Zero(n);
  const double b1 = beta(0);
  if (L <= 1e-15) {
    if (b1 > 0.0) {
      out.lambda(0) = U;
      out.value = b1 * U;
    }
    return out;
  }
  if (static_cast<double>(k) * std::log1p(U / k) < L - 1e-12) {
    throw DomainError("trace_logdet pricing: empty domain");
  }
  if (b1 > 0.0 && std::log1p(U) >= L) {
    out.lambda(0) = U;
    out.value = b1 * U;
    return out;
  }
  // Zero-cost coordinate shortcut: the log floor can be met for free.
  for (int i = 0; i < k; ++i) {
    if (std::abs(beta(i)) <= kTiny && b1 <= kTiny) {
      out.lambda(i) = std::expm1(L);
      out.value = 0.0;
      return out;
    }
  }
  if (b1 <= 0.0) {
    // Water-filling on the log floor: lambda_i = (nu/|beta_i| - 1)_+.
    auto fill = [&](double nu) {
      Vector lam = Vector::Zero(n);
      for (int i = 0; i < k; ++i) {
        lam(i) = std::max(0.0, nu / std::abs(beta(i)) - 1.0);
      }
      return lam;
    };
    auto logsum = [&](double nu) {
      const Vector lam = fill(nu);
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += std::log1p(lam(i));
      return acc - L;
    };
    double hi = std::abs(beta(0)) + 1.0;
    while (logsum(hi) < 0.0) hi *= 2.0;
    const double nu = bisect_increasing(logsum, 0.0, hi);
    Vector lam = fill(nu);
    if (lam.sum() <= U + 1e-12) {
      out.lambda = lam;
      out.value = lam.dot(beta);
      return out;
    }
  }
  // Both constraints bind: nested bisection on (mu, nu) with
  // lambda_i = (nu/(mu - beta_i) - 1)_+; the trace pins nu given mu and the
  // log-det sum is increasing in mu.
  auto lambda_of = [&](double mu, double nu) {
    Vector lam = Vector::Zero(n);
    for (int i = 0; i < k; ++i) {
      const double gap = mu - beta(i);
      if (gap <= kTiny) {
        lam(i) = U;  // saturate; only transient inside the bracket search
      } else {
        lam(i) = std::max(0.0, nu / gap - 1.0);
      }
    }
    return lam;
  };
  auto nu_for_trace = [&](double mu) {
    auto trace_gap = [&](double nu) { return lambda_of(mu, nu).sum() - U; };
    double hi = (mu + std::abs(beta(0)) + 1.0) * (U + 1.0);
    while (trace_gap(hi) < 0.0) hi *= 2.0;
    return bisect_increasing(trace_gap, 0.0, hi);
  };
  auto log_gap = [&](double mu) {
    const Vector lam = lambda_of(mu, nu_for_trace(mu));
    double acc = 0.0;
    for (int i = 0; i < k; ++i) acc += std::log1p(lam(i));
    return acc - L;
  };
  double mu_lo = std::max(b1, 0.0) + 1e-9 * (1.0 + std::abs(b1));
  double mu_hi = mu_lo + 1.0;
  while (log_gap(mu_hi) < 0.0) mu_hi = mu_lo + 2.0 * (mu_hi - mu_lo);
  const double mu = bisect_increasing(log_gap, mu_lo, mu_hi);
  out.lambda = lambda_of(mu, nu_for_trace(mu));
  out.value = out.lambda.dot(beta);
  return out;
}

// LogDetLb: maximize beta . lambda s.t. lambda >= 0 on support k,
// sum_i log(lambda_i + alpha) >= z (counting the n-k off-support zeros).
VectorPricing price_logdet_lb(const Vector& beta, int k, double alpha, double z, int n) {
  VectorPricing out;
  out.lambda = Vector::Zero(n);
  if (beta(0) > kTiny) {
    out.status = PricingStatus::Unbounded;
    out.ray_coord = 0;
    return out;
  }
  const double slack_at_zero = static_cast<double>(n) * std::log(alpha) - z;
  if (slack_at_zero >= 0.0) return out;  // lambda = 0 feasible, value 0
  const double covered = static_cast<double>(n - k) * std::log(alpha);
  for (int i = 0; i < k; ++i) {
    if (std::abs(beta(i)) <= kTiny) {
      out.lambda(i) = std::exp(z - covered - static_cast<double>(k - 1) * std::log(alpha)) - alpha;
      out.value = 0.0;
      return out;
    }
  }
  auto fill = [&](double nu) {
    Vector lam = Vector::Zero(n);
    for (int i = 0; i < k; ++i) lam(i) = std::max(0.0, nu / std::abs(beta(i)) - alpha);
    return lam;
  };
  auto logsum = [&](double nu) {
    const Vector lam = fill(nu);
    double acc = covered;
    for (int i = 0; i < k; ++i) acc += std::log(lam(i) + alpha);
    return acc - z;
  };
  double hi = std::abs(beta(0)) * (alpha + 1.0) + 1.0;
  while (logsum(hi) < 0.0) hi *= 2.0;
  const double nu = bisect_increasing(logsum, 0.0, hi);
  out.lambda = fill(nu);
  out.value = out.lambda.dot(beta);
  return out;
}

}  // namespace

VectorPricing pricing_vector_lnorm(const Vector& beta, int k, double c, double ell,
                                   SpaceKind space) {
  const int n = static_cast<int>(beta.size());
  const int kk = std::min(k, n);
  VectorPricing out;
  switch (space) {
    case SpaceKind::Psd: {
      out = lnorm_on_gains(beta.head(kk), n, c, ell);
      return out;
    }
    case SpaceKind::NonSym: {
      out = lnorm_on_gains(beta.head(kk), n, c, ell);
      return out;
    }
    case SpaceKind::Sym:
    case SpaceKind::Diag: {
      // beta sorted by magnitude descending; lambda carries beta's signs.
      out = lnorm_on_gains(beta.head(kk).cwiseAbs(), n, c, ell);
      for (int i = 0; i < kk; ++i) {
        if (beta(i) < 0.0) out.lambda(i) = -out.lambda(i);
      }
      return out;
    }
  }
  return out;
}

VectorPricing pricing_vector_generic(const Vector& beta, int k, const SpectralFunction& f) {
  const int n = static_cast<int>(beta.size());
  const int kk = std::min(k, n);
  VectorPricing out;
  out.lambda = Vector::Zero(n);
  switch (f.kind) {
    case FunctionKind::Zero: {
      if (beta(0) > kTiny) {
        out.status = PricingStatus::Unbounded;
        out.ray_coord = 0;
      }
      return out;
    }
    case FunctionKind::LpBall:
    case FunctionKind::SpectralNormBall:
    case FunctionKind::NuclearBall:
    case FunctionKind::FrobeniusSq: {
      double ell = f.ell, c = f.c;
      if (f.kind == FunctionKind::SpectralNormBall) {
        ell = std::numeric_limits<double>::infinity();
        c = f.c;
      } else if (f.kind == FunctionKind::NuclearBall) {
        ell = 1.0;
        c = f.z;
      } else if (f.kind == FunctionKind::FrobeniusSq) {
        ell = 2.0;
        c = std::sqrt(std::max(f.z, 0.0));
      }
      if (std::isinf(ell) || ell == 1.0) {
        return pricing_vector_lnorm(beta, kk, c, ell, SpaceKind::Psd);
      }
      // KKT profile with the normalization multiplier found by bisection.
      Vector profile = Vector::Zero(kk);
      for (int i = 0; i < kk; ++i) {
        profile(i) = std::pow(std::max(beta(i), 0.0), 1.0 / (ell - 1.0));
      }
      const double pmax = profile.maxCoeff();
      if (pmax <= 0.0 || c <= 0.0) return out;
      auto norm_gap = [&](double tau) {
        double acc = 0.0;
        for (int i = 0; i < kk; ++i) acc += std::pow(tau * profile(i), ell);
        return std::pow(acc, 1.0 / ell) - c;
      };
      double hi = c / pmax * (kk + 1.0);
      const double tau = bisect_increasing(norm_gap, 0.0, hi);
      for (int i = 0; i < kk; ++i) out.lambda(i) = tau * profile(i);
      out.value = out.lambda.dot(beta);
      return out;
    }
    case FunctionKind::TraceBox: {
      if (f.lo > f.hi || f.hi < 0.0) throw DomainError("trace_box pricing: empty domain");
      const double mass = beta(0) >= 0.0 ? f.hi : std::max(f.lo, 0.0);
      out.lambda(0) = mass;
      out.value = beta(0) * mass;
      return out;
    }
    case FunctionKind::TraceLogDet:
      return price_trace_logdet(beta, kk, f.hi, f.lo);
    case FunctionKind::LogDetLb:
      return price_logdet_lb(beta, kk, f.alpha, f.z, n);
  }
  return out;
}

VectorPricing pricing_branch_vector(const Vector& beta, int cap, int s,
                                    const SpectralFunction& f) {
  const int n = static_cast<int>(beta.size());
  const int head = s - 1;
  const int tail = cap + 1 - s;
  const int tail_base = s + n - cap - 1;  // last zero position, 1-based
  VectorPricing out;
  out.lambda = Vector::Zero(n);

  // Per-unit-magnitude gains: head slots pay beta_1.., tail slots pay -beta_n..
  Vector gains(head + tail);
  for (int i = 0; i < head; ++i) gains(i) = beta(i);
  for (int j = 0; j < tail; ++j) gains(head + j) = -beta(n - 1 - j);
  auto scatter = [&](const Vector& mag) {
    // mag: magnitudes aligned with `gains`; map back to signed positions.
    for (int i = 0; i < head; ++i) out.lambda(i) = mag(i);
    for (int j = 0; j < tail; ++j) out.lambda(n - 1 - j) = -mag(head + j);
  };

  switch (f.kind) {
    case FunctionKind::Zero: {
      if (gains.size() > 0 && gains.maxCoeff() > kTiny) {
        int idx = 0;
        gains.maxCoeff(&idx);
        out.status = PricingStatus::Unbounded;
        out.ray_coord = idx < head ? idx : n - 1 - (idx - head);
        out.ray_sign = idx < head ? 1.0 : -1.0;
      }
      return out;
    }
    case FunctionKind::LpBall:
    case FunctionKind::SpectralNormBall:
    case FunctionKind::NuclearBall:
    case FunctionKind::FrobeniusSq: {
      double ell = f.ell, c = f.c;
      if (f.kind == FunctionKind::SpectralNormBall) ell = std::numeric_limits<double>::infinity();
      if (f.kind == FunctionKind::NuclearBall) { ell = 1.0; c = f.z; }
      if (f.kind == FunctionKind::FrobeniusSq) { ell = 2.0; c = std::sqrt(std::max(f.z, 0.0)); }
      if (gains.size() == 0) return out;
      VectorPricing inner = lnorm_on_gains(gains, static_cast<int>(gains.size()), c, ell);
      scatter(inner.lambda.head(gains.size()));
      out.value = inner.value;
      return out;
    }
    case FunctionKind::TraceBox: {
      const double gp = head > 0 ? beta(0) : 0.0;
      const double gn = tail > 0 ? -beta(n - 1) : 0.0;
      if (head > 0 && tail > 0 && gp + gn > kTiny) {
        out.status = PricingStatus::Unbounded;
        out.ray_paired = true;
        return out;
      }
      // Net mass D = sum(lambda) in [L, U], positive part on position 1,
      // negative part on position n; value = gp*max(D,0) + gn*max(-D,0).
      double d_lo = f.lo, d_hi = f.hi;
      if (head == 0) d_hi = std::min(d_hi, 0.0);
      if (tail == 0) d_lo = std::max(d_lo, 0.0);
      if (d_lo > d_hi) {
        out.status = PricingStatus::Infeasible;
        return out;
      }
      auto value_of = [&](double dd) { return gp * std::max(dd, 0.0) + gn * std::max(-dd, 0.0); };
      double best_d = d_lo;
      for (double cand : {d_lo, d_hi, 0.0}) {
        if (cand < d_lo || cand > d_hi) continue;
        if (value_of(cand) > value_of(best_d)) best_d = cand;
      }
      Vector mag = Vector::Zero(head + tail);
      if (best_d >= 0.0 && head > 0) mag(0) = best_d;
      if (best_d < 0.0 && tail > 0) mag(head) = -best_d;
      scatter(mag);
      out.value = value_of(best_d);
      return out;
    }
    case FunctionKind::TraceLogDet:
    case FunctionKind::LogDetLb:
      throw DomainError("branch pricing: log-domain constraint undefined on indefinite spectra");
  }
  return out;
}

namespace {

Matrix recompose(const SpectrumOrdered& dec, const Vector& lambda) {
  return dec.left_basis * lambda.asDiagonal() * dec.right_basis.transpose();
}

PricingOutcome finish_matrix(const SpectrumOrdered& dec, const VectorPricing& vp) {
  PricingOutcome out;
  if (vp.status == PricingStatus::Unbounded) {
    out.status = PricingStatus::Unbounded;
    Matrix dir;
    if (vp.ray_paired) {
      const int n = static_cast<int>(dec.values.size());
      dir = dec.left_basis.col(0) * dec.right_basis.col(0).transpose() -
            dec.left_basis.col(n - 1) * dec.right_basis.col(n - 1).transpose();
    } else {
      dir = vp.ray_sign * dec.left_basis.col(vp.ray_coord) *
            dec.right_basis.col(vp.ray_coord).transpose();
    }
    out.direction = dir / dir.norm();
    return out;
  }
  out.status = vp.status;
  out.x = recompose(dec, vp.lambda);
  out.value = vp.value;
  return out;
}

}  // namespace

PricingOutcome pricing_matrix(const Matrix& a_tilde, const DomainSet& d) {
  switch (d.space.kind) {
    case SpaceKind::Psd: {
      SpectrumOrdered dec = sorted_eigs(a_tilde);
      VectorPricing vp = d.f.kind == FunctionKind::LpBall
                             ? pricing_vector_lnorm(dec.values, d.k, d.f.c, d.f.ell, SpaceKind::Psd)
                             : pricing_vector_generic(dec.values, d.k, d.f);
      return finish_matrix(dec, vp);
    }
    case SpaceKind::NonSym: {
      SpectrumOrdered dec = sorted_svd(a_tilde);
      VectorPricing vp = d.f.kind == FunctionKind::LpBall
                             ? pricing_vector_lnorm(dec.values, d.k, d.f.c, d.f.ell, SpaceKind::NonSym)
                             : pricing_vector_generic(dec.values, d.k, d.f);
      return finish_matrix(dec, vp);
    }
    case SpaceKind::Sym:
    case SpaceKind::Diag: {
      SpectrumOrdered dec;
      if (d.space.kind == SpaceKind::Sym) {
        dec = sorted_eigs(a_tilde);
      } else {
        if (a_tilde.rows() != a_tilde.cols()) throw DomainError("pricing: diag space expects square");
        // Only the diagonal of A~ matters on the diagonal carrier.
        const int n = d.space.n;
        Vector diag = a_tilde.diagonal();
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return diag(a) > diag(b); });
        dec.values.resize(n);
        dec.left_basis = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
          dec.values(i) = diag(order[i]);
          dec.left_basis(order[i], i) = 1.0;
        }
        dec.right_basis = dec.left_basis;
      }
      if (d.f.sign_invariant()) {
        // Sort by magnitude, keep signs; solve the magnitude problem.
        const int n = static_cast<int>(dec.values.size());
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
          return std::abs(dec.values(a)) > std::abs(dec.values(b));
        });
        SpectrumOrdered mdec;
        mdec.values.resize(n);
        mdec.left_basis.resize(dec.left_basis.rows(), n);
        for (int i = 0; i < n; ++i) {
          mdec.values(i) = dec.values(order[i]);
          mdec.left_basis.col(i) = dec.left_basis.col(order[i]);
        }
        mdec.right_basis = mdec.left_basis;
        VectorPricing vp;
        if (d.f.kind == FunctionKind::LpBall) {
          vp = pricing_vector_lnorm(mdec.values, d.k, d.f.c, d.f.ell, SpaceKind::Sym);
        } else {
          vp = pricing_vector_generic(mdec.values.cwiseAbs(), d.k, d.f);
          if (vp.status == PricingStatus::Optimal) {
            for (int i = 0; i < vp.lambda.size(); ++i) {
              if (mdec.values(i) < 0.0) vp.lambda(i) = -vp.lambda(i);
            }
            vp.value = vp.lambda.dot(mdec.values);
          } else if (vp.status == PricingStatus::Unbounded) {
            // Ray follows the sign of the dominating coefficient.
            vp.ray_sign = mdec.values(vp.ray_coord) < 0.0 ? -1.0 : 1.0;
          }
        }
        return finish_matrix(mdec, vp);
      }
      // Non-sign-invariant: search all zero-block positions with cap k.
      std::optional<PricingOutcome> best;
      for (int s = 1; s <= d.k + 1; ++s) {
        VectorPricing vp = pricing_branch_vector(dec.values, d.k, s, d.f);
        if (vp.status == PricingStatus::Infeasible) continue;
        if (vp.status == PricingStatus::Unbounded) return finish_matrix(dec, vp);
        PricingOutcome cand = finish_matrix(dec, vp);
        if (!best || cand.value > best->value) best = cand;
      }
      if (!best) {
        PricingOutcome out;
        out.status = PricingStatus::Infeasible;
        return out;
      }
      return *best;
    }
  }
  return {};
}

PricingOutcome pricing_sym_indef(const Matrix& a_tilde, const DomainSet& d, int s) {
  if (d.space.kind != SpaceKind::Sym && d.space.kind != SpaceKind::Diag) {
    throw DomainError("pricing_sym_indef: symmetric or diagonal space expected");
  }
  SpectrumOrdered dec;
  if (d.space.kind == SpaceKind::Sym) {
    dec = sorted_eigs(a_tilde);
  } else {
    const int n = d.space.n;
    Vector diag = a_tilde.diagonal();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return diag(a) > diag(b); });
    dec.values.resize(n);
    dec.left_basis = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      dec.values(i) = diag(order[i]);
      dec.left_basis(order[i], i) = 1.0;
    }
    dec.right_basis = dec.left_basis;
  }
  VectorPricing vp = pricing_branch_vector(dec.values, d.ktilde, s, d.f);
  if (vp.status == PricingStatus::Infeasible) {
    PricingOutcome out;
    out.status = PricingStatus::Infeasible;
    return out;
  }
  return finish_matrix(dec, vp);
}

}  // namespace lsopr
