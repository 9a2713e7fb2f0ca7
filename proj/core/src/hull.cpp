#include "lsopr/hull.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace lsopr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Golden-section minimization of a unimodal scalar function on [lo, hi].
double golden_minimize(const std::function<double(double)>& g, double lo, double hi,
                       int iters = 200) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < iters && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = g(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

Vector least_concave_majorant(const Vector& bounds) {
  const int k = static_cast<int>(bounds.size()) - 1;
  // Upper hull (Andrew's monotone chain over points (i, bounds_i)).
  std::vector<int> hull;
  auto slope = [&](int a, int b) { return (bounds(b) - bounds(a)) / (b - a); };
  for (int i = 0; i <= k; ++i) {
    while (hull.size() >= 2 &&
           slope(hull[hull.size() - 2], hull.back()) <= slope(hull.back(), i)) {
      hull.pop_back();
    }
    hull.push_back(i);
  }
  Vector h(k + 1);
  for (std::size_t seg = 0; seg + 1 < hull.size(); ++seg) {
    const int a = hull[seg], b = hull[seg + 1];
    for (int i = a; i <= b; ++i) {
      const double t = (b == a) ? 0.0 : static_cast<double>(i - a) / (b - a);
      h(i) = (1.0 - t) * bounds(a) + t * bounds(b);
    }
  }
  if (hull.size() == 1) h(0) = bounds(0);
  return h;
}

namespace {

// x entries (length `support`) from the minimal concave prefix curve over the
// prefix sums of lambda, anchored at total mass `anchor`.
Vector envelope_profile(const Vector& lambda_prefix, int support, double anchor) {
  Vector b(support + 1);
  b(0) = 0.0;
  const int n_pts = static_cast<int>(lambda_prefix.size()) - 1;
  for (int i = 1; i < support; ++i) b(i) = i <= n_pts ? lambda_prefix(i) : lambda_prefix(n_pts);
  b(support) = anchor;
  const Vector h = least_concave_majorant(b);
  Vector x(support);
  for (int i = 0; i < support; ++i) x(i) = h(i + 1) - h(i);
  return x;
}

// Exact-majorization certificate on a nonnegative descending spectrum
// (Psd space): support ktilde, total pinned to the spectrum's sum.
HullCertificate exact_nonneg_certificate(const Vector& lambda, const DomainSet& d) {
  const int n = d.space.n;
  const Vector s = prefix_sums(lambda);
  HullCertificate cert;
  cert.x = Vector::Zero(n);
  cert.x.head(d.ktilde) = envelope_profile(s, d.ktilde, s(s.size() - 1));
  cert.f_value = d.f.eval(cert.x);
  return cert;
}

// Weak-majorization certificate on singular values: support ktilde, total
// mass free (>= nuclear norm). Monotone kinds take the minimal mass; the
// trace-sensitive kinds search the scalar mass.
HullCertificate weak_certificate(const Vector& sigma, const DomainSet& d) {
  const int n = static_cast<int>(sigma.size());
  const Vector s = prefix_sums(sigma);
  const double nuc = s(n);
  auto x_of = [&](double mass) {
    Vector x = Vector::Zero(d.space.n);
    x.head(d.ktilde) = envelope_profile(s, d.ktilde, mass);
    return x;
  };
  double mass = nuc;
  switch (d.f.kind) {
    case FunctionKind::TraceBox:
      mass = std::max(nuc, 0.5 * (d.f.lo + d.f.hi));
      break;
    case FunctionKind::TraceLogDet: {
      const double hi = std::max(nuc, d.f.hi) + 1.0;
      auto g = [&](double t) { return d.f.eval(x_of(t)); };
      mass = golden_minimize(g, nuc, hi);
      break;
    }
    case FunctionKind::LogDetLb: {
      const double hi = nuc + 1e6 * (1.0 + nuc);
      auto g = [&](double t) { return d.f.eval(x_of(t)); };
      mass = golden_minimize(g, nuc, hi);
      break;
    }
    default:
      break;  // sign-invariant kinds are nondecreasing in the mass
  }
  HullCertificate cert;
  cert.x = x_of(mass);
  cert.f_value = d.f.eval(cert.x);
  return cert;
}

// Branch certificate for symmetric-indefinite spectra: zero block at
// positions [s, s+n-ktilde-1] (1-based), exact majorization of lambda.
std::optional<HullCertificate> branch_certificate(const Vector& lambda, const DomainSet& d,
                                                  int s) {
  const int n = d.space.n;
  const int kt = d.ktilde;
  const double tol = Tolerances::majorization;
  const Vector pre = prefix_sums(lambda);
  const double total = pre(n);
  const double peak = pre.maxCoeff();

  const int head = s - 1;            // entries 1..s-1, all >= 0
  const int tail = kt + 1 - s;       // entries s+n-kt..n, all <= 0
  double flat;
  if (head == 0) {
    if (peak > tol) return std::nullopt;
    flat = 0.0;
  } else if (tail == 0) {
    if (peak > total + tol) return std::nullopt;
    flat = total;
  } else {
    flat = peak;
  }

  Vector x = Vector::Zero(n);
  if (head > 0) {
    Vector b(head + 1);
    b(0) = 0.0;
    for (int i = 1; i < head; ++i) b(i) = pre(i);
    b(head) = flat;
    const Vector h = least_concave_majorant(b);
    for (int i = 0; i < head; ++i) x(i) = h(i + 1) - h(i);
  }
  if (tail > 0) {
    const int base = s + n - kt - 1;  // last zero position (1-based)
    Vector b(tail + 1);
    b(0) = flat;
    for (int j = 1; j < tail; ++j) b(j) = pre(base + j);
    b(tail) = total;
    const Vector h = least_concave_majorant(b);
    for (int j = 0; j < tail; ++j) x(base + j) = h(j + 1) - h(j);
  }
  HullCertificate cert;
  cert.x = x;
  cert.branch = s;
  cert.f_value = d.f.eval(x);
  return cert;
}

}  // namespace

std::optional<HullCertificate> spectrum_certificate(const Vector& lambda, const DomainSet& d,
                                                    std::optional<int> forced_branch) {
  switch (d.space.kind) {
    case SpaceKind::Psd:
      return exact_nonneg_certificate(lambda, d);
    case SpaceKind::NonSym:
      return weak_certificate(lambda, d);
    case SpaceKind::Sym:
    case SpaceKind::Diag: {
      if (d.f.sign_invariant() && !forced_branch) {
        Vector abs = lambda.cwiseAbs();
        return weak_certificate(sorted_descending(abs), d);
      }
      if (d.ktilde >= d.space.n) {
        // No zero block; the spectrum is its own certificate.
        HullCertificate cert;
        cert.x = lambda;
        cert.branch = forced_branch.value_or(1);
        cert.f_value = d.f.eval(lambda);
        return cert;
      }
      std::optional<HullCertificate> best;
      const int s_lo = forced_branch.value_or(1);
      const int s_hi = forced_branch.value_or(d.ktilde + 1);
      for (int s = s_lo; s <= s_hi; ++s) {
        auto cert = branch_certificate(lambda, d, s);
        if (!cert) continue;
        if (!best || cert->f_value < best->f_value - 1e-12) best = cert;
      }
      return best;
    }
  }
  return std::nullopt;
}

std::optional<HullCertificate> hull_certificate(const Matrix& x, const DomainSet& d,
                                                std::optional<int> forced_branch) {
  return spectrum_certificate(domain_spectrum(x, d), d, forced_branch);
}

bool is_in_hull(const Matrix& x, const DomainSet& d, double f_tol) {
  auto cert = hull_certificate(x, d);
  return cert.has_value() && cert->f_value <= f_tol;
}

}  // namespace lsopr
