#include "tilenet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "tilenet/geometry.hpp"  // fit_slope

namespace tilenet {

namespace {
std::int64_t checked_i64(__int128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    fail(ErrorCode::CapacityExceeded, std::string(what) + " overflows 64 bits");
  return static_cast<std::int64_t>(v);
}
}  // namespace

SubstMatrix SubstMatrix::multiply(const SubstMatrix& rhs) const {
  if (n_ != rhs.n_) fail(ErrorCode::InvalidArgument, "matrix size mismatch");
  SubstMatrix out(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      __int128 acc = 0;
      for (int k = 0; k < n_; ++k)
        acc += static_cast<__int128>((*this)(i, k)) * rhs(k, j);
      out(i, j) = checked_i64(acc, "matrix product entry");
    }
  return out;
}

SubstMatrix SubstMatrix::power(int m) const {
  if (m < 0) fail(ErrorCode::InvalidArgument, "matrix power must be >= 0");
  SubstMatrix result(n_);
  for (int i = 0; i < n_; ++i) result(i, i) = 1;
  SubstMatrix base = *this;
  while (m > 0) {
    if (m & 1) result = result.multiply(base);
    m >>= 1;
    if (m) base = base.multiply(base);
  }
  return result;
}

std::vector<std::int64_t> SubstMatrix::apply(
    const std::vector<std::int64_t>& v) const {
  if (static_cast<int>(v.size()) != n_)
    fail(ErrorCode::InvalidArgument, "vector size mismatch");
  std::vector<std::int64_t> out(n_);
  for (int i = 0; i < n_; ++i) {
    __int128 acc = 0;
    for (int j = 0; j < n_; ++j)
      acc += static_cast<__int128>((*this)(i, j)) * v[j];
    out[i] = checked_i64(acc, "matrix-vector entry");
  }
  return out;
}

SubstMatrix substitution_matrix(const SubstitutionRule& rule) {
  SubstMatrix a(rule.tile_count());
  for (int j = 1; j <= rule.tile_count(); ++j)
    for (const auto& c : rule.children_of(j)) a(c.tileId - 1, j - 1) += 1;
  return a;
}

int primitivity_witness(const SubstMatrix& a) {
  const int n = a.size();
  std::vector<char> p(n * n), base(n * n);
  for (int i = 0; i < n * n; ++i) base[i] = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) base[i * n + j] = a(i, j) > 0;
  p = base;
  const int wielandt = n <= 1 ? 1 : n * n - 2 * n + 2;
  for (int m = 1; m <= wielandt; ++m) {
    bool all = true;
    for (char b : p)
      if (!b) {
        all = false;
        break;
      }
    if (all) return m;
    std::vector<char> next(n * n, 0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (p[i * n + k])
          for (int j = 0; j < n; ++j)
            if (base[k * n + j]) next[i * n + j] = 1;
    p = std::move(next);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Extended-precision Perron machinery.  All internal eigen computations run
// in long double so downstream residual series keep a ~1e-19 noise floor.

namespace {

using ld = long double;
using cld = std::complex<ld>;

std::vector<ld> mat_vec(const SubstMatrix& a, const std::vector<ld>& v,
                        bool transpose) {
  const int n = a.size();
  std::vector<ld> out(n, 0.0L);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (transpose)
        out[i] += static_cast<ld>(a(j, i)) * v[j];
      else
        out[i] += static_cast<ld>(a(i, j)) * v[j];
    }
  return out;
}

// Power iteration for the dominant eigenpair; vector normalised to L1 = 1.
std::vector<ld> dominant_vector(const SubstMatrix& a, bool transpose) {
  const int n = a.size();
  std::vector<ld> v(n, 1.0L / n);
  ld bestRes = std::numeric_limits<ld>::max();
  int sinceImproved = 0;
  for (int iter = 0; iter < 200000; ++iter) {
    std::vector<ld> w = mat_vec(a, v, transpose);
    ld s = 0.0L;
    for (ld x : w) s += std::abs(x);
    if (s <= 0.0L)
      fail(ErrorCode::ZeroVector, "matrix annihilates the positive cone");
    ld res = 0.0L;
    for (int i = 0; i < n; ++i) res = std::max(res, std::abs(w[i] / s - v[i]));
    for (int i = 0; i < n; ++i) v[i] = w[i] / s;
    if (res < bestRes * 0.99L) {
      bestRes = res;
      sinceImproved = 0;
    } else if (++sinceImproved > 50) {
      break;
    }
    if (res < 1e-19L) break;
  }
  if (bestRes > 1e-8L)
    fail(ErrorCode::PowerIterationStalled,
         "power iteration failed to converge");
  return v;
}

// Characteristic polynomial det(xI - A) via Faddeev-LeVerrier; returns the
// monic coefficients c[0..n] with c[0] = 1.
std::vector<ld> char_poly(const SubstMatrix& a) {
  const int n = a.size();
  std::vector<ld> m(n * n, 0.0L), am(n * n);
  std::vector<ld> c(n + 1, 0.0L);
  c[0] = 1.0L;
  for (int i = 0; i < n; ++i) m[i * n + i] = 1.0L;  // M_1 = I (pre-multiply)
  for (int k = 1; k <= n; ++k) {
    // am = A * m
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ld acc = 0.0L;
        for (int t = 0; t < n; ++t)
          acc += static_cast<ld>(a(i, t)) * m[t * n + j];
        am[i * n + j] = acc;
      }
    ld tr = 0.0L;
    for (int i = 0; i < n; ++i) tr += am[i * n + i];
    c[k] = -tr / k;
    m = am;
    for (int i = 0; i < n; ++i) m[i * n + i] += c[k];
  }
  return c;
}

ld poly_eval(const std::vector<ld>& c, ld x, ld* deriv) {
  ld p = 0.0L, d = 0.0L;
  for (ld ck : c) {
    d = d * x + p;
    p = p * x + ck;
  }
  if (deriv) *deriv = d;
  return p;
}

cld poly_eval_c(const std::vector<ld>& c, cld x) {
  cld p = 0.0L;
  for (ld ck : c) p = p * x + ck;
  return p;
}

// Durand-Kerner simultaneous root iteration for a monic polynomial.
std::vector<cld> all_roots(const std::vector<ld>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  ld radius = 1.0L;
  for (int k = 1; k <= n; ++k)
    radius = std::max(radius, 1.0L + std::abs(c[k]));
  std::vector<cld> z(n);
  for (int k = 0; k < n; ++k) {
    ld theta = 2.0L * 3.14159265358979323846L * k / n + 0.37L;
    z[k] = radius * cld(std::cos(theta), std::sin(theta));
  }
  for (int sweep = 0; sweep < 2000; ++sweep) {
    ld maxStep = 0.0L;
    for (int k = 0; k < n; ++k) {
      cld denom = 1.0L;
      for (int j = 0; j < n; ++j)
        if (j != k) denom *= z[k] - z[j];
      if (std::abs(denom) < 1e-300L) continue;
      cld step = poly_eval_c(c, z[k]) / denom;
      z[k] -= step;
      maxStep = std::max(maxStep, std::abs(step));
    }
    if (maxStep < 1e-21L * radius) break;
  }
  return z;
}

struct PerronLD {
  ld lambda1 = 0.0L;
  ld lambda2Abs = 0.0L;
  std::vector<ld> v1Unit;  // 2-norm 1
  std::vector<ld> v1C;     // first coordinate 1
  std::vector<ld> w1;      // scaled so w1 . v1Unit = 1
};

PerronLD perron_ld(const SubstMatrix& a) {
  const int n = a.size();
  PerronLD out;
  std::vector<ld> v = dominant_vector(a, false);
  std::vector<ld> w = dominant_vector(a, true);

  std::vector<ld> av = mat_vec(a, v, false);
  ld num = 0.0L, den = 0.0L;
  for (int i = 0; i < n; ++i) {
    num += w[i] * av[i];
    den += w[i] * v[i];
  }
  if (std::abs(den) < 1e-30L)
    fail(ErrorCode::ZeroVector, "left/right eigenvectors nearly orthogonal");
  ld lambda = num / den;

  if (n <= 8) {
    std::vector<ld> c = char_poly(a);
    // Newton-polish the Perron root from the power-iteration estimate.
    ld x = lambda;
    for (int it = 0; it < 200; ++it) {
      ld d;
      ld p = poly_eval(c, x, &d);
      if (std::abs(d) < 1e-300L) break;
      ld step = p / d;
      x -= step;
      if (std::abs(step) < 1e-22L * std::max(1.0L, std::abs(x))) break;
    }
    if (std::abs(x - lambda) > 1e-6L * std::max(1.0L, lambda))
      fail(ErrorCode::PowerIterationStalled,
           "polynomial root and power iteration disagree on the Perron value");
    lambda = x;
    // Second-largest modulus among the remaining roots.
    std::vector<cld> roots = all_roots(c);
    int skip = -1;
    ld best = std::numeric_limits<ld>::max();
    for (int k = 0; k < n; ++k) {
      ld d = std::abs(roots[k] - cld(lambda, 0.0L));
      if (d < best) {
        best = d;
        skip = k;
      }
    }
    ld second = 0.0L;
    for (int k = 0; k < n; ++k)
      if (k != skip) second = std::max(second, std::abs(roots[k]));
    out.lambda2Abs = second;
  } else {
    // Deflated power iteration: strip the Perron component and measure the
    // residual growth rate.
    std::vector<ld> w1 = w;
    ld dotWV = 0.0L;
    for (int i = 0; i < n; ++i) dotWV += w1[i] * v[i];
    for (auto& x : w1) x /= dotWV;  // now w1 . v = 1
    std::vector<ld> x(n);
    for (int i = 0; i < n; ++i) x[i] = (i % 2 == 0) ? 1.0L : -0.7L;
    auto deflate = [&](std::vector<ld>& y) {
      ld d = 0.0L;
      for (int i = 0; i < n; ++i) d += w1[i] * y[i];
      for (int i = 0; i < n; ++i) y[i] -= d * v[i];
    };
    deflate(x);
    ld norm = 0.0L;
    for (ld t : x) norm += t * t;
    norm = std::sqrt(norm);
    if (norm < 1e-30L) {
      out.lambda2Abs = 0.0L;
    } else {
      for (auto& t : x) t /= norm;
      ld logSum = 0.0L;
      int samples = 0;
      for (int iter = 0; iter < 400; ++iter) {
        std::vector<ld> y = mat_vec(a, x, false);
        deflate(y);
        ld ynorm = 0.0L;
        for (ld t : y) ynorm += t * t;
        ynorm = std::sqrt(ynorm);
        if (ynorm < 1e-290L) {
          logSum = -std::numeric_limits<ld>::infinity();
          samples = 1;
          break;
        }
        if (iter >= 300) {
          logSum += std::log(ynorm);
          ++samples;
        }
        for (int i = 0; i < n; ++i) x[i] = y[i] / ynorm;
      }
      out.lambda2Abs =
          samples ? static_cast<ld>(std::exp(logSum / samples)) : 0.0L;
      if (!std::isfinite(static_cast<double>(out.lambda2Abs)))
        out.lambda2Abs = 0.0L;
    }
  }

  out.lambda1 = lambda;
  if (v[0] <= 1e-18L)
    fail(ErrorCode::ZeroVector, "Perron vector has vanishing first coordinate");
  ld norm2 = 0.0L;
  for (ld t : v) norm2 += t * t;
  norm2 = std::sqrt(norm2);
  out.v1Unit.resize(n);
  out.v1C.resize(n);
  for (int i = 0; i < n; ++i) {
    out.v1Unit[i] = v[i] / norm2;
    out.v1C[i] = v[i] / v[0];
  }
  ld dotWU = 0.0L;
  for (int i = 0; i < n; ++i) dotWU += w[i] * out.v1Unit[i];
  out.w1.resize(n);
  for (int i = 0; i < n; ++i) out.w1[i] = w[i] / dotWU;
  return out;
}

}  // namespace

SpectralReport spectral_report(const SubstMatrix& a,
                               std::span<const double> areas,
                               double epsilonOverride) {
  const int n = a.size();
  if (n < 1) fail(ErrorCode::InvalidArgument, "empty matrix");
  if (static_cast<int>(areas.size()) != n)
    fail(ErrorCode::InvalidArgument, "areas size mismatch");
  SpectralReport r;
  r.n = n;
  r.witness = primitivity_witness(a);
  r.primitive = r.witness > 0;
  if (!r.primitive)
    fail(ErrorCode::NotPrimitive,
         "substitution matrix is not primitive (no positive power up to the "
         "Wielandt bound)");

  PerronLD p = perron_ld(a);
  r.lambda1 = static_cast<double>(p.lambda1);
  r.lambda2Abs = static_cast<double>(p.lambda2Abs);
  r.v1.assign(p.v1C.begin(), p.v1C.end());
  r.v1Unit.assign(p.v1Unit.begin(), p.v1Unit.end());
  r.w1.assign(p.w1.begin(), p.w1.end());
  r.areas.assign(areas.begin(), areas.end());

  ld a1 = 0.0L, a2 = 0.0L;
  for (int i = 0; i < n; ++i) {
    a1 += p.v1C[i];
    a2 += p.v1C[i] * static_cast<ld>(areas[i]);
  }
  r.a1 = static_cast<double>(a1);
  r.a2 = static_cast<double>(a2);
  if (!(a2 > 0.0L)) fail(ErrorCode::InvalidArgument, "tile areas must be positive");
  r.alpha = static_cast<double>(a1 / a2);

  double eps = epsilonOverride >= 0.0 ? epsilonOverride
                                      : (r.lambda1 - r.lambda2Abs) / 10.0;
  r.epsilon = eps;
  r.delta = (r.lambda2Abs + eps) / r.lambda1;
  r.pisot = r.lambda2Abs < 1.0;
  return r;
}

XiConsistency check_xi_consistency(const SubstitutionRule& rule,
                                   const SpectralReport& report) {
  XiConsistency out;
  double xi2 = rule.xi() * rule.xi();
  out.eigenvalueResidual = std::abs(xi2 - report.lambda1) / report.lambda1;
  SubstMatrix a = substitution_matrix(rule);
  const int n = a.size();
  double sMax = 0.0, resMax = 0.0;
  for (int j = 0; j < n; ++j) {
    double sj = rule.tile(j + 1).area;
    sMax = std::max(sMax, std::abs(sj));
    double ats = 0.0;
    for (int i = 0; i < n; ++i) ats += a(i, j) * rule.tile(i + 1).area;
    resMax = std::max(resMax, std::abs(xi2 * sj - ats));
  }
  out.areaVectorResidual = resMax / sMax;
  return out;
}

DecayProbe decay_probe(const SubstMatrix& a, std::span<const double> u,
                       int mmax, const SpectralReport& report) {
  const int n = a.size();
  if (static_cast<int>(u.size()) != n)
    fail(ErrorCode::InvalidArgument, "start vector size mismatch");
  if (mmax < 1) fail(ErrorCode::InvalidArgument, "mmax must be >= 1");
  ld uMax = 0.0L;
  for (double x : u) uMax = std::max(uMax, static_cast<ld>(std::abs(x)));
  if (uMax == 0.0L) fail(ErrorCode::ZeroVector, "start vector is zero");
  (void)report;

  // Re-derive the eigendata in extended precision so that residuals near
  // 1e-17 are still meaningful.
  PerronLD p = perron_ld(a);
  ld beta1 = 0.0L;
  for (int i = 0; i < n; ++i) beta1 += p.w1[i] * static_cast<ld>(u[i]);
  if (std::abs(beta1) < 1e-30L)
    fail(ErrorCode::ZeroVector,
         "start vector is orthogonal to the left Perron vector");

  DecayProbe probe;
  std::vector<ld> t(u.begin(), u.end());
  ld lamPow = 1.0L;
  for (int m = 0; m <= mmax; ++m) {
    if (m > 0) {
      t = mat_vec(a, t, false);
      lamPow *= p.lambda1;
    }
    ld vres = 0.0L;
    for (int i = 0; i < n; ++i)
      vres = std::max(vres,
                      std::abs(t[i] / (beta1 * lamPow) - p.v1Unit[i]));
    double sres = std::numeric_limits<double>::quiet_NaN();
    if (std::abs(t[0]) > 0.0L) {
      ld s = 0.0L;
      for (int i = 0; i < n; ++i)
        s = std::max(s, std::abs(t[i] / t[0] - p.v1C[i]));
      sres = static_cast<double>(s);
    }
    probe.levels.push_back(m);
    probe.vectorResidual.push_back(static_cast<double>(vres));
    probe.shareResidual.push_back(sres);
  }

  // Points at or below the double-precision noise floor are excluded from
  // the slope fits; the floor scales with the start vector.
  const double floor = 1e-14 * std::max(1.0, static_cast<double>(uMax));
  auto fit = [&](const std::vector<double>& res, double& slope) -> int {
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < res.size(); ++k) {
      if (std::isfinite(res[k]) && res[k] > floor) {
        xs.push_back(static_cast<double>(probe.levels[k]));
        ys.push_back(std::log(res[k]));
      }
    }
    if (xs.size() < 2) {
      slope = 0.0;
      return static_cast<int>(xs.size());
    }
    slope = fit_slope(xs, ys);
    return static_cast<int>(xs.size());
  };
  int nv = fit(probe.vectorResidual, probe.vectorSlope);
  int ns = fit(probe.shareResidual, probe.shareSlope);
  probe.degenerate = nv < 2 || ns < 2;
  return probe;
}

double fit_patch_constant(const SubstMatrix& a, std::span<const double> areas,
                          const SpectralReport& report, int mlo, int mhi) {
  const int n = a.size();
  if (static_cast<int>(areas.size()) != n)
    fail(ErrorCode::InvalidArgument, "areas size mismatch");
  if (mlo < 0 || mhi < mlo) fail(ErrorCode::InvalidArgument, "bad level range");
  PerronLD p = perron_ld(a);
  ld a1 = 0.0L, a2 = 0.0L;
  for (int i = 0; i < n; ++i) {
    a1 += p.v1C[i];
    a2 += p.v1C[i] * static_cast<ld>(areas[i]);
  }
  ld best = 0.0L;
  const ld delta = static_cast<ld>(report.delta);
  for (int type = 0; type < n; ++type) {
    std::vector<std::int64_t> v(n, 0);
    v[type] = 1;
    for (int m = 1; m <= mhi; ++m) {
      v = a.apply(v);
      if (m < mlo) continue;
      std::int64_t t1 = v[0];
      if (t1 == 0) continue;
      ld total = 0.0L, mu = 0.0L;
      for (int i = 0; i < n; ++i) {
        total += static_cast<ld>(v[i]);
        mu += static_cast<ld>(v[i]) * static_cast<ld>(areas[i]);
      }
      ld resN = std::abs(total / t1 - a1);
      ld resMu = std::abs(mu / t1 - a2);
      ld deltaPow = std::pow(delta, static_cast<ld>(m));
      if (resN > 1e-14L) best = std::max(best, resN / deltaPow);
      if (resMu > 1e-14L) best = std::max(best, resMu / deltaPow);
    }
  }
  return static_cast<double>(best);
}

PatchPrediction predict_patch_stats(std::int64_t t1, int m,
                                    const SpectralReport& report, double c2) {
  if (t1 <= 0) fail(ErrorCode::InvalidArgument, "t1 must be positive");
  if (m < 0) fail(ErrorCode::InvalidArgument, "level must be >= 0");
  double band = c2 * std::pow(report.delta, m);
  PatchPrediction out;
  out.count = {t1 * (report.a1 - band), t1 * (report.a1 + band)};
  out.area = {t1 * (report.a2 - band), t1 * (report.a2 + band)};
  return out;
}

double tile_discrepancy(const SubstMatrix& a, std::span<const double> areas,
                        const SpectralReport& report, int rootType, int m) {
  const int n = a.size();
  if (rootType < 1 || rootType > n)
    fail(ErrorCode::InvalidArgument, "rootType out of range");
  if (m < 0) fail(ErrorCode::InvalidArgument, "level must be >= 0");
  (void)report;
  PerronLD p = perron_ld(a);
  ld a1 = 0.0L, a2 = 0.0L;
  for (int i = 0; i < n; ++i) {
    a1 += p.v1C[i];
    a2 += p.v1C[i] * static_cast<ld>(areas[i]);
  }
  std::vector<std::int64_t> v(n, 0);
  v[rootType - 1] = 1;
  for (int k = 0; k < m; ++k) v = a.apply(v);
  ld total = 0.0L;
  for (int i = 0; i < n; ++i) total += static_cast<ld>(v[i]);
  ld lamPow = 1.0L;
  for (int k = 0; k < m; ++k) lamPow *= p.lambda1;
  ld mu = lamPow * static_cast<ld>(areas[rootType - 1]);
  return static_cast<double>(std::abs(total - (a1 * mu) / a2));
}

}  // namespace tilenet
