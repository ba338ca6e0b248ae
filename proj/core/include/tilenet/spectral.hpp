#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tilenet/error.hpp"
#include "tilenet/substitution.hpp"

namespace tilenet {

// Small dense non-negative integer matrix, row-major.  M(i,j) counts the
// children of type i+1 produced by dissecting a tile of type j+1.
class SubstMatrix {
 public:
  SubstMatrix() = default;
  explicit SubstMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}

  int size() const { return n_; }
  std::int64_t& operator()(int i, int j) { return a_[i * n_ + j]; }
  std::int64_t operator()(int i, int j) const { return a_[i * n_ + j]; }

  // Checked arithmetic: throws CapacityExceeded on 64-bit overflow.
  SubstMatrix multiply(const SubstMatrix& rhs) const;
  SubstMatrix power(int m) const;
  std::vector<std::int64_t> apply(const std::vector<std::int64_t>& v) const;

  bool operator==(const SubstMatrix& rhs) const = default;

 private:
  int n_ = 0;
  std::vector<std::int64_t> a_;
};

SubstMatrix substitution_matrix(const SubstitutionRule& rule);

// Primitivity via boolean matrix powers.  Returns the smallest exponent m
// with A^m entrywise positive, or 0 if none exists up to the Wielandt bound
// n^2 - 2n + 2.
int primitivity_witness(const SubstMatrix& a);
inline bool is_primitive(const SubstMatrix& a) {
  return primitivity_witness(a) > 0;
}

struct SpectralReport {
  int n = 0;
  bool primitive = false;
  int witness = 0;          // smallest m with A^m > 0
  double lambda1 = 0.0;     // Perron eigenvalue
  double lambda2Abs = 0.0;  // second-largest eigenvalue modulus
  std::vector<double> v1;      // right Perron vector, first coordinate = 1
  std::vector<double> v1Unit;  // right Perron vector, unit 2-norm
  std::vector<double> w1;      // left Perron vector, scaled so w1 . v1Unit = 1
  std::vector<double> areas;   // tile areas s_i used for a2
  double a1 = 0.0;     // sum of c_i           (count normalisation)
  double a2 = 0.0;     // sum of c_i * s_i     (area normalisation)
  double alpha = 0.0;  // a1 / a2, asymptotic points-per-area density
  double epsilon = 0.0;
  double delta = 0.0;  // (lambda2Abs + epsilon) / lambda1
  bool pisot = false;  // lambda2Abs < 1
};

// Full spectral analysis of a substitution matrix.  `areas` supplies the
// basic-tile areas (ordered by type).  epsilonOverride < 0 selects the
// default epsilon = (lambda1 - |lambda2|)/10.  Throws NotPrimitive when the
// matrix is not primitive.
SpectralReport spectral_report(const SubstMatrix& a,
                               std::span<const double> areas,
                               double epsilonOverride = -1.0);

inline SpectralReport spectral_report(const SubstitutionRule& rule,
                                      double epsilonOverride = -1.0) {
  std::vector<double> areas;
  for (const auto& t : rule.tiles()) areas.push_back(t.area);
  return spectral_report(substitution_matrix(rule), areas, epsilonOverride);
}

struct XiConsistency {
  double eigenvalueResidual = 0.0;  // |xi^2 - lambda1| / lambda1
  double areaVectorResidual = 0.0;  // ||xi^2 s - A^T s||_inf / ||s||_inf
};

XiConsistency check_xi_consistency(const SubstitutionRule& rule,
                                   const SpectralReport& report);

struct DecayProbe {
  std::vector<int> levels;
  std::vector<double> vectorResidual;  // || A^m u / (b1 l1^m) - v1Unit ||_inf
  std::vector<double> shareResidual;   // max_i | (A^m u)_i / (A^m u)_1 - c_i |
  double vectorSlope = 0.0;            // d ln(residual) / dm, fitted
  double shareSlope = 0.0;
  bool degenerate = false;  // residuals at noise floor, slopes meaningless
};

// Tracks the two geometric-decay series for a start vector u (computed in
// extended precision).  Residuals below 1e-280 are excluded from the fits.
DecayProbe decay_probe(const SubstMatrix& a, std::span<const double> u,
                       int mmax, const SpectralReport& report);

// Calibrates the patch-statistics constant: the smallest C with
// |N/t1 - a1| <= C delta^m and |mu/t1 - a2| <= C delta^m over all root types
// and m in [mlo, mhi].  Exact rules (all residuals < 1e-14) give 0.
double fit_patch_constant(const SubstMatrix& a, std::span<const double> areas,
                          const SpectralReport& report, int mlo = 2,
                          int mhi = 6);

struct PatchInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct PatchPrediction {
  PatchInterval count;  // predicted total tile count N
  PatchInterval area;   // predicted support area mu
};

// Interval prediction of patch statistics from the type-1 tile count t1 at
// refinement level m: N in t1 * (a1 +- C delta^m), mu in t1 * (a2 +- C delta^m).
PatchPrediction predict_patch_stats(std::int64_t t1, int m,
                                    const SpectralReport& report, double c2);

// | total(m) - alpha * xi^(2m) * s_i |  computed in extended precision.
double tile_discrepancy(const SubstMatrix& a, std::span<const double> areas,
                        const SpectralReport& report, int rootType, int m);

}  // namespace tilenet
