#ifndef LPSTAB_ADVERSARIAL_HPP
#define LPSTAB_ADVERSARIAL_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lpstab/geometry.hpp"
#include "lpstab/objectives.hpp"

namespace lpstab {

/// Hard distribution for small p: samples are dense +-1 vectors on the first
/// s coordinates with per-coordinate bias delta*v, loss G*s^(-1/p*)*<x, z>.
struct Case1Family {
  Vector v;          // +-e_i for some i <= s
  double delta = 0.0;
  int s = 1;
  int d = 1;
  double G = 1.0;
  double p = 1.0;

  static Case1Family make(Vector v, double delta, int s, int d, double G,
                          double p);
  double scale() const;  // G * s^(-1/p*)
  LossModel loss() const { return LossModel::linear(scale()); }
  Sample sample(std::mt19937_64& rng) const;
  // closed-form population loss of the linear family at x
  double population_risk(const Vector& x) const;
};

/// Hard distribution for p > 1 + 1/log(d): single-spike samples +-v_j e_j
/// with probabilities (1 +- delta)/(2s), loss G*<x, z>.
struct Case2Family {
  Vector v;          // sign vector supported on the first s coordinates
  double delta = 0.0;
  int s = 1;
  int d = 1;
  double G = 1.0;
  double p = 2.0;

  static Case2Family make(Vector v, double delta, int s, int d, double G,
                          double p);
  LossModel loss() const { return LossModel::linear(G); }
  Sample sample(std::mt19937_64& rng) const;
  double population_risk(const Vector& x) const;
};

Dataset sample_case1(const Case1Family& family, int count, std::uint64_t seed);
Dataset sample_case2(const Case2Family& family, int count, std::uint64_t seed);

// min over the radius-R lp ball of the closed-form population risk.
double population_min_linear(const Case1Family& family, double R);
double population_min_linear(const Case2Family& family, double R);

// Optimality-gap pseudo-distance between the population losses of v and v',
// in closed form; the numeric cross-check lives in the verification suites.
double d_opt_case1(const Case1Family& family, const Vector& v,
                   const Vector& v_prime, double R);
double d_opt_case2(const Case2Family& family, const Vector& v,
                   const Vector& v_prime, double R);

enum class LowerBoundCase { Case1, Case2 };

// delta = sqrt(log(s)/(6n)) (case 1, with the delta = 1 regime switch) or
// sqrt(s/(48n)) (case 2), clamped to 1.
double delta_schedule(LowerBoundCase c, int s, int n, int d);

struct LowerBoundQuote {
  double p = 2.0;
  int d = 1;
  int n = 1;
  double G = 1.0;
  double R = 1.0;
  std::string regime;  // "small-p", "high-dim", or "low-dim (external)"
  double value = 0.0;
};

LowerBoundQuote lower_bound_value(double p, int d, int n, double G, double R);

struct Packing {
  std::vector<Vector> vectors;  // {+-1}^s sign vectors
  int min_distance = 0;         // verified pairwise support Hamming distance
  bool reached_target_size = true;
};

// Greedy randomized s/2-separated packing of {+-1}^s with a verification
// pass; target size min(floor(exp(s/8)), size_cap).
Packing gv_packing(int s, std::uint64_t seed, int size_cap = 256);

}  // namespace lpstab

#endif  // LPSTAB_ADVERSARIAL_HPP
