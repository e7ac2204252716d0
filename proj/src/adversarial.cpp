#include "lpstab/adversarial.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "lpstab/rng.hpp"

namespace lpstab {

namespace {

double inv_dual_power(int s, double p) {
  // s^(-1/p*) with the p = 1 (p* = infinity) sentinel mapping to 1
  const double ps = dual_exponent(p);
  if (std::isinf(ps)) return 1.0;
  return std::pow(static_cast<double>(s), -1.0 / ps);
}

void check_family(double delta, int s, int d) {
  if (delta < 0.0 || delta > 1.0) {
    throw std::invalid_argument("family: delta must lie in [0, 1]");
  }
  if (s < 1 || s > d) throw std::invalid_argument("family: need 1 <= s <= d");
}

}  // namespace

Case1Family Case1Family::make(Vector v, double delta, int s, int d, double G,
                              double p) {
  check_family(delta, s, d);
  if (v.size() != d) throw std::invalid_argument("Case1Family: v dimension");
  int support = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      ++support;
      if (std::abs(v[i]) != 1.0 || i >= s) {
        throw std::invalid_argument("Case1Family: v must be +-e_i, i <= s");
      }
    }
  }
  if (support != 1) throw std::invalid_argument("Case1Family: v must be +-e_i");
  Case1Family f;
  f.v = std::move(v);
  f.delta = delta;
  f.s = s;
  f.d = d;
  f.G = G;
  f.p = p;
  return f;
}

double Case1Family::scale() const { return G * inv_dual_power(s, p); }

Sample Case1Family::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Sample z;
  z.features = Vector::Zero(d);
  for (int j = 0; j < s; ++j) {
    const double prob_plus = 0.5 * (1.0 + delta * v[j]);
    z.features[j] = unif(rng) < prob_plus ? 1.0 : -1.0;
  }
  return z;
}

double Case1Family::population_risk(const Vector& x) const {
  return scale() * delta * x.dot(v);
}

Case2Family Case2Family::make(Vector v, double delta, int s, int d, double G,
                              double p) {
  check_family(delta, s, d);
  if (v.size() != d) throw std::invalid_argument("Case2Family: v dimension");
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i < s && std::abs(v[i]) != 1.0) {
      throw std::invalid_argument("Case2Family: v must be +-1 on the support");
    }
    if (i >= s && v[i] != 0.0) {
      throw std::invalid_argument("Case2Family: v must vanish off the support");
    }
  }
  Case2Family f;
  f.v = std::move(v);
  f.delta = delta;
  f.s = s;
  f.d = d;
  f.G = G;
  f.p = p;
  return f;
}

Sample Case2Family::sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<int> coord(0, s - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int j = coord(rng);
  const double sign = unif(rng) < 0.5 * (1.0 + delta) ? 1.0 : -1.0;
  Sample z;
  z.features = Vector::Zero(d);
  z.features[j] = sign * v[j];
  return z;
}

double Case2Family::population_risk(const Vector& x) const {
  return G * delta / static_cast<double>(s) * x.dot(v);
}

Dataset sample_case1(const Case1Family& family, int count, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) samples.push_back(family.sample(rng));
  return Dataset::make(std::move(samples));
}

Dataset sample_case2(const Case2Family& family, int count, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) samples.push_back(family.sample(rng));
  return Dataset::make(std::move(samples));
}

double population_min_linear(const Case1Family& family, double R) {
  const double ps = dual_exponent(family.p);
  return -family.scale() * family.delta * R * pnorm(family.v, ps);
}

double population_min_linear(const Case2Family& family, double R) {
  const double ps = dual_exponent(family.p);
  return -family.G * family.delta * R * pnorm(family.v, ps) /
         static_cast<double>(family.s);
}

double d_opt_case1(const Case1Family& family, const Vector& v,
                   const Vector& v_prime, double R) {
  if ((v - v_prime).cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const double ps = dual_exponent(family.p);
  return family.scale() * family.delta * R * (2.0 - pnorm(v + v_prime, ps));
}

double d_opt_case2(const Case2Family& family, const Vector& v,
                   const Vector& v_prime, double R) {
  int h = 0;
  for (int j = 0; j < family.s; ++j) {
    if (v[j] != v_prime[j]) ++h;
  }
  if (h == 0) return 0.0;
  const double ps = dual_exponent(family.p);
  const double s = static_cast<double>(family.s);
  return 2.0 * family.G * family.delta * (R / s) *
         (std::pow(s, 1.0 / ps) - std::pow(s - h, 1.0 / ps));
}

double delta_schedule(LowerBoundCase c, int s, int n, int d) {
  if (s < 1 || n < 1) throw std::invalid_argument("delta_schedule: s, n >= 1");
  if (c == LowerBoundCase::Case1) {
    if (std::log(static_cast<double>(d)) >= 6.0 * n) return 1.0;
    return std::min(1.0, std::sqrt(std::log(static_cast<double>(s)) /
                                   (6.0 * static_cast<double>(n))));
  }
  return std::min(1.0, std::sqrt(static_cast<double>(s) /
                                 (48.0 * static_cast<double>(n))));
}

LowerBoundQuote lower_bound_value(double p, int d, int n, double G, double R) {
  if (G <= 0.0 || R <= 0.0) {
    throw std::invalid_argument("lower_bound_value: G, R > 0 required");
  }
  LowerBoundQuote q;
  q.p = p;
  q.d = d;
  q.n = n;
  q.G = G;
  q.R = R;
  const double logd = std::log(static_cast<double>(d));
  if (p <= 1.0 + 1.0 / logd) {
    q.regime = "small-p";
    q.value = (G * R / 12.0) *
              std::min(1.0, std::sqrt(logd / static_cast<double>(n)));
  } else if (48 * n < d) {
    q.regime = "high-dim";
    const double p_hat = std::max(p, 2.0);
    q.value = (G * R / 16.0) * std::pow(static_cast<double>(n), -1.0 / p_hat);
  } else {
    // quoted from prior work; not derived here
    q.regime = "low-dim (external)";
    q.value = G * R / std::sqrt(static_cast<double>(n));
  }
  return q;
}

Packing gv_packing(int s, std::uint64_t seed, int size_cap) {
  if (s < 4) throw std::invalid_argument("gv_packing: s >= 4 required");
  // the antipodal pair is always admissible, so never target fewer than 2
  const int target = std::max(
      2, static_cast<int>(std::min(
             static_cast<double>(size_cap),
             std::floor(std::exp(static_cast<double>(s) / 8.0)))));
  const int min_dist = (s + 1) / 2;  // support Hamming distance >= s/2

  auto rng = make_rng(seed);
  std::uniform_int_distribution<int> bit(0, 1);
  const auto hamming = [s](const Vector& a, const Vector& b) {
    int h = 0;
    for (int j = 0; j < s; ++j) {
      if (a[j] != b[j]) ++h;
    }
    return h;
  };

  Packing pack;
  if ((s & (s - 1)) == 0) {
    // power-of-two support: Sylvester-Hadamard rows and their negations are
    // pairwise at distance exactly s/2 (s for antipodal pairs)
    for (int i = 0; i < s && static_cast<int>(pack.vectors.size()) < target;
         ++i) {
      Vector row(s);
      for (int j = 0; j < s; ++j) {
        row[j] = std::popcount(static_cast<unsigned>(i & j)) % 2 == 0 ? 1.0
                                                                      : -1.0;
      }
      pack.vectors.push_back(row);
      if (static_cast<int>(pack.vectors.size()) < target) {
        pack.vectors.push_back(-row);
      }
    }
  } else {
    pack.vectors.push_back(Vector::Ones(s));
  }
  long attempts = 0;
  const long max_attempts = 2000L * std::max(target, 1);
  while (static_cast<int>(pack.vectors.size()) < target &&
         attempts < max_attempts) {
    ++attempts;
    Vector cand(s);
    for (int j = 0; j < s; ++j) cand[j] = bit(rng) == 0 ? -1.0 : 1.0;
    bool ok = true;
    for (const auto& u : pack.vectors) {
      if (hamming(cand, u) < min_dist) {
        ok = false;
        break;
      }
    }
    if (ok) pack.vectors.push_back(std::move(cand));
  }

  // verification pass: hard assertion on the separation of the returned set
  pack.min_distance = s;
  for (std::size_t i = 0; i < pack.vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < pack.vectors.size(); ++j) {
      const int h = hamming(pack.vectors[i], pack.vectors[j]);
      pack.min_distance = std::min(pack.min_distance, h);
    }
  }
  if (pack.min_distance * 2 < s) {
    throw std::logic_error("gv_packing: verification failed");
  }
  pack.reached_target_size = static_cast<int>(pack.vectors.size()) >= target;
  return pack;
}

}  // namespace lpstab
