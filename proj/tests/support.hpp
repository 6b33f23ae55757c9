#pragma once

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "clbic/blockmodel.hpp"
#include "clbic/graph.hpp"
#include "clbic/labeling.hpp"

namespace testing {

using clbic::Adjacency;
using clbic::Index;
using clbic::Labeling;

inline Adjacency from_edges(Index n, std::initializer_list<std::pair<int, int>> edges) {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (auto [i, j] : edges) m(i, j) = m(j, i) = 1;
  return Adjacency::validate(m);
}

inline Adjacency complete_graph(Index n) {
  Eigen::MatrixXi m = Eigen::MatrixXi::Ones(n, n);
  m.diagonal().setZero();
  return Adjacency::validate(m);
}

inline Adjacency random_graph(Index n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = coin(rng) ? 1 : 0;
  }
  return Adjacency::validate(m);
}

inline Labeling random_labeling(Index n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, k - 1);
  Eigen::VectorXi z(n);
  for (Index i = 0; i < n; ++i) z(i) = pick(rng);
  return clbic::make_labeling(z, k);
}

/// Two dense groups joined sparsely.
inline Adjacency planted_pair(Index half, double p_in, double p_out, std::mt19937_64& rng) {
  const Index n = 2 * half;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double p = (i < half) == (j < half) ? p_in : p_out;
      m(i, j) = m(j, i) = u(rng) < p ? 1 : 0;
    }
  }
  return Adjacency::validate(m);
}

// ---------------------------------------------------------------------------
// Oracles. Each recomputes a quantity pair by pair, without block aggregation.

/// k x k matrix of block probabilities from explicit pair loops.
inline Eigen::MatrixXd pairwise_sbm_theta(const Adjacency& a, const Labeling& z) {
  Eigen::MatrixXd edges = Eigen::MatrixXd::Zero(z.k, z.k);
  Eigen::MatrixXd pairs = Eigen::MatrixXd::Zero(z.k, z.k);
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = i + 1; j < a.size(); ++j) {
      const int x = std::min(z.labels(i), z.labels(j));
      const int y = std::max(z.labels(i), z.labels(j));
      pairs(x, y) += 1;
      edges(x, y) += a(i, j);
    }
  }
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(z.k, z.k);
  for (int x = 0; x < z.k; ++x) {
    for (int y = x; y < z.k; ++y) {
      if (pairs(x, y) > 0) theta(x, y) = theta(y, x) = edges(x, y) / pairs(x, y);
    }
  }
  return theta;
}

inline double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

/// sum_{i<j} A log theta + (1 - A) log(1 - theta).
inline double pairwise_sbm_loglik(const Adjacency& a, const Labeling& z,
                                  const Eigen::MatrixXd& theta) {
  double total = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = i + 1; j < a.size(); ++j) {
      const double t = theta(z.labels(i), z.labels(j));
      total += xlogy(a(i, j), t) + xlogy(1 - a(i, j), 1.0 - t);
    }
  }
  return total;
}

/// Karrer-Newman Poisson form over all ordered (i, j), self pairs included:
/// sum A_ij log(w_i w_j T) - w_i w_j T, with T = Z^T A Z at the fit.
inline double pairwise_dcbm_loglik(const Adjacency& a, const Labeling& z) {
  const Index n = a.size();
  Eigen::MatrixXd big_t = Eigen::MatrixXd::Zero(z.k, z.k);
  Eigen::VectorXd deg = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(z.k);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      big_t(z.labels(i), z.labels(j)) += a(i, j);
      deg(i) += a(i, j);
    }
    total(z.labels(i)) += deg(i);
  }
  double ll = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double wi = total(z.labels(i)) > 0 ? deg(i) / total(z.labels(i)) : 0.0;
      const double wj = total(z.labels(j)) > 0 ? deg(j) / total(z.labels(j)) : 0.0;
      const double rate = wi * wj * big_t(z.labels(i), z.labels(j));
      ll += xlogy(a(i, j), rate) - rate;
    }
  }
  return ll;
}

/// Termwise sum_{pairs in block} A/theta^2 + (1 - A)/(1 - theta)^2.
inline Eigen::MatrixXd termwise_sbm_hessian(const Adjacency& a, const Labeling& z,
                                            const Eigen::MatrixXd& theta) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(z.k, z.k);
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = i + 1; j < a.size(); ++j) {
      const int x = std::min(z.labels(i), z.labels(j));
      const int y = std::max(z.labels(i), z.labels(j));
      const double t = theta(x, y);
      h(x, y) += a(i, j) / (t * t) + (1 - a(i, j)) / ((1 - t) * (1 - t));
    }
  }
  return h;
}

/// Leave-one-vertex-out covariance by deleting each node and refitting from
/// scratch. Undefined blocks after deletion contribute a zero deviation.
inline Eigen::MatrixXd naive_jackknife(const Adjacency& a, const Labeling& z, clbic::Model model) {
  const Index n = a.size();
  const int k = z.k;
  const Index p = clbic::pair_count(k);
  auto fit = [&](Index skip, Eigen::VectorXd& theta, std::vector<bool>& defined) {
    Eigen::MatrixXd edges = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd sizes = Eigen::VectorXd::Zero(k);
    for (Index i = 0; i < n; ++i) {
      if (i == skip) continue;
      sizes(z.labels(i)) += 1;
      for (Index j = i + 1; j < n; ++j) {
        if (j == skip) continue;
        const int x = std::min(z.labels(i), z.labels(j));
        const int y = std::max(z.labels(i), z.labels(j));
        edges(x, y) += a(i, j);
      }
    }
    theta = Eigen::VectorXd::Zero(p);
    defined.assign(p, true);
    for (int x = 0; x < k; ++x) {
      for (int y = x; y < k; ++y) {
        const Index at = clbic::pair_index(x, y, k);
        if (model == clbic::Model::Dcbm) {
          theta(at) = edges(x, y);
          defined[at] = sizes(x) > 0 && sizes(y) > 0;
        } else {
          const double pairs = x == y ? sizes(x) * (sizes(x) - 1) / 2 : sizes(x) * sizes(y);
          defined[at] = pairs > 0;
          if (pairs > 0) theta(at) = edges(x, y) / pairs;
        }
      }
    }
  };
  Eigen::VectorXd full;
  std::vector<bool> full_defined;
  fit(-1, full, full_defined);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(p, p);
  for (Index l = 0; l < n; ++l) {
    Eigen::VectorXd t;
    std::vector<bool> defined;
    fit(l, t, defined);
    Eigen::VectorXd d = t - full;
    for (Index q = 0; q < p; ++q) {
      if (!defined[q]) d(q) = 0.0;
    }
    v += d * d.transpose();
  }
  return v * (static_cast<double>(n - 1) / n);
}

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

inline double cdf_oracle(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Phi^{-1}(p) by bisection on the erfc-based CDF.
inline double bisect_quantile(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf_oracle(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// P(W1 >= h, W2 >= k) = int_h^inf phi(x) P(W2 >= k | W1 = x) dx by composite
/// Simpson on a fine grid. Requires |rho| < 1.
inline double simpson_orthant(double h, double k, double rho) {
  const double s = std::sqrt(1.0 - rho * rho);
  auto f = [&](double x) { return phi(x) * (1.0 - cdf_oracle((k - rho * x) / s)); };
  const double lo = std::max(h, -12.0);
  const double hi = 12.0;
  if (lo >= hi) return 0.0;
  const int panels = 20000;
  const double step = (hi - lo) / panels;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) sum += f(lo + i * step) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * step / 3.0;
}

}  // namespace testing
