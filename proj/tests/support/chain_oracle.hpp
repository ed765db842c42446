#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace qfst::testing {

using BoolMatrix = std::vector<std::vector<bool>>;

inline BoolMatrix positive_pattern(const Eigen::MatrixXd& v) {
  const std::size_t n = std::size_t(v.rows());
  BoolMatrix a(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = v(Eigen::Index(i), Eigen::Index(j)) > 1e-12;
  return a;
}

inline BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
  const std::size_t n = a.size();
  BoolMatrix c(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (b[k][j]) c[i][j] = true;
  return c;
}

/// Reflexive-transitive closure by Warshall.
inline BoolMatrix reachability(const BoolMatrix& a) {
  const std::size_t n = a.size();
  BoolMatrix r = a;
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

struct OracleClass {
  std::set<std::size_t> states;
  std::size_t period = 0;
  /// Partition into cyclic classes (unordered).
  std::set<std::set<std::size_t>> cyclic;
};

struct OracleClassification {
  std::set<std::size_t> transient;
  std::vector<OracleClass> classes;  // ordered by smallest state
};

/// A state is recurrent iff everything it reaches reaches it back. Periods
/// are gcds of return times read off boolean matrix powers; two states of a
/// class share a cyclic class iff one reaches the other in a multiple of the
/// period steps.
inline OracleClassification brute_force_classify(const Eigen::MatrixXd& v) {
  const BoolMatrix a = positive_pattern(v);
  const std::size_t n = a.size();
  const BoolMatrix r = reachability(a);
  OracleClassification out;
  std::vector<bool> recurrent(n, true);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r[i][j] && !r[j][i]) recurrent[i] = false;

  const std::size_t horizon = 2 * n * n + 2;
  std::vector<BoolMatrix> powers{a};
  for (std::size_t k = 1; k < horizon; ++k) powers.push_back(bool_product(powers.back(), a));

  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!recurrent[i]) {
      out.transient.insert(i);
      continue;
    }
    if (done[i]) continue;
    OracleClass c;
    for (std::size_t j = 0; j < n; ++j)
      if (r[i][j] && r[j][i]) {
        c.states.insert(j);
        done[j] = true;
      }
    std::size_t g = 0;
    for (std::size_t k = 0; k < horizon; ++k)
      if (powers[k][i][i]) g = std::gcd(g, k + 1);
    c.period = g;
    std::vector<bool> placed(n, false);
    for (std::size_t s : c.states) {
      if (placed[s]) continue;
      std::set<std::size_t> cyc{s};
      placed[s] = true;
      for (std::size_t t : c.states) {
        if (t == s) continue;
        for (std::size_t k = 0; k < horizon; ++k)
          if ((k + 1) % g == 0 && powers[k][s][t]) {
            cyc.insert(t);
            placed[t] = true;
            break;
          }
      }
      c.cyclic.insert(cyc);
    }
    out.classes.push_back(std::move(c));
  }
  return out;
}

/// Random stochastic matrix with roughly `density` positive entries per row.
/// With `absorbing_pair` the last two states form a closed 2-cycle.
inline Eigen::MatrixXd random_chain(std::size_t n, std::mt19937& rng, double density = 0.35,
                                    bool absorbing_pair = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (u(rng) < density) {
        v(Eigen::Index(i), Eigen::Index(j)) = u(rng) + 0.05;
        s += v(Eigen::Index(i), Eigen::Index(j));
      }
    if (s == 0.0) {
      v(Eigen::Index(i), Eigen::Index(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng))) = 1.0;
      s = 1.0;
    }
    v.row(Eigen::Index(i)) /= s;
  }
  if (absorbing_pair && n >= 2) {
    for (std::size_t i = n - 2; i < n; ++i) v.row(Eigen::Index(i)).setZero();
    v(Eigen::Index(n - 2), Eigen::Index(n - 1)) = 1.0;
    v(Eigen::Index(n - 1), Eigen::Index(n - 2)) = 1.0;
  }
  return v;
}

}  // namespace qfst::testing
