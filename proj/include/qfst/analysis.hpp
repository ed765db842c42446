#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "qfst/core.hpp"
#include "qfst/matrix.hpp"

namespace qfst {

/// Entries above this count as edges of the transition graph.
inline constexpr double kEdgeThreshold = 1e-12;

struct ErgodicClass {
  std::vector<std::size_t> states;  // sorted
  std::size_t period = 1;
  /// cyclic_classes[nu] is mapped by V into cyclic_classes[(nu + 1) % period].
  std::vector<std::vector<std::size_t>> cyclic_classes;
  /// Stationary distribution, aligned with `states`.
  std::vector<double> stationary;
};

struct ChainClassification {
  std::vector<std::size_t> transient;  // sorted
  std::vector<ErgodicClass> ergodic_classes;
};

inline Eigen::MatrixXd to_eigen_real(const SparseMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(Eigen::Index(m.size()), Eigen::Index(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (const auto& [c, v] : m.row(r)) {
      if (std::abs(v.imag()) > kEdgeThreshold) throw SpecError("matrix has complex entries");
      d(Eigen::Index(r), Eigen::Index(c)) = v.real();
    }
  return d;
}

namespace analysis_detail {

inline std::vector<std::vector<std::size_t>> edges_of(const Eigen::MatrixXd& v) {
  std::vector<std::vector<std::size_t>> adj(std::size_t(v.rows()));
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j)
      if (v(i, j) > kEdgeThreshold) adj[std::size_t(i)].push_back(std::size_t(j));
  return adj;
}

/// Tarjan's algorithm; component id per vertex.
inline std::vector<std::size_t> strongly_connected(const std::vector<std::vector<std::size_t>>& adj,
                                                   std::size_t& count) {
  const std::size_t n = adj.size(), unset = std::size_t(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset), stack;
  std::vector<bool> on_stack(n, false);
  std::size_t next = 0;
  count = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (index[w] == unset) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = count;
      } while (w != v);
      ++count;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] == unset) visit(v);
  return comp;
}

inline std::vector<double> stationary_of(const Eigen::MatrixXd& v, const std::vector<std::size_t>& states) {
  const Eigen::Index k = Eigen::Index(states.size());
  Eigen::MatrixXd a(k + 1, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = v(Eigen::Index(states[j]), Eigen::Index(states[i])) - (i == j);
  a.row(k).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);
  b(k) = 1.0;
  Eigen::VectorXd pi = a.completeOrthogonalDecomposition().solve(b);
  return {pi.data(), pi.data() + pi.size()};
}

}  // namespace analysis_detail

/// Transient states, closed communicating classes, their periods, cyclic
/// classes and stationary distributions.
inline ChainClassification classify_states(const Eigen::MatrixXd& v, double tol = kDefaultTolerance) {
  if (v.rows() != v.cols()) throw SpecError("transition matrix is not square");
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    if (std::abs(v.row(i).sum() - 1.0) > tol || v.row(i).minCoeff() < -tol)
      throw SpecError("row " + std::to_string(i) + " is not a probability distribution");
  }
  const auto adj = analysis_detail::edges_of(v);
  const std::size_t n = adj.size();
  std::size_t count = 0;
  const auto comp = analysis_detail::strongly_connected(adj, count);
  std::vector<bool> closed(count, true);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t w : adj[u])
      if (comp[w] != comp[u]) closed[comp[u]] = false;

  ChainClassification res;
  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t u = 0; u < n; ++u) members[comp[u]].push_back(u);
  for (std::size_t u = 0; u < n; ++u)
    if (!closed[comp[u]]) res.transient.push_back(u);

  // Classes in order of their smallest state.
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < count; ++c)
    if (closed[c]) order.push_back(c);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return members[a][0] < members[b][0]; });

  for (std::size_t c : order) {
    ErgodicClass ec;
    ec.states = members[c];
    const std::size_t root = ec.states[0], unset = std::size_t(-1);
    std::vector<std::size_t> level(n, unset);
    level[root] = 0;
    std::queue<std::size_t> bfs;
    bfs.push(root);
    while (!bfs.empty()) {
      std::size_t u = bfs.front();
      bfs.pop();
      for (std::size_t w : adj[u])
        if (level[w] == unset) {
          level[w] = level[u] + 1;
          bfs.push(w);
        }
    }
    std::size_t d = 0;
    for (std::size_t u : ec.states)
      for (std::size_t w : adj[u]) {
        long diff = long(level[u]) + 1 - long(level[w]);
        d = std::gcd(d, std::size_t(std::labs(diff)));
      }
    ec.period = d == 0 ? 1 : d;
    ec.cyclic_classes.assign(ec.period, {});
    for (std::size_t u : ec.states) ec.cyclic_classes[level[u] % ec.period].push_back(u);
    ec.stationary = analysis_detail::stationary_of(v, ec.states);
    res.ergodic_classes.push_back(std::move(ec));
  }
  return res;
}

inline ChainClassification classify_states(const SparseMatrix& v, double tol = kDefaultTolerance) {
  return classify_states(to_eigen_real(v), tol);
}

/// ||pi V|_S - pi||_1 for one ergodic class.
inline double stationary_residual(const Eigen::MatrixXd& v, const ErgodicClass& ec) {
  double r = 0.0;
  for (std::size_t j = 0; j < ec.states.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < ec.states.size(); ++i)
      s += ec.stationary[i] * v(Eigen::Index(ec.states[i]), Eigen::Index(ec.states[j]));
    r += std::abs(s - ec.stationary[j]);
  }
  return r;
}

struct RegularizedPower {
  std::size_t d = 1;
  Eigen::MatrixXd power;
  /// Per ergodic class, per cyclic class: is V^d restricted to it regular?
  std::vector<std::vector<bool>> regular;

  bool all_regular() const {
    return std::all_of(regular.begin(), regular.end(),
                       [](const auto& r) { return std::all_of(r.begin(), r.end(), [](bool b) { return b; }); });
  }
};

inline Eigen::MatrixXd matrix_power(Eigen::MatrixXd base, std::size_t e) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(base.rows(), base.cols());
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

/// Some power of m is entrywise positive (Wielandt bound (k-1)^2 + 1).
inline bool is_regular(const Eigen::MatrixXd& m) {
  const Eigen::Index k = m.rows();
  if (k == 0) return false;
  using B = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  B g = (m.array() > kEdgeThreshold).cast<int>();
  B p = g;
  const Eigen::Index bound = (k - 1) * (k - 1) + 1;
  for (Eigen::Index i = 1; i <= bound; ++i) {
    if ((p.array() > 0).all()) return true;
    p = ((p * g).array() > 0).cast<int>();
  }
  return false;
}

/// V^d with d the product of all periods; each cyclic class of V becomes an
/// aperiodic closed class of V^d.
inline RegularizedPower regularized_power(const Eigen::MatrixXd& v, const ChainClassification& cls) {
  RegularizedPower res;
  for (const auto& ec : cls.ergodic_classes) res.d *= ec.period;
  res.power = matrix_power(v, res.d);
  for (const auto& ec : cls.ergodic_classes) {
    std::vector<bool> flags;
    for (const auto& cc : ec.cyclic_classes) {
      Eigen::MatrixXd sub(Eigen::Index(cc.size()), Eigen::Index(cc.size()));
      for (std::size_t i = 0; i < cc.size(); ++i)
        for (std::size_t j = 0; j < cc.size(); ++j)
          sub(Eigen::Index(i), Eigen::Index(j)) = res.power(Eigen::Index(cc[i]), Eigen::Index(cc[j]));
      flags.push_back(is_regular(sub));
    }
    res.regular.push_back(std::move(flags));
  }
  return res;
}

}  // namespace qfst
