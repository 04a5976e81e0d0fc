// Shared vocabulary for the equibu solvers: vector types, error kinds,
// small linear-algebra helpers and a deterministic parallel loop.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace equibu {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorKind {
  InvalidParameter,
  InvalidLabeling,
  InvalidInput,
  InvalidAnchor,
  DegenerateRealization,
  UnsupportedDimension,
  TooLarge,
  InvalidReport,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::InvalidLabeling: return "invalid-labeling";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InvalidAnchor: return "invalid-anchor";
    case ErrorKind::DegenerateRealization: return "degenerate-realization";
    case ErrorKind::UnsupportedDimension: return "unsupported-dimension";
    case ErrorKind::TooLarge: return "too-large";
    case ErrorKind::InvalidReport: return "invalid-report";
  }
  return "unknown";
}

/// Input or precondition error. The kind maps onto the CLI's exit code 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

inline int mod(int a, int p) {
  int r = a % p;
  return r < 0 ? r + p : r;
}

inline Vec normalized(const Vec& v) {
  const double n = v.norm();
  require(n > 1e-300, ErrorKind::DegenerateRealization, "cannot normalize the zero vector");
  return v / n;
}

/// Lexicographic "less" on coordinate vectors; used to pick orbit representatives.
inline bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) return true;
    if (a[k] > b[k]) return false;
  }
  return false;
}

/// Orthonormal basis (columns) of the sum-zero hyperplane in R^n, by
/// Gram-Schmidt on e_k - (1/n)1 for k = 0..n-2. Column 0 is parallel to
/// e_0 - (1/n)1.
inline Mat sum_zero_basis(int n) {
  Mat basis(n, std::max(n - 1, 0));
  int filled = 0;
  for (int k = 0; k < n - 1; ++k) {
    Vec v = -Vec::Ones(n) / n;
    v[k] += 1.0;
    for (int c = 0; c < filled; ++c) v -= basis.col(c).dot(v) * basis.col(c);
    basis.col(filled++) = v.normalized();
  }
  return basis;
}

/// Orthonormal basis of the tangent space of the unit sphere at `x`.
inline Mat tangent_basis(const Vec& x) {
  const auto m = x.size();
  Mat out(m, m - 1);
  std::vector<Vec> picked;
  picked.push_back(x.normalized());
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  // Prefer axes least aligned with x for conditioning; stable for determinism.
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(x[a]) < std::abs(x[b]); });
  int filled = 0;
  for (int axis : order) {
    if (filled == m - 1) break;
    Vec v = Vec::Unit(m, axis);
    for (const auto& q : picked) v -= q.dot(v) * q;
    if (v.norm() < 1e-8) continue;
    v.normalize();
    picked.push_back(v);
    out.col(filled++) = v;
  }
  return out;
}

/// Vertices (columns) of a regular n-simplex in R^n centred at the origin
/// with unit circumradius.
inline Mat regular_simplex(int n) {
  Mat basis = sum_zero_basis(n + 1);
  Mat out(n, n + 1);
  for (int k = 0; k <= n; ++k) {
    Vec e = -Vec::Ones(n + 1) / (n + 1);
    e[k] += 1.0;
    out.col(k) = (basis.transpose() * e).normalized();
  }
  return out;
}

inline int thread_budget() {
  if (const char* env = std::getenv("EQUIBU_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [0, count). Work is split into contiguous chunks;
/// callers write results into per-index slots so the outcome does not depend
/// on scheduling. The first exception (by chunk order) is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const int threads = std::min<int>(thread_budget(), static_cast<int>(count / 256) + 1);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace equibu
