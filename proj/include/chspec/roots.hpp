#pragma once

#include <chspec/error.hpp>
#include <chspec/poly.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace chspec {

namespace detail {

template <class R>
int sign_of(const R& v) {
  return v > R(0) ? 1 : (v < R(0) ? -1 : 0);
}

/// Cauchy bound on the moduli of the roots.
template <class R>
R cauchy_bound(const Poly<R>& p) {
  using std::abs;
  R lead = abs(p.leading());
  R m = R(0);
  for (int k = 0; k < p.degree(); ++k) m = std::max<R>(m, R(abs(p[k]) / lead));
  return R(1) + m;
}

/// Root estimates from the eigenvalues of the companion matrix, in double.
inline std::vector<double> companion_estimates(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  // Diagonal balancing keeps the estimates usable when the coefficients
  // span many orders of magnitude.
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  for (int sweep = 0; sweep < 20; ++sweep) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      double r = 0, col = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        r += std::abs(comp(i, j));
        col += std::abs(comp(j, i));
      }
      if (r == 0 || col == 0) continue;
      double f = std::sqrt(r / col);
      f = std::exp2(std::round(std::log2(f)));
      if (f < 0.5 || f > 2.0) {
        comp.row(i) /= f;
        comp.col(i) *= f;
        d(i) *= f;
        changed = true;
      }
    }
    if (!changed) break;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.begin(), out.end());
  return out;
}

/// Brackets [lo_i, hi_i] around each estimate, split at zero. Returns nothing
/// unless every bracket shows a strict sign change.
template <class R>
std::optional<std::vector<std::pair<R, R>>> brackets_from_estimates(const Poly<R>& p,
                                                                    const std::vector<double>& est) {
  const std::size_t n = est.size();
  R bound = cauchy_bound(p);
  std::vector<R> edges;
  edges.reserve(n + 1);
  edges.push_back(-bound);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double l = est[i], r = est[i + 1];
    if (!(l < r)) return std::nullopt;
    if (l < 0 && r > 0) {
      edges.push_back(R(0));
    } else {
      edges.push_back(R(0.5 * (l + r)));
    }
  }
  edges.push_back(bound);
  std::vector<std::pair<R, R>> out;
  out.reserve(n);
  int prev = sign_of(p(edges[0]));
  if (prev == 0) return std::nullopt;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i - 1] < edges[i])) return std::nullopt;
    int s = sign_of(p(edges[i]));
    if (s == 0 || s == prev) return std::nullopt;
    out.emplace_back(edges[i - 1], edges[i]);
    prev = s;
  }
  return out;
}

/// Safeguarded Newton iteration inside a bracket with a sign change.
template <class R>
R polish_in_bracket(const Poly<R>& p, const Poly<R>& dp, R lo, R hi, R x) {
  using std::abs;
  const R eps = std::numeric_limits<R>::epsilon();
  int slo = sign_of(p(lo));
  if (!(x > lo && x < hi)) x = (lo + hi) / 2;
  for (int it = 0; it < 400; ++it) {
    R fx = p(x);
    int sx = sign_of(fx);
    if (sx == 0) return x;
    if (sx == slo) {
      lo = x;
    } else {
      hi = x;
    }
    R dfx = dp(x);
    R next;
    bool newton_ok = false;
    if (dfx != R(0)) {
      next = x - fx / dfx;
      newton_ok = next > lo && next < hi;
    }
    if (!newton_ok) next = (lo + hi) / 2;
    R step = abs(next - x);
    x = next;
    R scale = std::max<R>(abs(x), std::numeric_limits<R>::min());
    if (step <= 4 * eps * scale || hi - lo <= 4 * eps * scale) break;
  }
  return x;
}

/// Root isolation for a real-rooted polynomial through the interlacing of
/// the roots of its derivative.
template <class R>
std::vector<R> interlacing_roots(const Poly<R>& p) {
  const int n = p.degree();
  if (n <= 0) return {};
  if (n == 1) return {-p[0] / p[1]};
  Poly<R> dp = p.derivative();
  std::vector<R> inner = interlacing_roots(dp);
  R bound = cauchy_bound(p);
  std::vector<R> edges;
  edges.push_back(-bound);
  edges.insert(edges.end(), inner.begin(), inner.end());
  edges.push_back(bound);
  std::vector<R> out;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    R lo = edges[i - 1], hi = edges[i];
    int a = sign_of(p(lo)), b = sign_of(p(hi));
    if (a == 0) {
      out.push_back(lo);
      continue;
    }
    if (b == 0) continue;  // picked up by the next bracket
    if (a == b) {
      throw Error(ErrorCode::root_count_mismatch,
                  "polynomial of degree " + std::to_string(n) + " is not numerically real-rooted");
    }
    out.push_back(polish_in_bracket(p, dp, lo, hi, (lo + hi) / 2));
  }
  if (static_cast<int>(out.size()) != n) {
    throw Error(ErrorCode::root_count_mismatch,
                "found " + std::to_string(out.size()) + " roots for degree " + std::to_string(n));
  }
  return out;
}

}  // namespace detail

/// All roots of a polynomial known to have only real, simple roots, sorted
/// ascending. Uses companion-matrix estimates, sign-change brackets and a
/// safeguarded Newton polish; falls back to derivative interlacing.
template <class R>
std::vector<R> real_roots(const Poly<R>& p) {
  const int n = p.degree();
  if (n <= 0) return {};
  std::vector<double> cd;
  for (const auto& v : p.coefficients()) cd.push_back(static_cast<double>(v));
  Poly<R> dp = p.derivative();

  std::optional<std::vector<std::pair<R, R>>> br;
  std::vector<double> est;
  bool finite = std::all_of(cd.begin(), cd.end(), [](double v) { return std::isfinite(v); }) &&
                cd.back() != 0.0;
  if (finite) {
    est = detail::companion_estimates(cd);
    br = detail::brackets_from_estimates(p, est);
    if (!br) {
      // Estimates for the reciprocal roots are accurate for small roots.
      std::vector<double> rev(cd.rbegin(), cd.rend());
      if (rev.back() != 0.0) {
        std::vector<double> inv = detail::companion_estimates(rev);
        for (auto& v : inv) v = 1.0 / v;
        std::sort(inv.begin(), inv.end());
        br = detail::brackets_from_estimates(p, inv);
        if (br) est = inv;
      }
    }
  }
  std::vector<R> roots;
  if (br) {
    roots.reserve(br->size());
    for (std::size_t i = 0; i < br->size(); ++i) {
      roots.push_back(detail::polish_in_bracket(p, dp, (*br)[i].first, (*br)[i].second, R(est[i])));
    }
  } else {
    roots = detail::interlacing_roots(p);
  }
  std::sort(roots.begin(), roots.end());
  using std::abs;
  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (abs(roots[i] - roots[i - 1]) <= R(1e-12) * abs(roots[i])) {
      throw Error(ErrorCode::duplicate_eigenvalue,
                  "roots " + std::to_string(static_cast<double>(roots[i - 1])) + " and " +
                      std::to_string(static_cast<double>(roots[i])) + " coincide");
    }
  }
  for (const auto& r : roots) {
    if (r == R(0)) throw Error(ErrorCode::root_count_mismatch, "zero root found");
  }
  return roots;
}

}  // namespace chspec
