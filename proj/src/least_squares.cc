// Copyright 2026 The weakprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "weakprobe/least_squares.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "weakprobe/error.h"

namespace weakprobe {
namespace {

struct Problem {
  const ResidualFn& fn;
  Eigen::VectorXd lower, upper, scale;
  int evaluations = 0;

  Eigen::VectorXd project(Eigen::VectorXd x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
  }
  Eigen::VectorXd residual(const Eigen::VectorXd& x) {
    ++evaluations;
    Eigen::VectorXd r = fn(x);
    if (!r.allFinite()) {
      throw DomainError("least squares: residual is not finite");
    }
    return r;
  }
  double cost(const Eigen::VectorXd& x) { return residual(x).squaredNorm(); }
};

Problem make_problem(const ResidualFn& fn, const Eigen::VectorXd& x0,
                     const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                     const LsqOptions& opt) {
  const Eigen::Index n = x0.size();
  if (lower.size() != n || upper.size() != n) {
    throw ValidationError("least squares: bound sizes differ from x0");
  }
  if ((lower.array() > upper.array()).any()) {
    throw ValidationError("least squares: lower bound exceeds upper bound");
  }
  Eigen::VectorXd scale = opt.scale;
  if (scale.size() == 0) {
    scale = x0.cwiseAbs().cwiseMax(1.0);
  } else if (scale.size() != n || (scale.array() <= 0).any()) {
    throw ValidationError("least squares: scale must be positive, one per x");
  }
  return Problem{fn, lower, upper, scale};
}

}  // namespace

LsqResult levenberg_marquardt(const ResidualFn& fn, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& lower,
                              const Eigen::VectorXd& upper,
                              const LsqOptions& opt) {
  Problem p = make_problem(fn, x0, lower, upper, opt);
  const Eigen::Index n = x0.size();
  Eigen::VectorXd x = p.project(x0);
  Eigen::VectorXd r = p.residual(x);
  if (r.size() < n) {
    throw ValidationError("least squares: fewer residuals than parameters");
  }
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  int stalled = 0;
  LsqResult res;

  for (int it = 1; it <= opt.max_iters; ++it) {
    res.iterations = it;
    if (cost == 0.0) {
      res.converged = true;
      break;
    }
    // Jacobian in scaled coordinates u = x / scale.
    Eigen::MatrixXd J(r.size(), n);
    for (Eigen::Index k = 0; k < n; ++k) {
      double h = opt.jacobian_step * std::max(std::abs(x(k)), p.scale(k));
      Eigen::VectorXd xh = x;
      xh(k) += h;
      if (xh(k) > p.upper(k)) {
        h = -h;
        xh(k) = x(k) + h;
      }
      J.col(k) = (p.residual(xh) - r) / h * p.scale(k);
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() <=
        std::numeric_limits<double>::epsilon() * std::max(cost, 1e-300)) {
      res.converged = true;
      break;
    }

    // Parameters pinned at a bound with the descent direction pointing out
    // of the box are held fixed for this step.
    std::vector<Eigen::Index> active;
    for (Eigen::Index k = 0; k < n; ++k) {
      const bool at_lo = x(k) <= p.lower(k) && g(k) > 0;
      const bool at_hi = x(k) >= p.upper(k) && g(k) < 0;
      if (!at_lo && !at_hi) active.push_back(k);
    }
    if (active.empty()) {
      res.converged = true;  // KKT point on a vertex of the box
      break;
    }
    const auto m = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd H(m, m);
    Eigen::VectorXd gf(m);
    for (Eigen::Index a = 0; a < m; ++a) {
      gf(a) = g(active[a]);
      for (Eigen::Index b = 0; b < m; ++b) H(a, b) = JtJ(active[a], active[b]);
    }

    // Inner loop: raise damping until the projected step lowers the cost.
    bool accepted = false;
    double step_rel = 0.0, new_cost = cost;
    Eigen::VectorXd x_new, r_new;
    for (int tries = 0; tries < 40 && lambda < 1e20; ++tries) {
      Eigen::MatrixXd A = H;
      A.diagonal() +=
          lambda * H.diagonal().cwiseMax(1e-12 * H.diagonal().maxCoeff() + 1e-300);
      const Eigen::VectorXd duf = A.ldlt().solve(-gf);
      Eigen::VectorXd du = Eigen::VectorXd::Zero(n);
      for (Eigen::Index a = 0; a < m; ++a) du(active[a]) = duf(a);
      x_new = p.project(x + du.cwiseProduct(p.scale));
      const Eigen::VectorXd dx_scaled = (x_new - x).cwiseQuotient(p.scale);
      step_rel = dx_scaled.norm() / (x.cwiseQuotient(p.scale).norm() + 1e-10);
      r_new = p.residual(x_new);
      new_cost = r_new.squaredNorm();
      if (new_cost < cost) {
        accepted = true;
        break;
      }
      if (step_rel < opt.step_tol) break;
      lambda *= 4.0;
    }

    if (!accepted) {
      // No descent along any damped direction: the step has collapsed.
      if (++stalled >= opt.patience || lambda >= 1e20) {
        res.converged = true;
        break;
      }
      continue;
    }
    const double rel_decrease = (cost - new_cost) / cost;
    x = x_new;
    r = r_new;
    cost = new_cost;
    lambda = std::max(lambda / 3.0, 1e-12);
    if (rel_decrease < opt.rel_cost_tol || step_rel < opt.step_tol) {
      if (++stalled >= opt.patience) {
        res.converged = true;
        break;
      }
    } else {
      stalled = 0;
    }
  }
  res.x = x;
  res.cost = cost;
  res.evaluations = p.evaluations;
  return res;
}

LsqResult nelder_mead(const ResidualFn& fn, const Eigen::VectorXd& x0,
                      const Eigen::VectorXd& lower,
                      const Eigen::VectorXd& upper, const LsqOptions& opt) {
  Problem p = make_problem(fn, x0, lower, upper, opt);
  const Eigen::Index n = x0.size();
  // Simplex in scaled coordinates.
  auto to_x = [&](const Eigen::VectorXd& u) {
    return p.project(u.cwiseProduct(p.scale));
  };
  std::vector<Eigen::VectorXd> s;
  std::vector<double> f;
  const Eigen::VectorXd u0 = p.project(x0).cwiseQuotient(p.scale);
  s.push_back(u0);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd u = u0;
    u(k) += (u(k) != 0.0 ? 0.05 * std::abs(u(k)) : 0.05);
    s.push_back(u);
  }
  for (auto& u : s) {
    u = to_x(u).cwiseQuotient(p.scale);
    f.push_back(p.cost(to_x(u)));
  }

  LsqResult res;
  int stalled = 0;
  std::vector<size_t> idx(s.size());
  for (int it = 1; it <= opt.max_iters; ++it) {
    res.iterations = it;
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return f[a] < f[b]; });
    const size_t best = idx.front(), worst = idx.back(), second = idx[idx.size() - 2];
    const double spread = (f[worst] - f[best]) / std::max(std::abs(f[best]), 1e-300);
    double size = 0.0;
    for (const auto& u : s) size = std::max(size, (u - s[best]).norm());
    size /= (s[best].norm() + 1e-10);
    if (f[best] == 0.0 || spread < opt.rel_cost_tol || size < opt.step_tol) {
      if (++stalled >= opt.patience) {
        res.converged = true;
        break;
      }
    } else {
      stalled = 0;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (size_t k = 0; k < s.size(); ++k)
      if (k != worst) centroid += s[k];
    centroid /= static_cast<double>(n);
    auto trial = [&](double t) {
      Eigen::VectorXd u = centroid + t * (s[worst] - centroid);
      u = to_x(u).cwiseQuotient(p.scale);
      return std::make_pair(u, p.cost(to_x(u)));
    };
    auto [ur, fr] = trial(-1.0);
    if (fr < f[best]) {
      auto [ue, fe] = trial(-2.0);
      if (fe < fr) {
        s[worst] = ue, f[worst] = fe;
      } else {
        s[worst] = ur, f[worst] = fr;
      }
    } else if (fr < f[second]) {
      s[worst] = ur, f[worst] = fr;
    } else {
      auto [uc, fc] = fr < f[worst] ? trial(-0.5) : trial(0.5);
      if (fc < std::min(fr, f[worst])) {
        s[worst] = uc, f[worst] = fc;
      } else {
        for (size_t k = 0; k < s.size(); ++k) {
          if (k == best) continue;
          s[k] = s[best] + 0.5 * (s[k] - s[best]);
          f[k] = p.cost(to_x(s[k]));
        }
      }
    }
  }
  const size_t best =
      static_cast<size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  res.x = to_x(s[best]);
  res.cost = f[best];
  res.evaluations = p.evaluations;
  return res;
}

}  // namespace weakprobe
