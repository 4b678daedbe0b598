#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracles {

double nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                   Eigen::VectorXd start, double step, int iterations) {
  const Eigen::Index n = start.size();
  struct Vertex {
    Eigen::VectorXd x;
    double v;
  };
  std::vector<Vertex> s;
  s.push_back({start, f(start)});
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd x = start;
    x[i] += step;
    s.push_back({x, f(x)});
  }
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.v < b.v; };
  for (int it = 0; it < iterations; ++it) {
    std::sort(s.begin(), s.end(), by_value);
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) centroid += s[static_cast<std::size_t>(i)].x;
    centroid /= static_cast<double>(n);
    Vertex& worst = s.back();
    Eigen::VectorXd refl = centroid + (centroid - worst.x);
    double fr = f(refl);
    if (fr < s.front().v) {
      Eigen::VectorXd exp_ = centroid + 2.0 * (centroid - worst.x);
      double fe = f(exp_);
      worst = fe < fr ? Vertex{exp_, fe} : Vertex{refl, fr};
    } else if (fr < s[s.size() - 2].v) {
      worst = {refl, fr};
    } else {
      Eigen::VectorXd con = centroid + 0.5 * (worst.x - centroid);
      double fc = f(con);
      if (fc < worst.v) {
        worst = {con, fc};
      } else {
        for (std::size_t i = 1; i < s.size(); ++i) {
          s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
          s[i].v = f(s[i].x);
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), by_value);
  return s.front().v;
}

double min_displacement_hyp(const HypIsometry& g, Rng& rng, int starts) {
  const IndexSet& active = g.active();
  const Eigen::Index n = static_cast<Eigen::Index>(active.size()) - 1;
  // chart v in R^n |-> (sqrt(1 + |v|^2), v) on the active subspace
  auto to_point = [&](const Eigen::VectorXd& v) {
    SparseVec::Map m;
    double n2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      m[active[static_cast<std::size_t>(i) + 1]] = v[i];
      n2 += v[i] * v[i];
    }
    m[0] = std::sqrt(1.0 + n2);
    return HPoint(SparseVec(std::move(m)));
  };
  auto objective = [&](const Eigen::VectorXd& v) {
    HPoint x = to_point(v);
    return dist(g.apply(x), x);
  };
  double best = objective(Eigen::VectorXd::Zero(n));
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = 3.0 * rng.normal();
    double local = nelder_mead(objective, v, 0.5, 600);
    best = std::min(best, local);
  }
  return best;
}

double min_displacement_euc(const EucIsometry& g, Rng& rng, int starts) {
  const IndexSet& active = g.active();
  const Eigen::Index n = static_cast<Eigen::Index>(active.size());
  auto objective = [&](const Eigen::VectorXd& v) {
    SparseVec x = to_sparse(v, active);
    return (g.apply(x) - x).norm();
  };
  double best = objective(Eigen::VectorXd::Zero(n));
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = 4.0 * rng.normal();
    best = std::min(best, nelder_mead(objective, v, 0.7, 500));
  }
  return best;
}

double busemann_ray(const IdealPoint& xi, const HPoint& x, const HPoint& base,
                    double s) {
  Geodesic ray = geodesic_toward(base, xi);
  return dist(x, geodesic_eval(ray, s)) - s;
}

double triangle_angle(double a, double b, double c) {
  double cosv = (std::cosh(b) * std::cosh(c) - std::cosh(a)) /
                (std::sinh(b) * std::sinh(c));
  if (cosv > 1.0) cosv = 1.0;
  if (cosv < -1.0) cosv = -1.0;
  return std::acos(cosv);
}

}  // namespace oracles
