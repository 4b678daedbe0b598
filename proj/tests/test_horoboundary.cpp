#include <doctest.h>

#include <cmath>

#include "lorentzlab/errors.hpp"
#include "lorentzlab/horoboundary.hpp"
#include "lorentzlab/sampling.hpp"
#include "support/oracles.hpp"

using namespace lorentzlab;

namespace {

FrustumPoint random_frustum(Rng& rng, std::size_t dims) {
  double r = rng.uniform(0.05, 1.0);
  SparseVec x = random_unit(rng, 1, dims) * (r * rng.uniform(0.0, 1.0));
  return FrustumPoint(BallPoint(x, true), r);
}

BallPoint klein_pull(const HypIsometry& ginv, const BallPoint& y) {
  SparseVec im = ginv.apply(SparseVec::unit(0) + y.coords());
  double mu = im[0];
  SparseVec::Map ball;
  for (const auto& [i, v] : im.entries())
    if (i != 0) ball[i] = v / mu;
  return BallPoint(SparseVec(std::move(ball)), false);
}

double ball_sup(const FrustumPoint& a, const FrustumPoint& b) {
  return std::max(a.x().coords().sup_dist(b.x().coords()),
                  std::abs(a.r() - b.r()));
}

}  // namespace

TEST_CASE("FrustumPoint validates |x| <= r <= 1") {
  CHECK_NOTHROW(FrustumPoint(BallPoint(SparseVec::unit(1) * 0.5, true), 0.5));
  CHECK_THROWS_AS(FrustumPoint(BallPoint(SparseVec::unit(1) * 0.8, true), 0.4),
                  InvalidFrustumPair);
  CHECK_THROWS_AS(FrustumPoint(BallPoint(SparseVec(), true), 1.5),
                  InvalidFrustumPair);
}

TEST_CASE("horofunction vanishes exactly at the basepoint") {
  Rng rng(71);
  for (int i = 0; i < 30; ++i) {
    FrustumPoint f = random_frustum(rng, 6);
    CHECK(horofunction_eval(f, BallPoint(SparseVec(), false)) == 0.0);
  }
}

TEST_CASE("horofunction on the ideal sheet: frozen value") {
  FrustumPoint f(BallPoint(SparseVec::unit(1), true), 1.0);
  BallPoint y(SparseVec::unit(1) * 0.6, false);
  CHECK(horofunction_eval(f, y) ==
        doctest::Approx(-0.6931471805599453).epsilon(1e-12));
  CHECK_THROWS_AS(horofunction_eval(f, BallPoint(SparseVec::unit(2), false)),
                  OnBoundary);
}

TEST_CASE("the r = |x| sheet reproduces normalized Klein distances") {
  Rng rng(72);
  HPoint e0 = HPoint::origin();
  for (int i = 0; i < 200; ++i) {
    HPoint p = random_hpoint(rng, 6);
    HPoint q = random_hpoint(rng, 6);
    FrustumPoint f = embed_point(p);
    double expected = dist(p, q) - dist(p, e0);
    CHECK(horofunction_eval(f, to_klein(q)) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("embed_point examples") {
  FrustumPoint f0 = embed_point(HPoint::origin());
  CHECK(f0.r() == 0.0);
  CHECK(f0.x().norm() == 0.0);
  FrustumPoint f = embed_point(from_klein(BallPoint(SparseVec::unit(1) * 0.6, false)));
  CHECK(f.r() == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(f.x().coords()[1] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("horo_compare bounds and endpoint values") {
  Rng rng(73);
  for (int i = 0; i < 100; ++i) {
    HPoint x = random_hpoint(rng, 5), y = random_hpoint(rng, 5),
           z = random_hpoint(rng, 5);
    if (dist(y, z) < 1e-8) continue;
    double v = horo_compare(x, y, z);
    CHECK(std::abs(v) <= dist(y, z) + 1e-10);
    CHECK(horo_compare(y, y, z) == doctest::Approx(-dist(y, z)).epsilon(1e-12));
    CHECK(horo_compare(z, y, z) == doctest::Approx(dist(y, z)).epsilon(1e-12));
    // 2-Lipschitz in the argument
    HPoint x2 = random_hpoint(rng, 5);
    CHECK(std::abs(horo_compare(x, y, z) - horo_compare(x2, y, z)) <=
          2.0 * dist(x, x2) + 1e-10);
  }
  CHECK_THROWS_AS(horo_compare(HPoint::origin(), HPoint::origin(), HPoint::origin()),
                  CoincidentPoints);
}

TEST_CASE("the embedding x -> phi_x is isometric onto its image") {
  Rng rng(74);
  for (int i = 0; i < 100; ++i) {
    HPoint x = random_hpoint(rng, 5), y = random_hpoint(rng, 5);
    if (dist(x, y) < 1e-8) continue;
    double v = horo_compare(x, x, y) - horo_compare(y, x, y);
    CHECK(std::abs(std::abs(v) - 2.0 * dist(x, y)) < 1e-9);
  }
}

TEST_CASE("frustum_action: identity, embedding equivariance, group law") {
  Rng rng(75);
  for (int i = 0; i < 100; ++i) {
    FrustumPoint f = random_frustum(rng, 6);
    CHECK(ball_sup(frustum_action(HypIsometry::identity(), f), f) < 1e-15);

    HypIsometry g = random_hyp_isometry(rng, 6);
    HypIsometry h = random_hyp_isometry(rng, 6);
    HPoint p = random_hpoint(rng, 6);
    CHECK(ball_sup(frustum_action(g, embed_point(p)), embed_point(g.apply(p))) <
          1e-9);
    CHECK(ball_sup(frustum_action(g, frustum_action(h, f)),
                   frustum_action(compose(g, h), f)) < 1e-9);
  }
}

TEST_CASE("frustum_action matches the evaluation oracle") {
  Rng rng(76);
  for (int i = 0; i < 60; ++i) {
    HypIsometry g = random_hyp_isometry(rng, 5);
    HypIsometry ginv = inverse(g);
    FrustumPoint f = random_frustum(rng, 5);
    FrustumPoint moved = frustum_action(g, f);
    double base = horofunction_eval(f, klein_pull(ginv, BallPoint(SparseVec(), false)));
    for (int j = 0; j < 16; ++j) {
      BallPoint y(random_unit(rng, 1, 5) * rng.uniform(0.0, 0.8), false);
      double direct = horofunction_eval(moved, y);
      double oracle = horofunction_eval(f, klein_pull(ginv, y)) - base;
      CHECK(std::abs(direct - oracle) < 1e-8);
    }
  }
}

TEST_CASE("frustum_action restricted to r = 1 is the ideal-point action") {
  Rng rng(77);
  for (int i = 0; i < 60; ++i) {
    HypIsometry g = random_hyp_isometry(rng, 5);
    IdealPoint xi = random_ideal(rng, 5);
    FrustumPoint f(to_klein_ideal(xi), 1.0);
    FrustumPoint moved = frustum_action(g, f);
    CHECK(moved.r() == doctest::Approx(1.0).epsilon(1e-12));
    BallPoint expected = to_klein_ideal(g.apply(xi));
    CHECK(moved.x().coords().sup_dist(expected.coords()) < 1e-9);
  }
}

TEST_CASE("busemann_hom: rotations about the axis give 0, transvections -t") {
  IdealPoint xi(SparseVec{{0, 1.0}, {1, 1.0}});
  HPoint e0 = HPoint::origin();

  // rotation fixing the whole axis toward xi
  HPoint a(SparseVec{{0, std::cosh(1.0)}, {2, std::sinh(1.0)}});
  HPoint b(SparseVec{{0, std::cosh(1.0)}, {3, std::sinh(1.0)}});
  HypIsometry rho = rotation_mapping(e0, a, b);
  CHECK(std::abs(busemann_hom(rho, xi, e0)) < 1e-10);

  Geodesic axis(e0, SparseVec::unit(1));
  for (double t : {0.3, 1.0, 2.2}) {
    HypIsometry tr = transvection(axis, t);
    CHECK(busemann_hom(tr, xi, e0) == doctest::Approx(-t).epsilon(1e-10));
    CHECK(oracles::busemann_ray(xi, tr.apply(e0), e0) ==
          doctest::Approx(-t).epsilon(1e-6));
  }

  HypIsometry off = transvection(Geodesic(e0, SparseVec::unit(2)), 0.7);
  CHECK_THROWS_AS(busemann_hom(off, xi, e0), NotInStabilizer);
}

TEST_CASE("busemann_hom is additive and basepoint independent") {
  Rng rng(78);
  IdealPoint xi(SparseVec{{0, 1.0}, {1, 1.0}});
  HPoint e0 = HPoint::origin();
  Geodesic axis(e0, SparseVec::unit(1));
  for (int i = 0; i < 20; ++i) {
    HypIsometry g = transvection(axis, rng.uniform(-1.0, 1.0));
    HypIsometry h = transvection(axis, rng.uniform(-1.0, 1.0));
    double add = busemann_hom(compose(g, h), xi, e0) - busemann_hom(g, xi, e0) -
                 busemann_hom(h, xi, e0);
    CHECK(std::abs(add) < 1e-9);
    double ref = busemann_hom(g, xi, e0);
    double spread = 0.0;
    for (int k = 0; k < 5; ++k) {
      HPoint base = random_hpoint(rng, 5);
      spread = std::max(spread, std::abs(busemann_hom(g, xi, base) - ref));
    }
    CHECK(spread < 1e-8);
  }
}

TEST_CASE("cocycle: rotations at the basepoint, relation, bound") {
  Rng rng(79);
  HPoint x0 = HPoint::origin();
  // rotations centered at x0 have zero cocycle for every eta
  HPoint a(SparseVec{{0, std::cosh(0.8)}, {1, std::sinh(0.8)}});
  HPoint b(SparseVec{{0, std::cosh(0.8)}, {2, std::sinh(0.8)}});
  HypIsometry rho = rotation_mapping(x0, a, b);
  for (int i = 0; i < 20; ++i) {
    IdealPoint eta = random_ideal(rng, 5);
    CHECK(std::abs(cocycle(rho, eta, x0)) < 1e-10);
  }

  for (int i = 0; i < 100; ++i) {
    HypIsometry g = random_hyp_isometry(rng, 5);
    HypIsometry h = random_hyp_isometry(rng, 5);
    IdealPoint eta = random_ideal(rng, 5);
    double lhs = cocycle(compose(g, h), eta, x0);
    double rhs = cocycle(g, h.apply(eta), x0) + cocycle(h, eta, x0);
    CHECK(std::abs(lhs - rhs) < 1e-9);
    CHECK(std::abs(cocycle(g, eta, x0)) <= dist(x0, g.apply(x0)) + 1e-9);
  }
}

TEST_CASE("cocycle coincides with the Busemann homomorphism on the stabilizer") {
  IdealPoint xi(SparseVec{{0, 1.0}, {1, 1.0}});
  HPoint x0 = HPoint::origin();
  Geodesic axis(x0, SparseVec::unit(1));
  for (double t : {-1.2, 0.4, 0.9}) {
    HypIsometry g = transvection(axis, t);
    CHECK(cocycle(g, xi, x0) ==
          doctest::Approx(busemann_hom(g, xi, x0)).epsilon(1e-10));
  }
}

TEST_CASE("cocycle_ext restricts to the cocycle on the ideal sheet") {
  Rng rng(80);
  HPoint x0 = HPoint::origin();
  for (int i = 0; i < 60; ++i) {
    HypIsometry g = random_hyp_isometry(rng, 5);
    CHECK(cocycle_ext(HypIsometry::identity(),
                      FrustumPoint(BallPoint(SparseVec(), true), 1.0), x0) == 0.0);
    IdealPoint eta = random_ideal(rng, 5);
    FrustumPoint f(to_klein_ideal(eta), 1.0);
    CHECK(std::abs(cocycle_ext(g, f, x0) - cocycle(g, eta, x0)) < 1e-10);
  }
}

TEST_CASE("cocycle_ext satisfies the relation along the ball action") {
  Rng rng(81);
  HPoint x0 = HPoint::origin();
  for (int i = 0; i < 60; ++i) {
    HypIsometry g = random_hyp_isometry(rng, 5);
    HypIsometry h = random_hyp_isometry(rng, 5);
    FrustumPoint f = random_frustum(rng, 5);
    FrustumPoint sheet(f.x(), 1.0);
    FrustumPoint hf = frustum_action(h, sheet);
    double lhs = cocycle_ext(compose(g, h), sheet, x0);
    double rhs = cocycle_ext(g, hf, x0) + cocycle_ext(h, sheet, x0);
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("weak_convergence_probe basics") {
  std::vector<BallPoint> funcs = {BallPoint(SparseVec::unit(1) * 0.5, false),
                                  BallPoint(SparseVec::unit(2) * 0.5, false)};
  FrustumPoint cand(BallPoint(SparseVec::unit(1) * 0.3, true), 0.5);
  std::vector<FrustumPoint> constant(10, cand);
  ConvergenceReport rep = weak_convergence_probe(constant, cand, funcs, 5, 1e-12);
  CHECK(rep.pass);
  CHECK(rep.tail_defect == 0.0);

  // orthonormal directions converge weakly to the top of the frustum
  std::vector<FrustumPoint> seq;
  for (std::size_t n = 1; n <= 20; ++n)
    seq.push_back(FrustumPoint(BallPoint(SparseVec::unit(10 + n), true), 1.0));
  FrustumPoint top(BallPoint(SparseVec(), true), 1.0);
  ConvergenceReport rep2 = weak_convergence_probe(seq, top, funcs, 5, 1e-12);
  CHECK(rep2.pass);

  CHECK_THROWS_AS(weak_convergence_probe(constant, cand, {}, 5, 1e-12),
                  EmptyFunctionals);
}
