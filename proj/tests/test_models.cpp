#include <doctest.h>

#include <cmath>

#include "lorentzlab/errors.hpp"
#include "lorentzlab/isometry.hpp"
#include "lorentzlab/models.hpp"
#include "lorentzlab/sampling.hpp"
#include "support/oracles.hpp"

using namespace lorentzlab;

namespace {
HPoint boost(double t, std::size_t axis = 1) {
  return HPoint(SparseVec{{0, std::cosh(t)}, {axis, std::sinh(t)}});
}
}  // namespace

TEST_CASE("dist basics") {
  HPoint e0 = HPoint::origin();
  CHECK(dist(e0, e0) == 0.0);
  CHECK(dist(e0, boost(1.0)) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("dist is symmetric and satisfies the triangle inequality") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    HPoint x = random_hpoint(rng, 8);
    HPoint y = random_hpoint(rng, 8);
    HPoint z = random_hpoint(rng, 8);
    CHECK(dist(x, y) == doctest::Approx(dist(y, x)).epsilon(1e-12));
    CHECK(dist(x, z) <= dist(x, y) + dist(y, z) + 1e-10);
  }
}

TEST_CASE("dist resolves small separations") {
  // the naive arccosh form loses everything below sqrt(ulp) ~ 1e-8
  HPoint a = boost(0.5);
  HPoint b = boost(0.5 + 1e-6);
  CHECK(dist(a, b) == doctest::Approx(1e-6).epsilon(1e-8));
  HPoint c = boost(0.5 + 1e-11);
  CHECK(dist(a, c) == doctest::Approx(1e-11).epsilon(1e-4));
}

TEST_CASE("from_klein examples") {
  CHECK(dist(from_klein(BallPoint(SparseVec(), false)), HPoint::origin()) == 0.0);
  HPoint p = from_klein(BallPoint(SparseVec::unit(1) * 0.6, false));
  CHECK(p.coords()[0] == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(p.coords()[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK_THROWS_AS(from_klein(BallPoint(SparseVec::unit(1), false)), OnBoundary);
}

TEST_CASE("to_klein examples and ideal boundary") {
  CHECK(to_klein(HPoint::origin()).norm() == 0.0);
  BallPoint b = to_klein(HPoint(SparseVec{{0, 1.25}, {1, 0.75}}));
  CHECK(b.coords()[1] == doctest::Approx(0.6).epsilon(1e-14));
  IdealPoint xi(SparseVec{{0, 1.0}, {1, 1.0}});
  CHECK(to_klein_ideal(xi).norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("klein round trip on random points") {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    SparseVec v = random_unit(rng, 1, 8) * (0.99 * rng.uniform());
    BallPoint b(v, false);
    CHECK(to_klein(from_klein(b)).coords().sup_dist(v) < 1e-10);
  }
}

TEST_CASE("geodesics: eval, midpoint, ideal endpoints") {
  HPoint e0 = HPoint::origin();
  Geodesic g(e0, SparseVec::unit(1));
  HPoint at1 = geodesic_eval(g, 1.0);
  CHECK(at1.coords()[0] == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
  CHECK(at1.coords()[1] == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));

  HPoint m = midpoint(e0, boost(2.0));
  CHECK(dist(m, boost(1.0)) < 1e-12);

  IdealPoint plus = ideal_endpoint(g, +1);
  CHECK(plus.coords()[0] == 1.0);
  CHECK(plus.coords()[1] == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(geodesic_through(e0, e0), CoincidentPoints);
}

TEST_CASE("geodesic_through hits both endpoints at the right parameters") {
  Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    HPoint x = random_hpoint(rng, 6);
    HPoint y = random_hpoint(rng, 6);
    if (dist(x, y) < 1e-6) continue;
    Geodesic g = geodesic_through(x, y);
    CHECK(dist(geodesic_eval(g, 0.0), x) < 1e-10);
    CHECK(dist(geodesic_eval(g, dist(x, y)), y) < 1e-10);
    HPoint m = midpoint(x, y);
    CHECK(dist(x, m) == doctest::Approx(dist(x, y) / 2).epsilon(1e-10));
    CHECK(dist(m, y) == doctest::Approx(dist(x, y) / 2).epsilon(1e-10));
  }
}

TEST_CASE("angle examples") {
  HPoint e0 = HPoint::origin();
  CHECK(angle(e0, boost(1.0, 1), boost(1.0, 2)) ==
        doctest::Approx(1.5707963267948966).epsilon(1e-12));
  Geodesic g(e0, SparseVec::unit(1));
  CHECK(angle(boost(0.0), geodesic_eval(g, 1.0), geodesic_eval(g, 2.0)) <
        1e-7);
  CHECK_THROWS_AS(angle(e0, e0, boost(1.0)), CoincidentPoints);
}

TEST_CASE("angle matches the planar law of cosines") {
  Rng rng(24);
  for (int i = 0; i < 100; ++i) {
    HPoint p = random_hpoint(rng, 2);
    HPoint a = random_hpoint(rng, 2);
    HPoint b = random_hpoint(rng, 2);
    double pa = dist(p, a), pb = dist(p, b), ab = dist(a, b);
    if (pa < 0.05 || pb < 0.05) continue;
    double expected = oracles::triangle_angle(ab, pa, pb);
    CHECK(angle(p, a, b) == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("angle is isometry invariant") {
  Rng rng(25);
  for (int i = 0; i < 50; ++i) {
    HPoint p = random_hpoint(rng, 6);
    HPoint a = random_hpoint(rng, 6);
    HPoint b = random_hpoint(rng, 6);
    if (dist(p, a) < 0.05 || dist(p, b) < 0.05) continue;
    HypIsometry g = random_hyp_isometry(rng, 6);
    double before = angle(p, a, b);
    double after = angle(g.apply(p), g.apply(a), g.apply(b));
    CHECK(std::abs(before - after) < 1e-8);
  }
}

TEST_CASE("busemann closed form: basepoint, axis value, ray oracle") {
  IdealPoint xi(SparseVec{{0, 1.0}, {1, 1.0}});
  HPoint e0 = HPoint::origin();
  CHECK(busemann(xi, e0, e0) == 0.0);
  // frozen oracle value: along the ray toward xi the Busemann function is -t
  CHECK(busemann(xi, boost(0.7), e0) == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(oracles::busemann_ray(xi, boost(0.7), e0) ==
        doctest::Approx(-0.7).epsilon(1e-6));
}

TEST_CASE("busemann agrees with the ray limit oracle on random data") {
  Rng rng(26);
  for (int i = 0; i < 50; ++i) {
    IdealPoint xi = random_ideal(rng, 6);
    HPoint x = random_hpoint(rng, 6);
    HPoint base = random_hpoint(rng, 6);
    double closed = busemann(xi, x, base);
    double ray = oracles::busemann_ray(xi, x, base);
    CHECK(std::abs(closed - ray) < 1e-6);
  }
}

TEST_CASE("busemann is an additive cocycle in the basepoint pair") {
  Rng rng(27);
  for (int i = 0; i < 100; ++i) {
    IdealPoint xi = random_ideal(rng, 6);
    HPoint x = random_hpoint(rng, 6), y = random_hpoint(rng, 6),
           z = random_hpoint(rng, 6);
    double defect =
        busemann(xi, x, z) - busemann(xi, x, y) - busemann(xi, y, z);
    CHECK(std::abs(defect) < 1e-9);
  }
}

TEST_CASE("busemann is 1-Lipschitz") {
  Rng rng(28);
  for (int i = 0; i < 100; ++i) {
    IdealPoint xi = random_ideal(rng, 6);
    HPoint base = random_hpoint(rng, 6);
    HPoint x = random_hpoint(rng, 6), y = random_hpoint(rng, 6);
    CHECK(std::abs(busemann(xi, x, base) - busemann(xi, y, base)) <=
          dist(x, y) + 1e-9);
  }
}

TEST_CASE("sigma_hilbert examples and round trip") {
  CHECK(sigma_hilbert(SparseVec()).norm() == 0.0);
  BallPoint b = sigma_hilbert(SparseVec::unit(1) * (4.0 / 3.0));
  CHECK(b.coords()[1] == doctest::Approx(0.8).epsilon(1e-14));
  Rng rng(29);
  for (int i = 0; i < 100; ++i) {
    SparseVec v = random_vec(rng, 1, 8, 2.0);
    SparseVec back = sigma_hilbert_inverse(sigma_hilbert(v));
    CHECK(back.sup_dist(v) < 1e-12 * (1.0 + v.norm()));
  }
  CHECK_THROWS_AS(sigma_hilbert_inverse(BallPoint(SparseVec::unit(1), true)),
                  OnBoundary);
}

TEST_CASE("cosh dist equals the form on random pairs") {
  Rng rng(30);
  for (int i = 0; i < 300; ++i) {
    HPoint x = random_hpoint(rng, 8);
    HPoint y = random_hpoint(rng, 8);
    double f = lorentz_form(x.coords(), y.coords());
    CHECK(std::abs(std::cosh(dist(x, y)) - f) <= 1e-9 * std::max(1.0, f));
  }
}
