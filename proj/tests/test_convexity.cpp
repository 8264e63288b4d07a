#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "locconvex/bruhat.hpp"
#include "locconvex/convexity.hpp"
#include "locconvex/covering.hpp"
#include "locconvex/curves.hpp"
#include "locconvex/errors.hpp"
#include "oracles.hpp"

namespace {

using namespace locconvex;

Vec3 circle_pole(double c) {
  const double rho = std::asin(c / (2.0 * kPi));
  return Vec3(std::cos(rho), 0.0, std::sin(rho));
}

/// Unit normal whose plane clears the circle of length c by exactly `gap`:
/// min_t |n . sigma_c(t)| = gap, attained at an interior parameter.
Vec3 grazing_normal(double c, double gap) {
  const double rho = std::asin(c / (2.0 * kPi));
  double lo = std::sin(rho), hi = 0.999;
  for (int iter = 0; iter < 90; ++iter) {
    const double u = 0.5 * (lo + hi);
    const double v = std::cos(rho) * u - std::sin(rho) * std::sqrt(1.0 - u * u);
    (v < gap ? lo : hi) = u;
  }
  const double u = 0.5 * (lo + hi);
  const Vec3 pole = circle_pole(c);
  const Vec3 a(std::sin(rho), 0.0, -std::cos(rho));
  const Vec3 b = Vec3::UnitY();
  const Vec3 w = -(a + b).normalized();
  return (u * pole + std::sqrt(1.0 - u * u) * w).normalized();
}

AnalyticCurve reversed(const AnalyticCurve& curve) {
  return AnalyticCurve{curve.dim, curve.label, [curve](double t) {
                         Jet jet = curve.eval(1.0 - t);
                         jet.cols.col(1) *= -1.0;
                         jet.cols.col(3) *= -1.0;
                         return jet;
                       }};
}

AnalyticCurve reparametrized(const AnalyticCurve& curve, double a) {
  return AnalyticCurve{curve.dim, curve.label, [curve, a](double t) {
                         const double s = t + a * std::sin(2.0 * kPi * t) / (2.0 * kPi);
                         const double s1 = 1.0 + a * std::cos(2.0 * kPi * t);
                         const double s2 = -2.0 * kPi * a * std::sin(2.0 * kPi * t);
                         const double s3 = -4.0 * kPi * kPi * a * std::cos(2.0 * kPi * t);
                         const Jet inner = curve.eval(s);
                         Jet out = inner;
                         out.cols.col(1) = s1 * inner.d1();
                         out.cols.col(2) = s2 * inner.d1() + s1 * s1 * inner.d2();
                         out.cols.col(3) = s3 * inner.d1() + 3.0 * s2 * s1 * inner.d2() +
                                           s1 * s1 * s1 * inner.d3();
                         return out;
                       }};
}

/// x -> Ux/|Ux| applied to the trace, derivatives by central differences.
AnalyticCurve projective_image(const AnalyticCurve& curve, const MatX& u) {
  const auto point = [curve, u](double t) -> VecX {
    const VecX w = u * curve.point(t);
    return w / w.norm();
  };
  return AnalyticCurve{curve.dim, curve.label, [point, dim = curve.dim](double t) {
                         const double h = 1e-3;
                         Jet jet;
                         jet.cols.resize(dim, 4);
                         jet.cols.col(0) = point(t);
                         jet.cols.col(1) = (point(t + h) - point(t - h)) / (2.0 * h);
                         jet.cols.col(2) = (point(t + h) - 2.0 * point(t) + point(t - h)) / (h * h);
                         jet.cols.col(3) = (point(t + 2.0 * h) - 2.0 * point(t + h) +
                                            2.0 * point(t - h) - point(t - 2.0 * h)) /
                                           (2.0 * h * h * h);
                         return jet;
                       }};
}

AnalyticCurve seam_curve() {
  const auto point = [](double t) -> VecX {
    const double theta = 1.3 * std::sin(4.0 * kPi * t);
    const double phi = 2.0 * kPi * t;
    Vec3 p(std::cos(phi) * std::cos(theta), std::sin(phi) * std::cos(theta), std::sin(theta));
    return p;
  };
  return AnalyticCurve{3, "seam", [point](double t) {
                         const double h = 1e-5;
                         Jet jet;
                         jet.cols.resize(3, 4);
                         jet.cols.col(0) = point(t);
                         jet.cols.col(1) = (point(t + h) - point(t - h)) / (2.0 * h);
                         jet.cols.col(2) = (point(t + h) - 2.0 * point(t) + point(t - h)) / (h * h);
                         jet.cols.col(3) = (point(t + 2.0 * h) - 2.0 * point(t + h) +
                                            2.0 * point(t - h) - point(t - 2.0 * h)) /
                                           (2.0 * h * h * h);
                         return jet;
                       }};
}

MatX random_invertible(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  while (true) {
    MatX u(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) u(i, j) = entry(rng);
    if (std::abs(u.determinant()) > 0.2) return u;
  }
}

VecX random_unit_vec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  while (true) {
    VecX a(n);
    for (int i = 0; i < n; ++i) a[i] = gauss(rng);
    if (a.norm() > 0.1) return a / a.norm();
  }
}

}  // namespace

TEST_CASE("hyperplane construction normalizes and rejects the zero vector") {
  VecX n(3);
  n << 0.0, 0.0, 2.0;
  const Hyperplane plane = hyperplane(n);
  CHECK((plane.normal - Vec3(0.0, 0.0, 1.0)).norm() < 1e-15);
  CHECK_THROWS_WITH_AS((void)hyperplane(VecX::Zero(4)), doctest::Contains("nonzero"), InvalidInput);

  VecX wrong(4);
  wrong << 1.0, 0.0, 0.0, 0.0;
  CHECK_THROWS_AS((void)hyperplane_intersections(circle_sigma(kPi), Hyperplane{wrong}),
                  InvalidInput);
}

TEST_CASE("the fifth iterate of the first family meets a coordinate plane six times") {
  const IntersectionReport report =
      hyperplane_intersections(gamma1(5), hyperplane(VecX::Unit(4, 1)));
  REQUIRE(report.roots.size() == 4);
  const int expected_mult[] = {2, 1, 2, 1};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(report.roots[i].t - (i + 1) / 5.0) < 1e-9);
    CHECK(report.roots[i].multiplicity == expected_mult[i]);
  }
  CHECK(report.total == 6);
  CHECK(report.interior_only);
}

TEST_CASE("circles meet a random great circle twice or not at all, as the pole decides") {
  const double c = kPi;
  const AnalyticCurve circle = circle_sigma(c);
  const Vec3 pole = circle_pole(c);
  const double reach = c / (2.0 * kPi);

  auto rng = oracles::test_rng(70);
  int hits = 0, misses = 0;
  while (hits + misses < 50) {
    const VecX n = random_unit_vec(3, rng);
    const double overlap = std::abs(n.dot(pole));
    if (std::abs(overlap - reach) < 0.03) continue;
    const IntersectionReport report = hyperplane_intersections(circle, Hyperplane{n});
    if (overlap < reach) {
      ++hits;
      REQUIRE(report.roots.size() == 2);
      CHECK(report.total == 2);
      for (const IntersectionRoot& root : report.roots) {
        CHECK(root.multiplicity == 1);
        CHECK(root.t > 0.0);
        CHECK(root.t < 1.0);
        CHECK(std::abs(n.dot(circle.point(root.t))) < 1e-9);
      }
    } else {
      ++misses;
      CHECK(report.total == 0);
    }
  }
  CHECK(hits >= 10);
  CHECK(misses >= 10);
}

TEST_CASE("roots at the endpoints of the parameter interval are not counted") {
  const IntersectionReport report =
      hyperplane_intersections(circle_sigma(kPi), hyperplane(VecX::Unit(3, 1)));
  REQUIRE(report.roots.size() == 1);
  CHECK(std::abs(report.roots[0].t - 0.5) < 1e-9);
  CHECK(report.total == 1);
}

TEST_CASE("a curve inside its own hyperplane is reported as unresolved") {
  CHECK_THROWS_WITH_AS(
      (void)hyperplane_intersections(circle_sigma(2.0 * kPi), hyperplane(VecX::Unit(3, 2))),
      doctest::Contains("does not leave"), TangencyUnresolved);
}

TEST_CASE("near-tangent planes are flagged or counted with multiplicity two by depth") {
  const double c = kPi;
  const AnalyticCurve circle = circle_sigma(c);

  const Vec3 ambiguous = grazing_normal(c, 1e-7);
  try {
    (void)hyperplane_intersections(circle, Hyperplane{ambiguous});
    FAIL("expected an unresolved tangency");
  } catch (const TangencyUnresolved& e) {
    CHECK(std::abs(e.t - 0.125) < 1e-3);
  }

  const Vec3 touching = grazing_normal(c, 1e-8);
  const IntersectionReport report = hyperplane_intersections(circle, Hyperplane{touching});
  REQUIRE(report.roots.size() == 1);
  CHECK(std::abs(report.roots[0].t - 0.125) < 1e-3);
  CHECK(report.roots[0].multiplicity == 2);
  CHECK(report.total == 2);
}

TEST_CASE("nonconvexity certificates are found exactly when the curve is not convex") {
  const auto cert = nonconvexity_certificate(gamma1(5));
  REQUIRE(cert.has_value());
  CHECK(cert->report.total >= 4);
  CHECK(std::abs(cert->plane.normal.norm() - 1.0) < 1e-12);

  const IntersectionReport again = hyperplane_intersections(gamma1(5), cert->plane, 0.5e-7);
  CHECK(again.total == cert->report.total);
  REQUIRE(again.roots.size() == cert->report.roots.size());
  for (std::size_t i = 0; i < again.roots.size(); ++i) {
    CHECK(std::abs(again.roots[i].t - cert->report.roots[i].t) < 1e-9);
    CHECK(again.roots[i].multiplicity == cert->report.roots[i].multiplicity);
  }

  const auto looped = nonconvexity_certificate(iterate(circle_sigma(kPi), 5.0));
  REQUIRE(looped.has_value());
  CHECK(looped->report.total >= 3);

  CHECK_FALSE(nonconvexity_certificate(gamma1(1)).has_value());
  CHECK_FALSE(nonconvexity_certificate(circle_sigma(kPi)).has_value());
}

TEST_CASE("the affine chart of the first family is a reparametrized moment curve") {
  const AnalyticCurve chart = central_projection(gamma1(1));
  for (int i = 0; i <= 90; ++i) {
    const double s = i / 100.0;
    const double u = std::tan(s * kPi / 2.0);
    VecX expected(4);
    expected << 1.0, std::sqrt(3.0) * u, std::sqrt(3.0) * u * u, u * u * u;
    CHECK((chart.point(s) - expected).norm() < 1e-9);
  }

  CHECK_THROWS_AS((void)chart.point(1.0), FirstCoordinateVanishes);

  const AnalyticCurve planar{4, "flat circle", [](double t) {
                               Jet jet;
                               jet.cols.resize(4, 4);
                               jet.cols.setZero();
                               const double w = 2.0 * kPi;
                               jet.cols.col(0) << std::cos(w * t), std::sin(w * t), 0.0, 0.0;
                               jet.cols.col(1) << -w * std::sin(w * t), w * std::cos(w * t), 0.0,
                                   0.0;
                               jet.cols.col(2) = -w * w * jet.cols.col(0);
                               jet.cols.col(3) = -w * w * jet.cols.col(1);
                               return jet;
                             }};
  try {
    (void)central_projection(planar).point(0.5);
    FAIL("expected the chart to reject a vanishing first coordinate");
  } catch (const FirstCoordinateVanishes& e) {
    CHECK(e.t == 0.5);
  }

  CHECK_THROWS_AS((void)central_projection(circle_sigma(kPi)), InvalidInput);
}

TEST_CASE("chart jets follow the quotient rule") {
  const AnalyticCurve chart = central_projection(gamma1(1));
  const double h = 2e-4;
  for (double s : {0.1, 0.25, 0.4, 0.55}) {
    const Jet jet = chart.jet(s);
    const VecX d1 = (chart.point(s + h) - chart.point(s - h)) / (2.0 * h);
    const VecX d2 =
        (chart.point(s + h) - 2.0 * chart.point(s) + chart.point(s - h)) / (h * h);
    const VecX d3 = (chart.point(s + 2.0 * h) - 2.0 * chart.point(s + h) +
                     2.0 * chart.point(s - h) - chart.point(s - 2.0 * h)) /
                    (2.0 * h * h * h);
    CHECK((jet.d1() - d1).norm() < 1e-5 * (1.0 + d1.norm()));
    CHECK((jet.d2() - d2).norm() < 1e-4 * (1.0 + d2.norm()));
    CHECK((jet.d3() - d3).norm() < 1e-2 * (1.0 + d3.norm()));
  }
}

TEST_CASE("a curve already in the chart is left alone and obeys the factorial determinant") {
  const double a0 = 2.0, a1 = 3.0, a2 = 0.5, a3 = 1.5;
  const AnalyticCurve moment{4, "moment", [=](double t) {
                               Jet jet;
                               jet.cols.resize(4, 4);
                               jet.cols.setZero();
                               jet.cols.col(0) << a0, a1 * t, a2 * t * t, a3 * t * t * t;
                               jet.cols.col(1) << 0.0, a1, 2.0 * a2 * t, 3.0 * a3 * t * t;
                               jet.cols.col(2) << 0.0, 0.0, 2.0 * a2, 6.0 * a3 * t;
                               jet.cols.col(3) << 0.0, 0.0, 0.0, 6.0 * a3;
                               return jet;
                             }};
  for (double t : {0.0, 0.3, 0.8}) {
    CHECK(std::abs(moment.jet(t).cols.determinant() - 12.0 * a0 * a1 * a2 * a3) < 1e-9);
    const Jet chart = central_projection(moment).jet(t);
    CHECK((chart.cols - moment.jet(t).cols / a0).norm() < 1e-12);
  }

  const AnalyticCurve chart = central_projection(gamma1(1));
  for (double s : {0.0, 0.15, 0.3, 0.45, 0.6}) {
    const double stretch = (kPi / 2.0) / std::pow(std::cos(s * kPi / 2.0), 2.0);
    const double expected = 36.0 * std::pow(stretch, 6.0);
    CHECK(std::abs(chart.jet(s).cols.determinant() - expected) < 1e-6 * expected);
  }
}

TEST_CASE("iterated circles are multiconvex with evenly spaced return times") {
  for (int k = 1; k <= 3; ++k) {
    const auto times = is_multiconvex(iterate(circle_sigma(kPi), k), k);
    REQUIRE(times.has_value());
    REQUIRE(static_cast<int>(times->size()) == k + 1);
    CHECK((*times)[0] == 0.0);
    CHECK((*times)[k] == 1.0);
    for (int i = 0; i <= k; ++i) CHECK(std::abs((*times)[i] - static_cast<double>(i) / k) < 1e-6);
  }

  CHECK_FALSE(is_multiconvex(circle_sigma(kPi), 2).has_value());
  CHECK_FALSE(is_multiconvex(iterate(circle_sigma(kPi), 2.0), 3).has_value());

  CHECK_THROWS_AS((void)is_multiconvex(gamma1(1), 1), InvalidInput);
  CHECK_THROWS_AS((void)is_multiconvex(circle_sigma(kPi), 0), InvalidInput);
  CHECK_THROWS_AS((void)is_multiconvex(reversed(circle_sigma(kPi)), 1), InvalidInput);
}

TEST_CASE("hemisphere containment distinguishes open, borderline, and impossible cases") {
  const auto open_case = hemisphere_check(iterate(circle_sigma(kPi), 2.0));
  REQUIRE(open_case.has_value());
  CHECK_FALSE(open_case->borderline);
  CHECK(open_case->margin > 0.5);
  CHECK((open_case->pole - circle_pole(kPi)).norm() < 1e-6);

  const auto equator = hemisphere_check(circle_sigma(2.0 * kPi));
  REQUIRE(equator.has_value());
  CHECK(equator->borderline);
  CHECK(std::abs(equator->margin) < 1e-9);
  CHECK(std::abs(equator->pole.z()) > 1.0 - 1e-9);

  CHECK_FALSE(hemisphere_check(seam_curve()).has_value());

  CHECK_THROWS_WITH_AS((void)hemisphere_check(iterate(circle_sigma(kPi), 0.5)),
                       doctest::Contains("closed"), InvalidInput);
}

TEST_CASE("rotation numbers of circles count their loops") {
  const Vec3 pole = circle_pole(kPi);
  CHECK(rotation_number(circle_sigma(kPi), pole) == 1);

  const AnalyticCurve twice = iterate(circle_sigma(kPi), 2.0);
  const auto hemi = hemisphere_check(twice);
  REQUIRE(hemi.has_value());
  CHECK(rotation_number(twice, hemi->pole) == 2);

  const Vec3 tilted = (pole + Vec3(0.0, 0.25, 0.0)).normalized();
  CHECK(rotation_number(twice, tilted) == 2);

  CHECK(rotation_number(reversed(twice), hemi->pole) == -2);

  try {
    (void)rotation_number(reparametrized(circle_sigma(kPi), -1.0), pole);
    FAIL("expected the stalled clock to be rejected");
  } catch (const ImmersionLost& e) {
    CHECK(e.t == 0.0);
  }
}

TEST_CASE("intersection counts are projective invariants") {
  auto rng = oracles::test_rng(71);
  int done = 0;
  for (int attempt = 0; attempt < 60 && done < 12; ++attempt) {
    const MatX u = random_invertible(3, rng);
    const VecX a = random_unit_vec(3, rng);
    try {
      const int direct =
          hyperplane_intersections(circle_sigma(kPi), hyperplane(u.transpose() * a)).total;
      const int moved =
          hyperplane_intersections(projective_image(circle_sigma(kPi), u), hyperplane(a)).total;
      CHECK(direct == moved);
      ++done;
    } catch (const TangencyUnresolved&) {
    }
  }
  CHECK(done == 12);

  done = 0;
  const AnalyticCurve five = gamma1(5);
  for (int attempt = 0; attempt < 40 && done < 8; ++attempt) {
    const MatX u = random_invertible(4, rng);
    const VecX a = random_unit_vec(4, rng);
    try {
      const int direct =
          hyperplane_intersections(five, hyperplane(u.transpose() * a), 1e-7, 4096).total;
      const int moved =
          hyperplane_intersections(projective_image(five, u), hyperplane(a), 1e-7, 4096).total;
      CHECK(direct == moved);
      ++done;
    } catch (const TangencyUnresolved&) {
    }
  }
  CHECK(done == 8);
}

TEST_CASE("predicates do not depend on the parametrization") {
  const AnalyticCurve circle = circle_sigma(kPi);
  const AnalyticCurve warped = reparametrized(circle, 0.3);
  auto rng = oracles::test_rng(72);
  for (int trial = 0; trial < 10; ++trial) {
    const VecX n = random_unit_vec(3, rng);
    if (std::abs(std::abs(n.dot(circle_pole(kPi))) - 0.5) < 0.03) continue;
    CHECK(hyperplane_intersections(circle, Hyperplane{n}).total ==
          hyperplane_intersections(warped, Hyperplane{n}).total);
  }

  CHECK(rotation_number(warped, circle_pole(kPi)) == 1);

  const AnalyticCurve warped_twice = reparametrized(iterate(circle_sigma(kPi), 2.0), 0.3);
  const auto times = is_multiconvex(warped_twice, 2);
  REQUIRE(times.has_value());
  const double t1 = (*times)[1];
  const double unwarped = t1 + 0.3 * std::sin(2.0 * kPi * t1) / (2.0 * kPi);
  CHECK(std::abs(unwarped - 0.5) < 1e-5);
}

TEST_CASE("interior frames of a convex curve stay in the stably convex cell") {
  const SpinCellRep target = identify_cell_spin(
      SpinPair{UnitQuat(Quat{-1.0, 0.0, 0.0, 0.0}), UnitQuat(Quat{0.0, 0.0, 0.0, 1.0})});
  const std::vector<SpinPair> lift = lifted_frenet_path4(gamma1(1), 128);
  REQUIRE(lift.size() == 129);
  for (int i = 1; i < 128; ++i) {
    const SpinCellRep rep = identify_cell_spin(lift[i]);
    CHECK(rep.cell == target.cell);
    CHECK(is_stably_convex_spin(lift[i]));
  }
}
