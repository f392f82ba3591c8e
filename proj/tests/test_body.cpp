#include <doctest.h>

#include <numbers>

#include <hbm/body.hpp>

using namespace hbm;
const double pi = std::numbers::pi;

namespace {
struct Ctx {
    std::shared_ptr<const SphereGrid> grid;
    std::shared_ptr<const HarmonicBasis> basis;
};
Ctx ctx2() {
    static Ctx c = [] {
        Ctx c;
        c.grid = build_grid(2, 256);
        c.basis = build_basis(c.grid, 64);
        return c;
    }();
    return c;
}
Ctx ctx3() {
    static Ctx c = [] {
        Ctx c;
        c.grid = build_grid(3, 64);
        c.basis = build_basis(c.grid, 16);
        return c;
    }();
    return c;
}
} // namespace

TEST_CASE("ball: exact support function, volume, distance") {
    auto [g2, b2] = ctx2();
    Body B2 = make_ball(g2, b2);
    CHECK(B2.h().minCoeff() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(volume(B2) == doctest::Approx(pi).epsilon(1e-13));
    CHECK(polar_volume(B2) == doctest::Approx(pi).epsilon(1e-13));
    CHECK(geometric_distance(B2) == doctest::Approx(1.0).epsilon(1e-13));

    auto [g3, b3] = ctx3();
    Body B3 = make_ball(g3, b3, 2.0);
    CHECK(volume(B3) == doctest::Approx(8 * 4 * pi / 3).epsilon(1e-13));
    CHECK(polar_volume(B3) == doctest::Approx((4 * pi / 3) / 8).epsilon(1e-13));
}

TEST_CASE("ellipsoid: volume and polar volume match det formulas") {
    auto [g3, b3] = ctx3();
    Eigen::Matrix3d A = Eigen::Vector3d(1.6, 1.0, 0.625).asDiagonal();
    Body E = make_ellipsoid(g3, b3, A);
    double kappa = 4 * pi / 3;
    CHECK(volume(E) == doctest::Approx(kappa * A.determinant()).epsilon(1e-6));
    CHECK(polar_volume(E) ==
          doctest::Approx(kappa / A.determinant()).epsilon(1e-6));
    CHECK(geometric_distance(E) == doctest::Approx(1.6 / 0.625).epsilon(5e-3));

    auto [g2, b2] = ctx2();
    Eigen::Matrix2d A2 = Eigen::Vector2d(2.0, 0.5).asDiagonal();
    Body E2 = make_ellipsoid(g2, b2, A2);
    CHECK(volume(E2) == doctest::Approx(pi).epsilon(1e-10));
    CHECK(polar_volume(E2) == doctest::Approx(pi).epsilon(1e-10));
}

TEST_CASE("measure totals: S_K, V_K, S_pK on balls and scaling law") {
    auto [g3, b3] = ctx3();
    Body B = make_ball(g3, b3, 1.5);
    // surface area of a radius-r sphere and V = (r/n) S
    auto sk = measures(B, MeasureField::Kind::SK);
    CHECK(sk.total == doctest::Approx(4 * pi * 1.5 * 1.5).epsilon(1e-13));
    auto vk = measures(B, MeasureField::Kind::VK);
    CHECK(vk.total == doctest::Approx(volume(B)).epsilon(1e-14));
    // S_p(cB) = c^{n-p} S_p(B)
    double p = 0.7;
    auto sp1 = measures(make_ball(g3, b3, 1.0), MeasureField::Kind::SpK, p);
    auto sp2 = measures(B, MeasureField::Kind::SpK, p);
    CHECK(sp2.total ==
          doctest::Approx(std::pow(1.5, 3 - p) * sp1.total).epsilon(1e-12));
}

TEST_CASE("apply_linear: ellipsoid pushforward and identity fast path") {
    auto [g3, b3] = ctx3();
    Eigen::Matrix3d A = Eigen::Vector3d(1.3, 1.0, 0.8).asDiagonal();
    Body E = make_ellipsoid(g3, b3, A);

    Body same = apply_linear(E, Eigen::Matrix3d::Identity());
    CHECK(same.coeffs == E.coeffs); // bit identical

    Eigen::Matrix3d T;
    T << 1.1, 0.2, 0.0, 0.0, 0.9, 0.1, 0.05, 0.0, 1.0;
    Body TE = apply_linear(E, T);
    Body TE_direct = make_ellipsoid(g3, b3, T * A);
    CHECK((TE.coeffs - TE_direct.coeffs).cwiseAbs().maxCoeff() < 1e-7);
    CHECK(volume(TE) ==
          doctest::Approx(std::abs(T.determinant()) * volume(E)).epsilon(1e-7));
}

TEST_CASE("apply_linear in the plane") {
    auto [g2, b2] = ctx2();
    Body K = make_random_even(g2, b2, 7, 0.2);
    Eigen::Matrix2d T;
    T << 1.2, 0.3, -0.1, 0.95;
    Body TK = apply_linear(K, T);
    CHECK(volume(TK) ==
          doctest::Approx(std::abs(T.determinant()) * volume(K)).epsilon(1e-9));
    // h_{TK}(u) = h_K(T^T u) spot check at a node
    int k = 37;
    Eigen::Vector2d u = g2->nodes.row(k);
    Eigen::Vector2d v = T.transpose() * u;
    double expect =
        v.norm() * evaluate_expansion(*b2, K.coeffs, v.normalized());
    CHECK(TK.h()[k] == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("random_even: deterministic, even, unit volume, strictly convex") {
    auto [g3, b3] = ctx3();
    Body K1 = make_random_even(g3, b3, 42, 0.3);
    Body K2 = make_random_even(g3, b3, 42, 0.3);
    CHECK(K1.coeffs == K2.coeffs);
    Body K3 = make_random_even(g3, b3, 43, 0.3);
    CHECK(K1.coeffs != K3.coeffs);
    CHECK(volume(K1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(K1.min_eig.minCoeff() > 0.0);
    for (int a = 0; a < b3->count; ++a)
        if (!b3->even[a]) CHECK(K1.coeffs[a] == 0.0);
}

TEST_CASE("random_even rejects amplitudes that break convexity") {
    auto [g3, b3] = ctx3();
    CHECK_THROWS_AS(make_random_even(g3, b3, 11, 2.5), ConvexityFailure);
}

TEST_CASE("rounded_lq builds strictly convex bodies") {
    auto [g3, b3] = ctx3();
    Body K = make_rounded_lq(g3, b3, 6.0, 0.15);
    CHECK(K.min_eig.minCoeff() > 0.0);
    CHECK(geometric_distance(K) > 1.05); // genuinely non-ellipsoidal
    auto [g2, b2] = ctx2();
    Body K2 = make_rounded_lq(g2, b2, 6.0, 0.15);
    CHECK(K2.min_eig.minCoeff() > 0.0);
}

TEST_CASE("constructor rejects odd coefficients and non-convex data") {
    auto [g3, b3] = ctx3();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(b3->count);
    c[0] = std::sqrt(4 * pi); // h = 1
    c[1] = 0.2;               // a degree-1 (odd) term
    CHECK_THROWS_AS(body_from_coeffs(g3, b3, c), Error);

    c[1] = 0.0;
    c[4] = 3.0; // violent degree-2 bump: h still positive but D^2 h loses
                // positivity
    CHECK_THROWS_AS(body_from_coeffs(g3, b3, c), ConvexityFailure);
}

TEST_CASE("shifted support body: values, inradius guard, weak convexity") {
    auto [g3, b3] = ctx3();
    Body K = make_ball(g3, b3, 1.2);
    Eigen::Vector3d xi(0, 0, 1);
    double R = 1.0;
    int p = 4;
    Body S = shifted_support(K, R, p, xi);
    // direct formula h ((p-1)R^p + (<u,xi>/h)^p) at a node
    int k = 500;
    Eigen::Vector3d u = g3->nodes.row(k);
    double h = K.h()[k];
    double expect = h * ((p - 1) * std::pow(R, p) + std::pow(u.dot(xi) / h, p));
    CHECK(S.h()[k] == doctest::Approx(expect).epsilon(1e-10));
    CHECK(S.min_eig.minCoeff() > -1e-9 * trace_comp(S.D2).mean());

    Body small = make_ball(g3, b3, 0.8);
    CHECK_THROWS_AS(shifted_support(small, R, p, xi), InradiusViolation);
    CHECK_THROWS_AS(shifted_support(K, R, 3, xi), Error);
}

TEST_CASE("shifted support stays convex for a non-round base body") {
    auto [g2, b2] = ctx2();
    Body K0 = make_random_even(g2, b2, 5, 0.25);
    // scale so that min h = 1/R comfortably holds with R = 2
    double scale = 0.55 / K0.h().minCoeff();
    Body K = body_from_coeffs(g2, b2, scale * K0.coeffs);
    Body S = shifted_support(K, 2.0, 6, Eigen::Vector2d(1, 1));
    CHECK(S.min_eig.minCoeff() > -1e-9 * trace_comp(S.D2).mean());
}

TEST_CASE("JSON round trip is bit exact") {
    auto [g3, b3] = ctx3();
    Body K = make_random_even(g3, b3, 11, 0.15);
    nlohmann::json j = to_json(K);
    std::string text = j.dump();
    Body K2 = body_from_json(nlohmann::json::parse(text), g3, b3);
    CHECK(K2.coeffs == K.coeffs);
    CHECK(K2.dim == K.dim);

    Body K3 = body_from_json(nlohmann::json::parse(text)); // rebuilds grid
    CHECK(K3.coeffs == K.coeffs);
    CHECK(volume(K3) == volume(K));
}

TEST_CASE("curvature floor scales with the body") {
    auto [g3, b3] = ctx3();
    Body B = make_ball(g3, b3, 1.0);
    CHECK(curvature_floor(B) == doctest::Approx(1e-8).epsilon(1e-10));
    Body B3 = make_ball(g3, b3, 3.0);
    CHECK(curvature_floor(B3) == doctest::Approx(3e-8).epsilon(1e-10));
}
