#include <doctest.h>

#include <numbers>
#include <random>
#include <sstream>

#include <hbm/directions.hpp>

using namespace hbm;
const double pi = std::numbers::pi;

namespace {
struct Ctx {
    std::shared_ptr<const SphereGrid> grid;
    std::shared_ptr<const HarmonicBasis> basis;
};
Ctx ctx(int dim) {
    static Ctx c2 = [] {
        Ctx c;
        c.grid = build_grid(2, 256);
        c.basis = build_basis(c.grid, 64);
        return c;
    }();
    static Ctx c3 = [] {
        Ctx c;
        c.grid = build_grid(3, 64);
        c.basis = build_basis(c.grid, 16);
        return c;
    }();
    return dim == 2 ? c2 : c3;
}
} // namespace

TEST_CASE("lin moments of the ball match closed forms") {
    {
        auto c = ctx(3);
        Body B = make_ball(c.grid, c.basis);
        Eigen::Vector3d xi(0.48, -0.6, 0.64); // unit
        auto [m2, m4] = lin_moments(B, xi);
        CHECK(m2 == doctest::Approx(4 * pi / 9).epsilon(1e-12));
        CHECK(m4 == doctest::Approx(4 * pi / 15).epsilon(1e-12));
        CHECK(std::abs(direction_gap(B, xi)) < 1e-10);
        CHECK_THROWS_AS(lin_moments(B, Eigen::Vector2d(1, 0)),
                        DimensionMismatch);
    }
    {
        auto c = ctx(2);
        Body B = make_ball(c.grid, c.basis);
        Eigen::Vector2d xi(0.6, 0.8);
        auto [m2, m4] = lin_moments(B, xi);
        CHECK(m2 == doctest::Approx(pi / 2).epsilon(1e-12));
        CHECK(m4 == doctest::Approx(3 * pi / 8).epsilon(1e-12));
        CHECK(std::abs(direction_gap(B, xi)) < 1e-10);
    }
}

TEST_CASE("moment forms reproduce direct quadrature") {
    for (int dim : {2, 3}) {
        auto c = ctx(dim);
        Body K = make_random_even(c.grid, c.basis, 4, 0.2);
        MomentForms f = lin_moment_forms(K);
        CHECK(f.V == doctest::Approx(volume(K)).epsilon(1e-13));
        std::mt19937 rng(7);
        std::normal_distribution<double> gauss;
        for (int t = 0; t < 10; ++t) {
            Eigen::VectorXd xi(dim);
            for (int i = 0; i < dim; ++i) xi[i] = gauss(rng);
            auto [m2, m4] = lin_moments(K, xi);
            CHECK(f.m2(xi) == doctest::Approx(m2).epsilon(1e-10));
            CHECK(f.m4(xi) == doctest::Approx(m4).epsilon(1e-10));
        }
    }
}

TEST_CASE("moments transform equivariantly under linear maps") {
    // m_p(T K, xi) = |det T| m_p(K, T^-1 xi); the gap inherits the same
    // factor, so its sign is a linear invariant.
    for (int dim : {2, 3}) {
        auto c = ctx(dim);
        Body K = make_random_even(c.grid, c.basis, 16, 0.2);
        Eigen::MatrixXd T = Eigen::MatrixXd::Identity(dim, dim);
        T(0, 0) = 1.25;
        T(0, 1) = 0.2;
        T(1, 1) = 0.85;
        Body TK = apply_linear(K, T);
        double det = std::abs(T.determinant());
        std::mt19937 rng(3);
        std::normal_distribution<double> gauss;
        double tol = dim == 2 ? 1e-10 : 1e-5;
        for (int t = 0; t < 6; ++t) {
            Eigen::VectorXd xi(dim);
            for (int i = 0; i < dim; ++i) xi[i] = gauss(rng);
            auto [a2, a4] = lin_moments(TK, xi);
            auto [b2, b4] = lin_moments(K, Eigen::VectorXd(T.inverse() * xi));
            CHECK(a2 == doctest::Approx(det * b2).epsilon(tol));
            CHECK(a4 == doctest::Approx(det * b4).epsilon(tol));
            CHECK(direction_gap(TK, xi) ==
                  doctest::Approx(det *
                                  direction_gap(
                                      K, Eigen::VectorXd(T.inverse() * xi)))
                      .epsilon(tol)
                      .scale(volume(K)));
        }
    }
}

TEST_CASE("ellipsoids have zero gap in every direction") {
    // T(ball) has gap |det T| * gap_ball = 0 identically.
    auto c = ctx(2);
    Eigen::Matrix2d A;
    A << 1.6, 0.3, 0.0, 0.7;
    Body E = make_ellipsoid(c.grid, c.basis, A);
    DirectionScan s = scan_directions(E, 64);
    double scale = s.m4.maxCoeff();
    for (int k = 0; k < 64; ++k) CHECK(std::abs(s.gap[k]) < 1e-9 * scale);
}

TEST_CASE("scan on a skewed body: negative directions exist, best is positive") {
    auto c = ctx(2);
    Body K = make_random_even(c.grid, c.basis, 14, 0.2);
    Eigen::Matrix2d T;
    T << 1.5, 0.2, 0.0, 1.0 / 1.5;
    Body S = apply_linear(K, T);
    DirectionScan scan = scan_directions(S, 256);
    CHECK(scan.gap.minCoeff() < 0.0);
    CHECK(scan.best_gap > 0.0);
    CHECK(scan.best_gap == scan.gap.maxCoeff());
    CHECK(std::abs(scan.best_xi.norm() - 1.0) < 1e-12);

    // sample grids are unit half-sphere points
    Eigen::MatrixXd xs = direction_sample(3, 128);
    for (int k = 0; k < 128; ++k) {
        CHECK(std::abs(xs.row(k).norm() - 1.0) < 1e-12);
        CHECK(xs(k, 2) > 0.0);
    }
}

TEST_CASE("find_good_direction certifies a nonnegative gap") {
    {
        auto c = ctx(3);
        Body B = make_ball(c.grid, c.basis);
        auto g = find_good_direction(B, 64);
        CHECK(std::abs(g.gap) < 1e-10);
        Body Q = make_rounded_lq(c.grid, c.basis, 6.0, 0.15);
        auto gq = find_good_direction(Q, 256);
        CHECK(gq.gap >= -1e-12);
        CHECK(gq.gap == doctest::Approx(gq.scan.best_gap).epsilon(1e-6));
    }
    {
        // skewed copy: generic directions can be negative, the pulled-back
        // one may not (sign is invariant under the pullback)
        auto c = ctx(2);
        Body K = make_random_even(c.grid, c.basis, 16, 0.2);
        Eigen::Matrix2d T;
        T << 1.5, 0.2, 0.0, 1.0 / 1.5;
        Body S = apply_linear(K, T);
        auto g = find_good_direction(S, 256);
        CHECK(g.gap > 0.0);
        CHECK(scan_directions(S, 256).gap.minCoeff() < 0.0);
    }
}

TEST_CASE("sphere average of the gap equals 3 Var / (n (n+2))") {
    // Exact for n = 2: the scan nodes are uniform angles and the gap is a
    // degree-4 trigonometric polynomial, so the average is a closed quadrature.
    auto c = ctx(2);
    Body Q = make_rounded_lq(c.grid, c.basis, 6.0, 0.15);
    const int n = 2, m = 128;
    DirectionScan s = scan_directions(Q, m);
    double avg = s.gap.sum() / m;
    Eigen::VectorXd wv = Q.grid->weights.cwiseProduct(Q.vk_density());
    Eigen::ArrayXd inv2 = Q.hj.v.array().square().inverse();
    double V = wv.sum();
    double B = wv.dot(inv2.matrix());
    double var = wv.dot((inv2 - B / V).square().matrix());
    CHECK(avg == doctest::Approx(3.0 * var / (n * (n + 2))).epsilon(1e-10));
    CHECK(avg > 0.0);
}

TEST_CASE("expectation identity: equality cases and residuals") {
    {
        auto c = ctx(3);
        Body B = make_ball(c.grid, c.basis);
        CHECK(expectation_identity(B) < 1e-10);
        Body Q = make_rounded_lq(c.grid, c.basis, 6.0, 0.15);
        auto iso = isotropize(Q);
        // non-ball: variance is strictly positive, identity still closes
        Eigen::VectorXd wv =
            iso.body.grid->weights.cwiseProduct(iso.body.vk_density());
        Eigen::ArrayXd inv2 = iso.body.hj.v.array().square().inverse();
        double V = wv.sum();
        double B2 = wv.dot(inv2.matrix());
        double var = wv.dot((inv2 - B2 / V).square().matrix());
        CHECK(var > 1e-6);
        CHECK(expectation_identity(iso.body) < 1e-7);
    }
    {
        auto c = ctx(2);
        Eigen::Matrix2d A = Eigen::Vector2d(2.0, 0.5).asDiagonal();
        Body E = make_ellipsoid(c.grid, c.basis, A);
        CHECK_THROWS_AS(expectation_identity(E), NotIsotropic);
    }
}

TEST_CASE("Frobenius form of the double integral") {
    // A = ||X2||_F^2 must equal the double quadrature of <theta,theta'>^2
    // against h^-2 dV x h^-2 dV.
    auto c = ctx(2);
    Body K = make_random_even(c.grid, c.basis, 14, 0.2);
    MomentForms f = lin_moment_forms(K);
    Eigen::VectorXd wv = K.grid->weights.cwiseProduct(K.vk_density());
    Eigen::VectorXd w2 = (wv.array() / K.hj.v.array().square()).matrix();
    const int N = K.node_count();
    double direct = 0.0;
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
            double d = K.grid->nodes.row(k).dot(K.grid->nodes.row(l));
            direct += w2[k] * w2[l] * d * d;
        }
    CHECK(f.X2.squaredNorm() == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("Gaussian moment constants (Monte Carlo)") {
    // E<g,u>^4 = 3|u|^4 and E<g,u>^2<g,v>^2 = 2<u,v>^2 + |u|^2|v|^2 for a
    // standard Gaussian g; projecting to the sphere gives the 3/(n(n+2))
    // constant used by the gap.
    std::mt19937 rng(2024);
    std::normal_distribution<double> gauss;
    Eigen::Vector3d u(0.3, -1.1, 0.7), v(0.9, 0.4, -0.2);
    const int M = 1000000;
    double s4 = 0, s22 = 0, sph4 = 0;
    for (int t = 0; t < M; ++t) {
        Eigen::Vector3d g(gauss(rng), gauss(rng), gauss(rng));
        double a = g.dot(u), b = g.dot(v);
        s4 += a * a * a * a;
        s22 += a * a * b * b;
        double c = g.normalized().dot(u.normalized());
        sph4 += c * c * c * c;
    }
    double q4 = 3 * std::pow(u.squaredNorm(), 2);
    double q22 = 2 * std::pow(u.dot(v), 2) + u.squaredNorm() * v.squaredNorm();
    CHECK(s4 / M == doctest::Approx(q4).epsilon(0.01));
    CHECK(s22 / M == doctest::Approx(q22).epsilon(0.01));
    CHECK(sph4 / M == doctest::Approx(3.0 / 15.0).epsilon(0.01)); // 3/(n(n+2))
}

TEST_CASE("direction scan CSV export") {
    auto c = ctx(2);
    Body Q = make_rounded_lq(c.grid, c.basis, 6.0, 0.15);
    DirectionScan s = scan_directions(Q, 16);
    std::ostringstream os;
    write_csv(s, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "xi0,xi1,m2,m4,gap");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 16);
}
