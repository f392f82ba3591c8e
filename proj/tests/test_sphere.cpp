#include <doctest.h>

#include <numbers>

#include <hbm/basis.hpp>
#include <hbm/field.hpp>
#include <hbm/grid.hpp>

using namespace hbm;
const double pi = std::numbers::pi;

TEST_CASE("grid weights sum to sphere area") {
    auto g2 = build_grid(2, 256);
    CHECK(g2->node_count() == 256);
    CHECK(g2->weights.sum() == doctest::Approx(2 * pi).epsilon(1e-12));

    auto g3 = build_grid(3, 64);
    CHECK(g3->node_count() == 64 * 128);
    CHECK(g3->weights.sum() == doctest::Approx(4 * pi).epsilon(1e-12));
}

TEST_CASE("grid rejects bad arguments") {
    CHECK_THROWS_AS(build_grid(4, 64), DimensionMismatch);
    CHECK_THROWS_AS(build_grid(3, 3), Error);
}

TEST_CASE("antipodal symmetry of nodes and weights") {
    for (int dim : {2, 3}) {
        auto g = build_grid(dim, dim == 2 ? 64 : 16);
        for (int k = 0; k < g->node_count(); ++k) {
            int a = g->antipode[k];
            CHECK((g->nodes.row(k) + g->nodes.row(a)).norm() < 1e-13);
            CHECK(g->weights[k] == g->weights[a]);
        }
    }
}

TEST_CASE("integrate polynomial moments on S^2") {
    auto g = build_grid(3, 16);
    Eigen::VectorXd one = Eigen::VectorXd::Ones(g->node_count());
    CHECK(integrate(one, *g) == doctest::Approx(4 * pi).epsilon(1e-13));

    Eigen::VectorXd x2 = g->nodes.col(0).cwiseAbs2();
    CHECK(integrate(x2, *g) == doctest::Approx(4 * pi / 3).epsilon(1e-13));

    Eigen::VectorXd xy = g->nodes.col(0).cwiseProduct(g->nodes.col(1));
    CHECK(integrate(xy, *g) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("frames are orthonormal and tangent") {
    auto g = build_grid(3, 12);
    for (int k = 0; k < g->node_count(); k += 7) {
        Eigen::Vector3d n = g->nodes.row(k), e1 = g->frame1.row(k),
                        e2 = g->frame2.row(k);
        CHECK(std::abs(e1.norm() - 1) < 1e-14);
        CHECK(std::abs(e2.norm() - 1) < 1e-14);
        CHECK(std::abs(n.dot(e1)) < 1e-14);
        CHECK(std::abs(n.dot(e2)) < 1e-14);
        CHECK(std::abs(e1.dot(e2)) < 1e-14);
    }
}

TEST_CASE("basis is orthonormal") {
    for (int dim : {2, 3}) {
        auto g = build_grid(dim, dim == 2 ? 128 : 24);
        auto b = build_basis(g, dim == 2 ? 32 : 10);
        Eigen::MatrixXd G =
            b->val.transpose() * g->weights.asDiagonal() * b->val;
        double err = (G - Eigen::MatrixXd::Identity(b->count, b->count))
                         .cwiseAbs()
                         .maxCoeff();
        CHECK(err < 1e-10);
    }
}

TEST_CASE("basis dimension counts") {
    auto g2 = build_grid(2, 128);
    CHECK(build_basis(g2, 2)->count == 5);
    auto g3 = build_grid(3, 16);
    CHECK(build_basis(g3, 8)->count == 81);
    CHECK_THROWS_AS(build_basis(g3, 40), Error);
}

TEST_CASE("round Laplacian eigenvalue from Hessian trace") {
    for (int dim : {2, 3}) {
        auto g = build_grid(dim, dim == 2 ? 128 : 24);
        auto b = build_basis(g, 10);
        for (int a = 0; a < b->count; ++a) {
            int l = b->degree[a];
            double lam = double(l) * (l + dim - 2);
            Eigen::VectorXd lap = b->h11.col(a);
            if (dim == 3) lap += b->h22.col(a);
            double err = (lap + lam * b->val.col(a)).cwiseAbs().maxCoeff();
            CHECK(err < 1e-8);
        }
    }
}

TEST_CASE("parity flags match function values at antipodes") {
    for (int dim : {2, 3}) {
        auto g = build_grid(dim, dim == 2 ? 64 : 12);
        auto b = build_basis(g, 6);
        for (int a = 0; a < b->count; ++a) {
            double sgn = b->even[a] ? 1.0 : -1.0;
            double worst = 0;
            for (int k = 0; k < g->node_count(); ++k)
                worst = std::max(worst, std::abs(b->val(k, a) -
                                                 sgn * b->val(g->antipode[k], a)));
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("gradient integration by parts on the round sphere") {
    for (int dim : {2, 3}) {
        auto g = build_grid(dim, dim == 2 ? 128 : 24);
        auto b = build_basis(g, 8);
        Eigen::MatrixXd S = b->g1.transpose() * g->weights.asDiagonal() * b->g1;
        if (dim == 3)
            S += b->g2.transpose() * g->weights.asDiagonal() * b->g2;
        for (int a = 0; a < b->count; ++a)
            for (int c = 0; c < b->count; ++c) {
                int l = b->degree[a];
                double expect = (a == c) ? double(l) * (l + dim - 2) : 0.0;
                CHECK(std::abs(S(a, c) - expect) < 1e-8);
            }
    }
}

TEST_CASE("antipodal map commutes with quadrature") {
    auto g = build_grid(3, 12);
    Eigen::VectorXd f(g->node_count());
    for (int k = 0; k < g->node_count(); ++k)
        f[k] = std::exp(g->nodes(k, 0)) + 0.3 * g->nodes(k, 2);
    Eigen::VectorXd fa(g->node_count());
    for (int k = 0; k < g->node_count(); ++k) fa[k] = f[g->antipode[k]];
    CHECK(integrate(f, *g) == doctest::Approx(integrate(fa, *g)).epsilon(1e-15));
}

TEST_CASE("jet algebra: product and chain rules against basis expansion") {
    auto g = build_grid(3, 24);
    auto b = build_basis(g, 8);
    // lin field from the exact construction vs. projected degree-1 expansion
    Eigen::Vector3d xi(0.3, -1.1, 0.7);
    FieldJet lin = linear_field(*g, xi);
    Eigen::VectorXd c = b->project(lin.v);
    FieldJet lin2 = field_from_coeffs(*b, c);
    CHECK((lin.v - lin2.v).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((lin.g - lin2.g).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((lin.H - lin2.H).cwiseAbs().maxCoeff() < 1e-9);

    // multiply vs ipow
    FieldJet sq = multiply(lin, lin);
    FieldJet sq2 = ipow(lin, 2);
    CHECK((sq.v - sq2.v).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((sq.H - sq2.H).cwiseAbs().maxCoeff() < 1e-12);

    // exp/log round trip
    FieldJet e = exp_field(sq);
    FieldJet le = log_field(e);
    CHECK((le.v - sq.v).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((le.H - sq.H).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("D^2 of a linear functional vanishes") {
    auto g = build_grid(3, 12);
    FieldJet lin = linear_field(*g, Eigen::Vector3d(1, 2, 3));
    CHECK(d2_of(lin).cwiseAbs().maxCoeff() < 1e-14);
}
