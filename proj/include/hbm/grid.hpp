#ifndef HBM_GRID_HPP
#define HBM_GRID_HPP

// Quadrature grids on S^1 and S^2 with per-node orthonormal tangent frames.
// S^1 uses equispaced angles, S^2 a Gauss-Legendre colatitude x uniform
// longitude product grid.  Node sets are antipodally symmetric.

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "hbm/errors.hpp"

namespace hbm {

struct SphereGrid {
    int dim = 0;        // ambient dimension n (2 or 3)
    int resolution = 0; // node count on S^1, colatitude count on S^2

    Eigen::MatrixXd nodes;   // N x n unit vectors
    Eigen::VectorXd weights; // N quadrature weights, sum = |S^{n-1}|
    Eigen::MatrixXd frame1;  // N x n first tangent frame vector
    Eigen::MatrixXd frame2;  // N x n second tangent vector (S^2 only)

    // Spherical coordinates of each node (theta == polar angle on S^1).
    Eigen::VectorXd theta;
    Eigen::VectorXd phi; // S^2 only

    std::vector<int> antipode; // index of -node

    int node_count() const { return static_cast<int>(weights.size()); }
    int tangent_dim() const { return dim - 1; }
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
    x.resize(n);
    w.resize(n);
    const double pi = std::numbers::pi;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        double wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
}

} // namespace detail

inline std::shared_ptr<SphereGrid> build_grid(int dim, int resolution) {
    if (dim != 2 && dim != 3)
        throw DimensionMismatch("build_grid: dim must be 2 or 3");
    if (resolution < 4)
        throw Error("build_grid: resolution must be >= 4");

    auto grid = std::make_shared<SphereGrid>();
    grid->dim = dim;
    grid->resolution = resolution;
    const double pi = std::numbers::pi;

    if (dim == 2) {
        if (resolution % 2 != 0)
            throw Error("build_grid: resolution must be even on S^1");
        const int N = resolution;
        grid->nodes.resize(N, 2);
        grid->weights.resize(N);
        grid->frame1.resize(N, 2);
        grid->theta.resize(N);
        grid->antipode.resize(N);
        for (int k = 0; k < N; ++k) {
            double t = 2.0 * pi * k / N;
            grid->theta[k] = t;
            grid->nodes(k, 0) = std::cos(t);
            grid->nodes(k, 1) = std::sin(t);
            grid->weights[k] = 2.0 * pi / N;
            grid->frame1(k, 0) = -std::sin(t);
            grid->frame1(k, 1) = std::cos(t);
            grid->antipode[k] = (k + N / 2) % N;
        }
        return grid;
    }

    // S^2: Gauss-Legendre in cos(theta), uniform phi, Nphi = 2*Ntheta.
    const int Nt = resolution;
    const int Np = 2 * resolution;
    Eigen::VectorXd xg, wg;
    detail::gauss_legendre(Nt, xg, wg);

    const int N = Nt * Np;
    grid->nodes.resize(N, 3);
    grid->weights.resize(N);
    grid->frame1.resize(N, 3);
    grid->frame2.resize(N, 3);
    grid->theta.resize(N);
    grid->phi.resize(N);
    grid->antipode.resize(N);

    for (int i = 0; i < Nt; ++i) {
        double ct = xg[i];
        double st = std::sqrt(1.0 - ct * ct);
        double th = std::acos(ct);
        for (int j = 0; j < Np; ++j) {
            double ph = 2.0 * pi * j / Np;
            int k = i * Np + j;
            double cp = std::cos(ph), sp = std::sin(ph);
            grid->theta[k] = th;
            grid->phi[k] = ph;
            grid->nodes(k, 0) = st * cp;
            grid->nodes(k, 1) = st * sp;
            grid->nodes(k, 2) = ct;
            grid->weights[k] = wg[i] * (2.0 * pi / Np);
            // e1 = theta-hat, e2 = phi-hat
            grid->frame1(k, 0) = ct * cp;
            grid->frame1(k, 1) = ct * sp;
            grid->frame1(k, 2) = -st;
            grid->frame2(k, 0) = -sp;
            grid->frame2(k, 1) = cp;
            grid->frame2(k, 2) = 0.0;
            // antipode: theta -> pi - theta (mirror GL node), phi -> phi + pi
            grid->antipode[k] = (Nt - 1 - i) * Np + (j + Np / 2) % Np;
        }
    }
    return grid;
}

inline double integrate(const Eigen::VectorXd& values, const SphereGrid& grid) {
    if (values.size() != grid.weights.size())
        throw DimensionMismatch("integrate: value count does not match grid");
    return grid.weights.dot(values);
}

inline double sphere_area(int dim) {
    const double pi = std::numbers::pi;
    return dim == 2 ? 2.0 * pi : 4.0 * pi;
}

} // namespace hbm

#endif
