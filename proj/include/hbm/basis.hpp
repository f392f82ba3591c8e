#ifndef HBM_BASIS_HPP
#define HBM_BASIS_HPP

// Real harmonic basis on S^1 / S^2 with analytic first and second covariant
// derivatives.  Associated Legendre values and their theta-derivatives are
// obtained by differentiating the standard normalized recurrences, so no
// finite differences enter anywhere.

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "hbm/errors.hpp"
#include "hbm/grid.hpp"

namespace hbm {

struct HarmonicBasis {
    int dim = 0;
    int max_degree = 0;
    int count = 0;

    std::shared_ptr<const SphereGrid> grid;

    std::vector<int> degree; // ell (frequency m on S^1)
    std::vector<int> order;  // m (0 on S^1 except sign convention below)
    std::vector<bool> even;  // parity under antipodal map

    // Per-node tables, N x count (column = basis function).
    Eigen::MatrixXd val;
    Eigen::MatrixXd g1, g2;        // covariant gradient in the node frame
    Eigen::MatrixXd h11, h12, h22; // covariant Hessian in the node frame

    std::vector<int> even_indices() const {
        std::vector<int> idx;
        for (int a = 0; a < count; ++a)
            if (even[a]) idx.push_back(a);
        return idx;
    }

    // L^2(m) projection of node values onto the basis.
    Eigen::VectorXd project(const Eigen::VectorXd& values) const {
        return val.transpose() * grid->weights.cwiseProduct(values);
    }
};

namespace detail {

// Jets (value, d/dtheta, d^2/dtheta^2) of the orthonormalized associated
// Legendre functions Pbar_{l}^{m}(cos theta) for all 0 <= m <= l <= L,
// normalized so that int_0^pi Pbar^2 sin theta dtheta = 1/(2 pi).
// Layout: index(l,m) = l*(l+1)/2 + m.
struct LegendreJets {
    std::vector<double> p, dp, ddp;
};

inline int plm_index(int l, int m) { return l * (l + 1) / 2 + m; }

inline void legendre_jets(int L, double theta, LegendreJets& out) {
    const int n = (L + 1) * (L + 2) / 2;
    out.p.assign(n, 0.0);
    out.dp.assign(n, 0.0);
    out.ddp.assign(n, 0.0);
    const double s = std::sin(theta), c = std::cos(theta);
    const double pi = std::numbers::pi;

    // Diagonal Pbar_mm = sqrt((2m+1)/(2m)) sin(theta) Pbar_{m-1,m-1}.
    {
        int i0 = plm_index(0, 0);
        out.p[i0] = std::sqrt(1.0 / (4.0 * pi));
    }
    for (int m = 1; m <= L; ++m) {
        const double k = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
        const int i = plm_index(m, m), j = plm_index(m - 1, m - 1);
        out.p[i] = k * s * out.p[j];
        out.dp[i] = k * (c * out.p[j] + s * out.dp[j]);
        out.ddp[i] = k * (-s * out.p[j] + 2.0 * c * out.dp[j] + s * out.ddp[j]);
    }
    // First off-diagonal Pbar_{m+1,m} = sqrt(2m+3) cos(theta) Pbar_mm.
    for (int m = 0; m < L; ++m) {
        const double k = std::sqrt(2.0 * m + 3.0);
        const int i = plm_index(m + 1, m), j = plm_index(m, m);
        out.p[i] = k * c * out.p[j];
        out.dp[i] = k * (-s * out.p[j] + c * out.dp[j]);
        out.ddp[i] = k * (-c * out.p[j] - 2.0 * s * out.dp[j] + c * out.ddp[j]);
    }
    // Three-term recurrence in l.
    for (int m = 0; m <= L; ++m) {
        for (int l = m + 2; l <= L; ++l) {
            const double a =
                std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            const double b = std::sqrt(
                ((double(l - 1) * (l - 1) - double(m) * m)) /
                (4.0 * double(l - 1) * (l - 1) - 1.0));
            const int i = plm_index(l, m), j1 = plm_index(l - 1, m),
                      j2 = plm_index(l - 2, m);
            out.p[i] = a * (c * out.p[j1] - b * out.p[j2]);
            out.dp[i] = a * (-s * out.p[j1] + c * out.dp[j1] - b * out.dp[j2]);
            out.ddp[i] = a * (-c * out.p[j1] - 2.0 * s * out.dp[j1] +
                              c * out.ddp[j1] - b * out.ddp[j2]);
        }
    }
}

} // namespace detail

inline std::shared_ptr<HarmonicBasis>
build_basis(std::shared_ptr<const SphereGrid> grid, int max_degree) {
    const int L = max_degree;
    if (L < 2) throw Error("build_basis: max_degree must be >= 2");
    const int N = grid->node_count();
    const double pi = std::numbers::pi;

    auto basis = std::make_shared<HarmonicBasis>();
    basis->dim = grid->dim;
    basis->max_degree = L;
    basis->grid = grid;

    if (grid->dim == 2) {
        if (2 * L >= grid->resolution)
            throw Error("build_basis: quadrature exactness requires 2L < resolution");
        const int count = 2 * L + 1;
        basis->count = count;
        basis->degree.resize(count);
        basis->order.resize(count);
        basis->even.resize(count);
        basis->val.resize(N, count);
        basis->g1.resize(N, count);
        basis->g2.resize(N, 0);
        basis->h11.resize(N, count);
        basis->h12.resize(N, 0);
        basis->h22.resize(N, 0);

        const double c0 = 1.0 / std::sqrt(2.0 * pi);
        const double c1 = 1.0 / std::sqrt(pi);
        int a = 0;
        // l = 0
        basis->degree[a] = 0;
        basis->order[a] = 0;
        basis->even[a] = true;
        basis->val.col(a).setConstant(c0);
        basis->g1.col(a).setZero();
        basis->h11.col(a).setZero();
        ++a;
        for (int m = 1; m <= L; ++m) {
            // sin(m t) then cos(m t), both normalized by 1/sqrt(pi)
            for (int kind = 0; kind < 2; ++kind, ++a) {
                basis->degree[a] = m;
                basis->order[a] = kind == 0 ? -m : m;
                basis->even[a] = (m % 2 == 0);
                for (int k = 0; k < N; ++k) {
                    double t = grid->theta[k];
                    double f = kind == 0 ? std::sin(m * t) : std::cos(m * t);
                    double df =
                        kind == 0 ? m * std::cos(m * t) : -m * std::sin(m * t);
                    basis->val(k, a) = c1 * f;
                    basis->g1(k, a) = c1 * df;
                    basis->h11(k, a) = -c1 * double(m) * m * f;
                }
            }
        }
        return basis;
    }

    // S^2
    const int Nt = grid->resolution, Np = 2 * grid->resolution;
    if (L + 1 > Nt || 2 * L + 1 > Np)
        throw Error("build_basis: quadrature exactness insufficient for max_degree");

    const int count = (L + 1) * (L + 1);
    basis->count = count;
    basis->degree.resize(count);
    basis->order.resize(count);
    basis->even.resize(count);
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) {
            int a = l * l + (m + l);
            basis->degree[a] = l;
            basis->order[a] = m;
            basis->even[a] = (l % 2 == 0);
        }
    basis->val.resize(N, count);
    basis->g1.resize(N, count);
    basis->g2.resize(N, count);
    basis->h11.resize(N, count);
    basis->h12.resize(N, count);
    basis->h22.resize(N, count);

    const double sq2 = std::numbers::sqrt2;
    detail::LegendreJets lj;
    for (int k = 0; k < N; ++k) {
        const double th = grid->theta[k], ph = grid->phi[k];
        const double st = std::sin(th), ct = std::cos(th);
        const double ist = 1.0 / st, cot = ct / st;
        detail::legendre_jets(L, th, lj);
        for (int l = 0; l <= L; ++l) {
            for (int m = -l; m <= l; ++m) {
                const int a = l * l + (m + l);
                const int am = std::abs(m);
                const int i = detail::plm_index(l, am);
                const double P = lj.p[i], dP = lj.dp[i], ddP = lj.ddp[i];
                double F, dF, ddF; // phi factor and derivatives
                if (m == 0) {
                    F = 1.0;
                    dF = 0.0;
                    ddF = 0.0;
                } else if (m > 0) {
                    F = sq2 * std::cos(m * ph);
                    dF = -sq2 * m * std::sin(m * ph);
                    ddF = -double(m) * m * F;
                } else {
                    F = sq2 * std::sin(am * ph);
                    dF = sq2 * am * std::cos(am * ph);
                    ddF = -double(am) * am * F;
                }
                const double f = P * F;
                const double ft = dP * F, fp = P * dF;
                const double ftt = ddP * F, ftp = dP * dF, fpp = P * ddF;
                basis->val(k, a) = f;
                basis->g1(k, a) = ft;
                basis->g2(k, a) = fp * ist;
                basis->h11(k, a) = ftt;
                basis->h12(k, a) = (ftp - cot * fp) * ist;
                basis->h22(k, a) = fpp * ist * ist + cot * ft;
            }
        }
    }
    return basis;
}

// Value of the basis expansion at an arbitrary unit direction.
inline double evaluate_expansion(const HarmonicBasis& basis,
                                 const Eigen::VectorXd& coeffs,
                                 const Eigen::VectorXd& u) {
    const double pi = std::numbers::pi;
    if (basis.dim == 2) {
        double t = std::atan2(u[1], u[0]);
        double r = coeffs[0] / std::sqrt(2.0 * pi);
        const double c1 = 1.0 / std::sqrt(pi);
        for (int m = 1; m <= basis.max_degree; ++m) {
            r += coeffs[2 * m - 1] * c1 * std::sin(m * t);
            r += coeffs[2 * m] * c1 * std::cos(m * t);
        }
        return r;
    }
    const int L = basis.max_degree;
    double th = std::acos(std::clamp(u[2], -1.0, 1.0));
    double ph = std::atan2(u[1], u[0]);
    detail::LegendreJets lj;
    detail::legendre_jets(L, th, lj);
    const double sq2 = std::numbers::sqrt2;
    double r = 0.0;
    for (int l = 0; l <= L; ++l) {
        for (int m = -l; m <= l; ++m) {
            const int a = l * l + (m + l);
            if (coeffs[a] == 0.0) continue;
            const double P = lj.p[detail::plm_index(l, std::abs(m))];
            double F = m == 0 ? 1.0
                     : m > 0  ? sq2 * std::cos(m * ph)
                              : sq2 * std::sin(-m * ph);
            r += coeffs[a] * P * F;
        }
    }
    return r;
}

} // namespace hbm

#endif
