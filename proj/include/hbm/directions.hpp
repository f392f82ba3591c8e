#ifndef HBM_DIRECTIONS_HPP
#define HBM_DIRECTIONS_HPP

// K-adapted linear functionals lin_{K,xi} = <.,xi>/h_K, their V_K-moments,
// the good-direction inequality, and the isotropic-position expectation
// identity with its equality-case diagnostic.

#include <array>
#include <numbers>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "hbm/affine.hpp"
#include "hbm/body.hpp"

namespace hbm {

// m2(xi) is a quadratic and m4(xi) a homogeneous quartic form; both are
// assembled once by quadrature so per-xi evaluation is O(n^4) scalar work.
struct MomentForms {
    int dim = 0;
    Eigen::MatrixXd X2;      // int theta theta^T h^-2 dV
    std::vector<double> T4;  // int theta^{x4} h^-4 dV, flattened n^4
    double V = 0.0;

    double m2(const Eigen::VectorXd& xi) const {
        return xi.dot(X2 * xi);
    }
    double m4(const Eigen::VectorXd& xi) const {
        const int n = dim;
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        s += T4[((i * n + j) * n + k) * n + l] * xi[i] *
                             xi[j] * xi[k] * xi[l];
        return s;
    }
};

inline MomentForms lin_moment_forms(const Body& K) {
    MomentForms f;
    const int n = K.dim;
    f.dim = n;
    Eigen::VectorXd wv = K.grid->weights.cwiseProduct(K.vk_density());
    f.V = wv.sum();
    Eigen::ArrayXd h2 = K.hj.v.array().square();
    Eigen::VectorXd w2 = (wv.array() / h2).matrix();
    Eigen::VectorXd w4 = (wv.array() / h2.square()).matrix();
    f.X2 = K.grid->nodes.transpose() * w2.asDiagonal() * K.grid->nodes;
    f.T4.assign(n * n * n * n, 0.0);
    for (int k = 0; k < K.node_count(); ++k) {
        Eigen::VectorXd t = K.grid->nodes.row(k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        f.T4[((i * n + j) * n + a) * n + b] +=
                            w4[k] * t[i] * t[j] * t[a] * t[b];
    }
    return f;
}

inline std::pair<double, double> lin_moments(const Body& K,
                                             const Eigen::VectorXd& xi) {
    if (xi.size() != K.dim) throw DimensionMismatch("lin_moments");
    Eigen::VectorXd wv = K.grid->weights.cwiseProduct(K.vk_density());
    Eigen::ArrayXd lin = (K.grid->nodes * xi).array() / K.hj.v.array();
    return {wv.dot(lin.square().matrix()), wv.dot(lin.pow(4).matrix())};
}

inline double gap_from_moments(int dim, double m2, double m4, double V) {
    return m4 - (3.0 * dim / (dim + 2)) * m2 * m2 / V;
}

inline double direction_gap(const Body& K, const Eigen::VectorXd& xi) {
    auto [m2, m4] = lin_moments(K, xi);
    return gap_from_moments(K.dim, m2, m4, volume(K));
}

struct DirectionScan {
    Eigen::MatrixXd xi_grid; // rows
    Eigen::VectorXd m2, m4, gap;
    Eigen::VectorXd best_xi;
    double best_gap = 0.0;
};

// Quasi-uniform half-sphere sample (lin moments are even in xi).
inline Eigen::MatrixXd direction_sample(int dim, int n_samples) {
    Eigen::MatrixXd xs(n_samples, dim);
    if (dim == 2) {
        for (int k = 0; k < n_samples; ++k) {
            double a = std::numbers::pi * k / n_samples;
            xs(k, 0) = std::cos(a);
            xs(k, 1) = std::sin(a);
        }
    } else {
        const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < n_samples; ++k) {
            double z = (k + 0.5) / n_samples; // upper hemisphere
            double r = std::sqrt(1.0 - z * z);
            xs(k, 0) = r * std::cos(ga * k);
            xs(k, 1) = r * std::sin(ga * k);
            xs(k, 2) = z;
        }
    }
    return xs;
}

inline DirectionScan scan_directions(const Body& K, int n_samples = 512) {
    MomentForms f = lin_moment_forms(K);
    DirectionScan s;
    s.xi_grid = direction_sample(K.dim, n_samples);
    s.m2.resize(n_samples);
    s.m4.resize(n_samples);
    s.gap.resize(n_samples);
    int best = 0;
    for (int k = 0; k < n_samples; ++k) {
        Eigen::VectorXd xi = s.xi_grid.row(k);
        s.m2[k] = f.m2(xi);
        s.m4[k] = f.m4(xi);
        s.gap[k] = gap_from_moments(K.dim, s.m2[k], s.m4[k], f.V);
        if (s.gap[k] > s.gap[best]) best = k;
    }
    s.best_xi = s.xi_grid.row(best);
    s.best_gap = s.gap[best];
    return s;
}

inline void write_csv(const DirectionScan& s, std::ostream& os) {
    const int n = s.xi_grid.cols();
    for (int i = 0; i < n; ++i) os << "xi" << i << ",";
    os << "m2,m4,gap\n";
    os.precision(17);
    for (int k = 0; k < s.xi_grid.rows(); ++k) {
        for (int i = 0; i < n; ++i) os << s.xi_grid(k, i) << ",";
        os << s.m2[k] << "," << s.m4[k] << "," << s.gap[k] << "\n";
    }
}

struct GoodDirection {
    Eigen::VectorXd xi; // on the original body
    double gap = 0.0;   // direction_gap(K, xi)
    DirectionScan scan; // on the isotropized image
    Eigen::MatrixXd T;
};

// Isotropize, scan, and pull the best direction back through T^{-1}
// (the lin functionals live on the polar body, which transforms by T^{-T}).
inline GoodDirection find_good_direction(const Body& K, int n_samples = 512) {
    auto iso = isotropize(K);
    GoodDirection g;
    g.T = iso.T;
    g.scan = scan_directions(iso.body, n_samples);
    g.xi = (iso.T.inverse() * g.scan.best_xi).normalized();
    g.gap = direction_gap(K, g.xi);
    return g;
}

// Closed-form Gaussian average of the direction gap minus its predicted
// value 3 Var_{V_K}(1/h^2); must vanish for isotropic, volume-1 bodies.
inline double expectation_identity(const Body& K) {
    IsotropyReport iso = isotropy_defect(K);
    if (iso.defect >= 1e-8)
        throw NotIsotropic("expectation_identity: defect " +
                           std::to_string(iso.defect));
    // rescale to unit volume (preserves isotropy)
    double V = volume(K);
    Body Ku = body_from_coeffs(K.grid, K.basis,
                               std::pow(1.0 / V, 1.0 / K.dim) * K.coeffs);
    const int n = K.dim;
    Eigen::VectorXd wv = Ku.grid->weights.cwiseProduct(Ku.vk_density());
    Eigen::ArrayXd h2 = Ku.hj.v.array().square();
    double I4 = wv.dot((1.0 / h2.square()).matrix());
    double B = wv.dot((1.0 / h2).matrix());
    Eigen::MatrixXd X2 = Ku.grid->nodes.transpose() *
                         Eigen::VectorXd((wv.array() / h2)).asDiagonal() *
                         Ku.grid->nodes;
    double A = X2.squaredNorm();
    double lhs = 3.0 * I4 - (3.0 * n / (n + 2)) * (2.0 * A + B * B);
    // Var_{V_K}(1/h^2) with V = 1
    double mean = B;
    double var = wv.dot((1.0 / h2 - mean).square().matrix());
    return std::abs(lhs - 3.0 * var);
}

} // namespace hbm

#endif
