#ifndef HBM_AFFINE_HPP
#define HBM_AFFINE_HPP

// Centro-affine machinery: Gamma_{-p} body gauges, isotropy of S_2 K, and
// the S_2-isotropic positioning transform.

#include <Eigen/Dense>

#include "hbm/body.hpp"
#include "hbm/field.hpp"

namespace hbm {

struct IsotropyReport {
    Eigen::MatrixXd moment_matrix; // Q(S_2 K)
    double defect = 0.0;           // ||Q - (trQ/n) I||_F / (trQ/n)
    Eigen::MatrixXd transform;     // accumulated T in SL_n
    int iterations = 0;
    bool converged = true;
};

// ||x||_{Gamma_{-p}K} = ( (n/V(K)) int |lin_{K,x}|^p dV_K )^{1/p}, p in {2,4}.
inline double gamma_gauge(const Body& K, int p, const Eigen::VectorXd& x) {
    if (p != 2 && p != 4) throw Error("gamma_gauge: p must be 2 or 4");
    if (x.size() != K.dim) throw DimensionMismatch("gamma_gauge");
    if (x.norm() == 0.0) throw ZeroVector("gamma_gauge: x = 0");
    Eigen::ArrayXd lin =
        (K.grid->nodes * x).array() / K.hj.v.array();
    Eigen::VectorXd wv = K.grid->weights.cwiseProduct(K.vk_density());
    double I = wv.dot(lin.pow(p).matrix());
    return std::pow(K.dim / volume(K) * I, 1.0 / p);
}

namespace detail {

inline Eigen::MatrixXd s2_moment_matrix(const Body& K) {
    // S_2 K = h^{-1} det(D^2 h) m
    Eigen::VectorXd dens =
        K.detD2.cwiseQuotient(K.hj.v).cwiseProduct(K.grid->weights);
    return K.grid->nodes.transpose() * dens.asDiagonal() * K.grid->nodes;
}

inline double defect_of(const Eigen::MatrixXd& Q) {
    const int n = Q.rows();
    double mean = Q.trace() / n;
    return (Q - mean * Eigen::MatrixXd::Identity(n, n)).norm() / mean;
}

// symmetric matrix power, det-normalized to 1
inline Eigen::MatrixXd sym_power_sl(const Eigen::MatrixXd& Q, double e) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
    Eigen::VectorXd d = es.eigenvalues().array().pow(e);
    Eigen::MatrixXd S =
        es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
    return S / std::pow(S.determinant(), 1.0 / Q.rows());
}

} // namespace detail

inline IsotropyReport isotropy_defect(const Body& K) {
    IsotropyReport r;
    r.moment_matrix = detail::s2_moment_matrix(K);
    r.defect = detail::defect_of(r.moment_matrix);
    r.transform = Eigen::MatrixXd::Identity(K.dim, K.dim);
    return r;
}

struct IsotropizeResult {
    Eigen::MatrixXd T;
    Body body;
    IsotropyReport report;
};

// Fixed point T <- normalize(Q(S_2 T(K))^{1/2}) T, det-normalized each
// step; undamped, falling back to a quarter-power step when the defect
// fails to decrease.  (S_2 of an eccentric body concentrates on its *thin*
// directions -- Q of S_2(A(B)) scales like A^{-2} for ellipsoids -- so the
// rounding map is the +1/2 power; a single step is exact on ellipsoids.)
inline IsotropizeResult isotropize(const Body& K, double tol = 1e-10,
                                   int max_iter = 50) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Identity(K.dim, K.dim);
    Body cur = K;
    Eigen::MatrixXd Q = detail::s2_moment_matrix(cur);
    double defect = detail::defect_of(Q);
    int it = 0;
    while (defect >= tol && it < max_iter) {
        Eigen::MatrixXd S = detail::sym_power_sl(Q, 0.5);
        Body next = apply_linear(K, S * T);
        Eigen::MatrixXd Qn = detail::s2_moment_matrix(next);
        double dn = detail::defect_of(Qn);
        if (dn >= defect) { // damped fallback
            S = detail::sym_power_sl(Q, 0.25);
            next = apply_linear(K, S * T);
            Qn = detail::s2_moment_matrix(next);
            dn = detail::defect_of(Qn);
        }
        T = S * T;
        cur = std::move(next);
        Q = Qn;
        defect = dn;
        ++it;
    }
    IsotropizeResult out{T, cur, {}};
    out.report.moment_matrix = Q;
    out.report.defect = defect;
    out.report.transform = T;
    out.report.iterations = it;
    out.report.converged = defect < tol;
    if (!out.report.converged)
        throw NoConvergence("isotropize: defect " + std::to_string(defect) +
                            " after " + std::to_string(max_iter) +
                            " iterations");
    return out;
}

} // namespace hbm

#endif
