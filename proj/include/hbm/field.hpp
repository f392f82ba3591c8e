#ifndef HBM_FIELD_HPP
#define HBM_FIELD_HPP

// Per-node scalar fields carrying their covariant 2-jet (value, gradient,
// Hessian) in the grid's tangent frames.  Products, powers, exp/log are
// propagated by the exact calculus rules, so fields built from basis
// expansions stay analytically differentiated.

#include <cmath>

#include <Eigen/Dense>

#include "hbm/basis.hpp"
#include "hbm/grid.hpp"

namespace hbm {

struct FieldJet {
    // N values; gradient N x d; Hessian N x (1 or 3) with columns
    // (11) on S^1 and (11, 12, 22) on S^2.
    Eigen::VectorXd v;
    Eigen::MatrixXd g;
    Eigen::MatrixXd H;

    int nodes() const { return static_cast<int>(v.size()); }
    int tangent_dim() const { return static_cast<int>(g.cols()); }

    static FieldJet zero(int N, int d) {
        FieldJet f;
        f.v = Eigen::VectorXd::Zero(N);
        f.g = Eigen::MatrixXd::Zero(N, d);
        f.H = Eigen::MatrixXd::Zero(N, d == 1 ? 1 : 3);
        return f;
    }

    static FieldJet constant(int N, int d, double c) {
        FieldJet f = zero(N, d);
        f.v.setConstant(c);
        return f;
    }

    FieldJet& operator+=(const FieldJet& o) {
        v += o.v;
        g += o.g;
        H += o.H;
        return *this;
    }
    FieldJet& operator-=(const FieldJet& o) {
        v -= o.v;
        g -= o.g;
        H -= o.H;
        return *this;
    }
    FieldJet& operator*=(double c) {
        v *= c;
        g *= c;
        H *= c;
        return *this;
    }

    friend FieldJet operator+(FieldJet a, const FieldJet& b) { return a += b; }
    friend FieldJet operator-(FieldJet a, const FieldJet& b) { return a -= b; }
    friend FieldJet operator*(FieldJet a, double c) { return a *= c; }
    friend FieldJet operator*(double c, FieldJet a) { return a *= c; }

    void add_constant(double c) { v.array() += c; }
};

// Product rule: (fg)'' = f''g + 2 f'g' + g''f.
inline FieldJet multiply(const FieldJet& a, const FieldJet& b) {
    FieldJet r;
    r.v = a.v.cwiseProduct(b.v);
    r.g = a.g.array().colwise() * b.v.array();
    r.g.array() += b.g.array().colwise() * a.v.array();
    const int d = a.tangent_dim();
    r.H.resize(a.nodes(), d == 1 ? 1 : 3);
    if (d == 1) {
        r.H.col(0) = a.H.col(0).cwiseProduct(b.v) + b.H.col(0).cwiseProduct(a.v) +
                     2.0 * a.g.col(0).cwiseProduct(b.g.col(0));
    } else {
        r.H.col(0) = a.H.col(0).cwiseProduct(b.v) + b.H.col(0).cwiseProduct(a.v) +
                     2.0 * a.g.col(0).cwiseProduct(b.g.col(0));
        r.H.col(1) = a.H.col(1).cwiseProduct(b.v) + b.H.col(1).cwiseProduct(a.v) +
                     a.g.col(0).cwiseProduct(b.g.col(1)) +
                     a.g.col(1).cwiseProduct(b.g.col(0));
        r.H.col(2) = a.H.col(2).cwiseProduct(b.v) + b.H.col(2).cwiseProduct(a.v) +
                     2.0 * a.g.col(1).cwiseProduct(b.g.col(1));
    }
    return r;
}

// Chain rule for a scalar map phi: phi(f)'' = phi'(f) f'' + phi''(f) f' f'.
inline FieldJet compose(const FieldJet& a, const Eigen::VectorXd& phi,
                        const Eigen::VectorXd& dphi,
                        const Eigen::VectorXd& ddphi) {
    FieldJet r;
    r.v = phi;
    r.g = a.g.array().colwise() * dphi.array();
    const int d = a.tangent_dim();
    r.H.resize(a.nodes(), d == 1 ? 1 : 3);
    if (d == 1) {
        r.H.col(0) = dphi.cwiseProduct(a.H.col(0)) +
                     ddphi.cwiseProduct(a.g.col(0).cwiseProduct(a.g.col(0)));
    } else {
        r.H.col(0) = dphi.cwiseProduct(a.H.col(0)) +
                     ddphi.cwiseProduct(a.g.col(0).cwiseProduct(a.g.col(0)));
        r.H.col(1) = dphi.cwiseProduct(a.H.col(1)) +
                     ddphi.cwiseProduct(a.g.col(0).cwiseProduct(a.g.col(1)));
        r.H.col(2) = dphi.cwiseProduct(a.H.col(2)) +
                     ddphi.cwiseProduct(a.g.col(1).cwiseProduct(a.g.col(1)));
    }
    return r;
}

inline FieldJet power(const FieldJet& a, double p) {
    Eigen::VectorXd f = a.v.array().pow(p);
    Eigen::VectorXd df = p * a.v.array().pow(p - 1.0);
    Eigen::VectorXd ddf = p * (p - 1.0) * a.v.array().pow(p - 2.0);
    return compose(a, f, df, ddf);
}

// Integer power, safe at zeros of the base (needed for lin^p).
inline FieldJet ipow(const FieldJet& a, int p) {
    auto safe_pow = [&](int q) {
        Eigen::VectorXd r(a.nodes());
        for (int k = 0; k < a.nodes(); ++k)
            r[k] = q < 0 ? 0.0 : std::pow(a.v[k], q);
        return r;
    };
    Eigen::VectorXd f = safe_pow(p);
    Eigen::VectorXd df = double(p) * safe_pow(p - 1);
    Eigen::VectorXd ddf = double(p) * double(p - 1) * safe_pow(p - 2);
    return compose(a, f, df, ddf);
}

inline FieldJet exp_field(const FieldJet& a) {
    Eigen::VectorXd e = a.v.array().exp();
    return compose(a, e, e, e);
}

inline FieldJet log_field(const FieldJet& a) {
    Eigen::VectorXd f = a.v.array().log();
    Eigen::VectorXd df = a.v.cwiseInverse();
    Eigen::VectorXd ddf = -df.cwiseProduct(df);
    return compose(a, f, df, ddf);
}

inline FieldJet reciprocal(const FieldJet& a) { return power(a, -1.0); }

// Field of a basis expansion (exact jets from the basis tables).
inline FieldJet field_from_coeffs(const HarmonicBasis& basis,
                                  const Eigen::VectorXd& coeffs) {
    FieldJet f;
    f.v = basis.val * coeffs;
    const int d = basis.dim - 1;
    f.g.resize(basis.val.rows(), d);
    f.g.col(0) = basis.g1 * coeffs;
    if (d == 2) f.g.col(1) = basis.g2 * coeffs;
    f.H.resize(basis.val.rows(), d == 1 ? 1 : 3);
    f.H.col(0) = basis.h11 * coeffs;
    if (d == 2) {
        f.H.col(1) = basis.h12 * coeffs;
        f.H.col(2) = basis.h22 * coeffs;
    }
    return f;
}

// Restriction of the linear functional <theta, xi> to the sphere.
// Its Euclidean extension is linear, hence D^2 = 0 and Hess = -v * id.
inline FieldJet linear_field(const SphereGrid& grid, const Eigen::VectorXd& xi) {
    const int N = grid.node_count(), d = grid.tangent_dim();
    FieldJet f = FieldJet::zero(N, d);
    f.v = grid.nodes * xi;
    f.g.col(0) = grid.frame1 * xi;
    if (d == 2) f.g.col(1) = grid.frame2 * xi;
    f.H.col(0) = -f.v;
    if (d == 2) f.H.col(2) = -f.v;
    return f;
}

// D^2 f = Hess f + f * id, the second derivative of the 1-homogeneous
// extension restricted to the tangent plane.
inline Eigen::MatrixXd d2_of(const FieldJet& f) {
    Eigen::MatrixXd D = f.H;
    D.col(0) += f.v;
    if (D.cols() == 3) D.col(2) += f.v;
    return D;
}

// det of the per-node symmetric matrix stored in component columns.
inline Eigen::VectorXd det_comp(const Eigen::MatrixXd& D) {
    if (D.cols() == 1) return D.col(0);
    return D.col(0).cwiseProduct(D.col(2)) - D.col(1).cwiseProduct(D.col(1));
}

inline Eigen::VectorXd trace_comp(const Eigen::MatrixXd& D) {
    if (D.cols() == 1) return D.col(0);
    return D.col(0) + D.col(2);
}

// Smallest eigenvalue per node of the symmetric component matrix.
inline Eigen::VectorXd min_eig_comp(const Eigen::MatrixXd& D) {
    if (D.cols() == 1) return D.col(0);
    Eigen::VectorXd tr = D.col(0) + D.col(2);
    Eigen::VectorXd disc =
        ((D.col(0) - D.col(2)).array().square() + 4.0 * D.col(1).array().square())
            .sqrt();
    return 0.5 * (tr - disc);
}

} // namespace hbm

#endif
