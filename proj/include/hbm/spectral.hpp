#ifndef HBM_SPECTRAL_HPP
#define HBM_SPECTRAL_HPP

// Galerkin assembly of the Hilbert-Brunn-Minkowski operator over
// (S^{n-1}, g_K, V_K) in the harmonic basis, eigenvalue extraction on parity
// subspaces, and the Rayleigh / mixed-volume quotients.

#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "hbm/body.hpp"
#include "hbm/mixed_volume.hpp"

namespace hbm {

struct OperatorAssembly {
    Eigen::MatrixXd stiffness; // A_ab = int g_K^{ij} (phi_a)_i (phi_b)_j dV_K
    Eigen::MatrixXd mass;      // M_ab = int phi_a phi_b dV_K
    Eigen::VectorXd mean;      // m_a  = int phi_a dV_K
    double volume = 0.0;       // int dV_K
    std::shared_ptr<const HarmonicBasis> basis;
};

struct SpectralResult {
    std::vector<double> eigenvalues; // ascending
    Eigen::MatrixXd eigenvectors;    // columns, coefficient space of `basis`
    std::string subspace;            // "all" or "even"
    std::vector<double> residuals;   // ||A v - lambda M v|| / ||M v||
    double lambda1 = 0.0;
    int multiplicity = 0;
};

inline OperatorAssembly assemble(const Body& K) {
    const auto& b = *K.basis;
    const auto& g = *K.grid;
    OperatorAssembly out;
    out.basis = K.basis;

    Eigen::VectorXd vk = K.vk_density();
    Eigen::VectorXd wv = g.weights.cwiseProduct(vk);
    Eigen::MatrixXd gkinv = K.gk_inverse();
    if (!gkinv.allFinite()) throw SingularMetric("assemble: g_K inversion failed");

    out.mass = b.val.transpose() * wv.asDiagonal() * b.val;
    out.mass = 0.5 * (out.mass + out.mass.transpose()).eval();
    out.mean = b.val.transpose() * wv;
    out.volume = wv.sum();

    if (g.dim == 2) {
        Eigen::VectorXd w11 = wv.cwiseProduct(gkinv.col(0));
        out.stiffness = b.g1.transpose() * w11.asDiagonal() * b.g1;
    } else {
        Eigen::VectorXd w11 = wv.cwiseProduct(gkinv.col(0));
        Eigen::VectorXd w12 = wv.cwiseProduct(gkinv.col(1));
        Eigen::VectorXd w22 = wv.cwiseProduct(gkinv.col(2));
        out.stiffness = b.g1.transpose() * w11.asDiagonal() * b.g1 +
                        b.g1.transpose() * w12.asDiagonal() * b.g2 +
                        b.g2.transpose() * w12.asDiagonal() * b.g1 +
                        b.g2.transpose() * w22.asDiagonal() * b.g2;
    }
    out.stiffness = 0.5 * (out.stiffness + out.stiffness.transpose()).eval();
    return out;
}

// Pointwise -Delta_K z = -g_K^{ij} (z_ij + (log h)_i z_j + (log h)_j z_i);
// z_ij is the spherical covariant Hessian.
inline Eigen::VectorXd apply_operator(const Body& K, const FieldJet& z) {
    Eigen::MatrixXd gkinv = K.gk_inverse();
    Eigen::ArrayXd l1 = K.hj.g.col(0).array() / K.hj.v.array();
    Eigen::VectorXd out;
    if (K.dim == 2) {
        Eigen::ArrayXd t = z.H.col(0).array() + 2.0 * l1 * z.g.col(0).array();
        out = -(gkinv.col(0).array() * t).matrix();
    } else {
        Eigen::ArrayXd l2 = K.hj.g.col(1).array() / K.hj.v.array();
        Eigen::ArrayXd t11 = z.H.col(0).array() + 2.0 * l1 * z.g.col(0).array();
        Eigen::ArrayXd t12 = z.H.col(1).array() + l1 * z.g.col(1).array() +
                             l2 * z.g.col(0).array();
        Eigen::ArrayXd t22 = z.H.col(2).array() + 2.0 * l2 * z.g.col(1).array();
        out = -(gkinv.col(0).array() * t11 + 2.0 * gkinv.col(1).array() * t12 +
                gkinv.col(2).array() * t22)
                   .matrix();
    }
    return out;
}

namespace detail {

inline std::vector<double> pair_residuals(const Eigen::MatrixXd& A,
                                          const Eigen::MatrixXd& M,
                                          const std::vector<double>& lam,
                                          const Eigen::MatrixXd& vecs) {
    std::vector<double> res;
    for (size_t i = 0; i < lam.size(); ++i) {
        Eigen::VectorXd v = vecs.col(i);
        double denom = (M * v).norm();
        res.push_back((A * v - lam[i] * M * v).norm() / denom);
    }
    return res;
}

} // namespace detail

// Smallest nonzero eigenvalue on the full space, with its eigenvalue cluster
// reported as the multiplicity.  The default clustering tolerance (1e-6
// relative) is right for bodies whose polar support 1/h is well resolved by
// the basis; strongly eccentric ellipsoids split their lin-eigenvalue
// multiplet by the truncation tail and need a looser tolerance -- individual
// eigenvalues are always reported, never merged.
inline SpectralResult lambda1(const Body& K, double cluster_tol = 1e-6) {
    OperatorAssembly op = assemble(K);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(op.stiffness,
                                                                 op.mass);
    SpectralResult r;
    r.subspace = "all";
    Eigen::VectorXd ev = es.eigenvalues();
    // ev[0] ~ 0 is the constant mode
    double l1 = ev[1];
    int mult = 0;
    std::vector<int> keep;
    keep.push_back(0);
    for (int i = 1; i < ev.size(); ++i)
        if (std::abs(ev[i] - l1) <= cluster_tol * std::abs(l1)) {
            ++mult;
            keep.push_back(i);
        }
    r.eigenvectors.resize(op.mass.rows(), keep.size());
    for (size_t i = 0; i < keep.size(); ++i) {
        r.eigenvalues.push_back(ev[keep[i]]);
        r.eigenvectors.col(i) = es.eigenvectors().col(keep[i]);
    }
    r.lambda1 = l1;
    r.multiplicity = mult;
    r.residuals = detail::pair_residuals(op.stiffness, op.mass, r.eigenvalues,
                                         r.eigenvectors);
    return r;
}

// Smallest eigenvalue of the Dirichlet form on even, V_K-mean-zero fields.
// Constants are deflated through the rank-one mass correction
// M~ = M - m m^T / V, whose kernel in the even block is exactly the
// constant-coefficient direction; that coordinate is dropped.
inline SpectralResult lambda1_even(const Body& K,
                                   const OperatorAssembly* pre = nullptr) {
    OperatorAssembly local;
    if (!pre) {
        local = assemble(K);
        pre = &local;
    }
    const OperatorAssembly& op = *pre;
    std::vector<int> idx = op.basis->even_indices();
    const int ne = static_cast<int>(idx.size());
    Eigen::MatrixXd Ae(ne, ne), Me(ne, ne);
    Eigen::VectorXd me(ne);
    for (int i = 0; i < ne; ++i) {
        me[i] = op.mean[idx[i]];
        for (int j = 0; j < ne; ++j) {
            Ae(i, j) = op.stiffness(idx[i], idx[j]);
            Me(i, j) = op.mass(idx[i], idx[j]);
        }
    }
    Me -= (me * me.transpose()) / op.volume;
    // idx[0] is the constant basis function; drop it.
    Eigen::MatrixXd A2 = Ae.bottomRightCorner(ne - 1, ne - 1);
    Eigen::MatrixXd M2 = Me.bottomRightCorner(ne - 1, ne - 1);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A2, M2);

    SpectralResult r;
    r.subspace = "even";
    r.lambda1 = es.eigenvalues()[0];
    r.multiplicity = 1;
    for (int i = 1; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()[i] - r.lambda1) <=
            1e-6 * std::abs(r.lambda1))
            ++r.multiplicity;
        else
            break;
    // report the whole lambda1 cluster (kick directions for bifurcations)
    r.eigenvectors = Eigen::MatrixXd::Zero(op.basis->count, r.multiplicity);
    for (int k = 0; k < r.multiplicity; ++k) {
        r.eigenvalues.push_back(es.eigenvalues()[k]);
        for (int i = 1; i < ne; ++i)
            r.eigenvectors(idx[i], k) = es.eigenvectors()(i - 1, k);
    }
    r.eigenvalues[0] = r.lambda1;
    r.residuals = detail::pair_residuals(
        A2, M2, r.eigenvalues, es.eigenvectors().leftCols(r.multiplicity));
    return r;
}

inline double dirichlet_energy(const Body& K, const FieldJet& z) {
    Eigen::MatrixXd gkinv = K.gk_inverse();
    Eigen::VectorXd wv = K.grid->weights.cwiseProduct(K.vk_density());
    Eigen::ArrayXd e;
    if (K.dim == 2) {
        e = gkinv.col(0).array() * z.g.col(0).array().square();
    } else {
        e = gkinv.col(0).array() * z.g.col(0).array().square() +
            2.0 * gkinv.col(1).array() * z.g.col(0).array() * z.g.col(1).array() +
            gkinv.col(2).array() * z.g.col(1).array().square();
    }
    return (wv.array() * e).sum();
}

inline double variance_vk(const Body& K, const Eigen::VectorXd& z) {
    Eigen::VectorXd wv = K.grid->weights.cwiseProduct(K.vk_density());
    double V = wv.sum();
    double mean = wv.dot(z) / V;
    return wv.dot((z.array() - mean).square().matrix());
}

inline double rayleigh(const Body& K, const FieldJet& z) {
    double var = variance_vk(K, z.v);
    double scale = K.grid->weights.cwiseProduct(K.vk_density())
                       .dot(z.v.cwiseAbs2());
    if (var <= 1e-12 * std::max(scale, 1e-300))
        throw DegenerateTestFunction("rayleigh: variance below floor");
    return dirichlet_energy(K, z) / var;
}

// (n-1) [ int (h_L/h_K)^2 dV_K - V(L[2],K[n-2]) ]
// ----------------------------------------------- ,
//  int (h_L/h_K)^2 dV_K - V(L[1],K[n-1])^2 / V(K)
inline double quotient_C(const Body& K, const Body& L) {
    if (K.dim != L.dim) throw DimensionMismatch("quotient_C");
    const int n = K.dim;
    Eigen::VectorXd ratio = L.hj.v.cwiseQuotient(K.hj.v);
    Eigen::VectorXd wv = K.grid->weights.cwiseProduct(K.vk_density());
    double I2 = wv.dot(ratio.cwiseAbs2());

    std::vector<FieldJet> e1, e2;
    e1.push_back(L.hj);
    for (int i = 1; i < n; ++i) e1.push_back(K.hj);
    e2.push_back(L.hj);
    e2.push_back(L.hj);
    for (int i = 2; i < n; ++i) e2.push_back(K.hj);
    double V1 = mixed_volume(*K.grid, e1);
    double V2 = mixed_volume(*K.grid, e2);
    double V = volume(K);

    double num = I2 - V2;
    double den = I2 - V1 * V1 / V;
    double scale = std::abs(I2);
    if (num < -1e-9 * scale || den < -1e-9 * scale)
        throw Error("quotient_C: Cauchy-Schwarz/Minkowski sign violated");
    if (den <= 1e-12 * scale)
        throw DegenerateTestBody("quotient_C: h_L/h_K constant V_K-a.e.");
    return (n - 1) * num / den;
}

// Minimizer of quotient_C over perturbations h_L = h_K (1 + z), z even.
// For such L the quotient collapses exactly to
//   (n-1) [ int z^2 dV_K - V_K(z,z) ] / Var_{V_K}(z),
// so the minimum is the bottom of a generalized eigenproblem built from
// mixed-volume matrices -- an assembly route independent of `assemble`.
struct QuotientCMin {
    double value = 0.0;
    Eigen::VectorXd z_coeffs; // full coefficient space
};

inline QuotientCMin minimize_quotient_C(const Body& K) {
    const auto& b = *K.basis;
    const auto& g = *K.grid;
    const int n = K.dim;
    std::vector<int> idx = b.even_indices();
    const int ne = static_cast<int>(idx.size());
    const int N = g.node_count();

    // tables of f_a = phi_a h with jets
    Eigen::MatrixXd fv(N, ne), f1(N, ne), f2, H11(N, ne), H12, H22;
    if (n == 3) {
        f2.resize(N, ne);
        H12.resize(N, ne);
        H22.resize(N, ne);
    }
    for (int i = 0; i < ne; ++i) {
        int a = idx[i];
        FieldJet f = multiply(
            FieldJet{b.val.col(a), [&] {
                         Eigen::MatrixXd gg(N, g.tangent_dim());
                         gg.col(0) = b.g1.col(a);
                         if (n == 3) gg.col(1) = b.g2.col(a);
                         return gg;
                     }(),
                     [&] {
                         Eigen::MatrixXd hh(N, n == 2 ? 1 : 3);
                         hh.col(0) = b.h11.col(a);
                         if (n == 3) {
                             hh.col(1) = b.h12.col(a);
                             hh.col(2) = b.h22.col(a);
                         }
                         return hh;
                     }()},
            K.hj);
        Eigen::MatrixXd D2f = d2_of(f);
        fv.col(i) = f.v;
        f1.col(i) = f.g.col(0);
        H11.col(i) = D2f.col(0);
        if (n == 3) {
            f2.col(i) = f.g.col(1);
            H12.col(i) = D2f.col(1);
            H22.col(i) = D2f.col(2);
        }
    }

    // Q_ab = V_K(phi_a, phi_b) = V(f_a, f_b, h[n-2])
    Eigen::MatrixXd Q;
    if (n == 2) {
        Q = fv.transpose() * (0.5 * g.weights).asDiagonal() * H11;
    } else {
        const Eigen::MatrixXd& B = K.D2; // D^2 h comps
        Eigen::ArrayXXd Hmix = H11.array().colwise() * B.col(2).array();
        Hmix += H22.array().colwise() * B.col(0).array();
        Hmix -= 2.0 * (H12.array().colwise() * B.col(1).array());
        Q = fv.transpose() * (g.weights / 6.0).asDiagonal() * Hmix.matrix();
    }
    Q = 0.5 * (Q + Q.transpose()).eval();

    Eigen::VectorXd wv = g.weights.cwiseProduct(K.vk_density());
    Eigen::MatrixXd Mfull(ne, ne);
    Eigen::VectorXd me(ne);
    {
        Eigen::MatrixXd vals(N, ne);
        for (int i = 0; i < ne; ++i) vals.col(i) = b.val.col(idx[i]);
        Mfull = vals.transpose() * wv.asDiagonal() * vals;
        me = vals.transpose() * wv;
    }
    double V = wv.sum();
    Eigen::MatrixXd A = (n - 1.0) * (Mfull - Q);
    Eigen::MatrixXd Mt = Mfull - (me * me.transpose()) / V;
    A = 0.5 * (A + A.transpose()).eval();
    Eigen::MatrixXd A2 = A.bottomRightCorner(ne - 1, ne - 1);
    Eigen::MatrixXd M2 = Mt.bottomRightCorner(ne - 1, ne - 1);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A2, M2);

    QuotientCMin out;
    out.value = es.eigenvalues()[0];
    out.z_coeffs = Eigen::VectorXd::Zero(b.count);
    for (int i = 1; i < ne; ++i)
        out.z_coeffs[idx[i]] = es.eigenvectors()(i - 1, 0);
    return out;
}

inline nlohmann::json to_json(const SpectralResult& r) {
    nlohmann::json j;
    j["eigenvalues"] = r.eigenvalues;
    j["residuals"] = r.residuals;
    j["subspace"] = r.subspace;
    j["lambda1"] = r.lambda1;
    j["multiplicity"] = r.multiplicity;
    return j;
}

} // namespace hbm

#endif
