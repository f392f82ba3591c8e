#ifndef HBM_BODY_HPP
#define HBM_BODY_HPP

// Origin-symmetric convex bodies represented by the even harmonic
// coefficients of their support function.  All node fields (h, gradient,
// D^2 h, the centro-affine metric g_K and its inverse) are caches derived
// from the coefficient vector.

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "hbm/basis.hpp"
#include "hbm/errors.hpp"
#include "hbm/field.hpp"
#include "hbm/grid.hpp"

namespace hbm {

enum class Convexity { Strict, Weak };

struct Body {
    int dim = 0;
    std::shared_ptr<const SphereGrid> grid;
    std::shared_ptr<const HarmonicBasis> basis;

    Eigen::VectorXd coeffs; // harmonic coefficients of h_K (odd part zero)

    // Derived caches.
    FieldJet hj;             // h with covariant jets
    Eigen::MatrixXd D2;      // D^2 h components per node
    Eigen::VectorXd detD2;   // det D^2 h
    Eigen::MatrixXd invD2;   // (D^2 h)^{-1} components
    Eigen::VectorXd min_eig; // smallest eigenvalue of D^2 h per node

    int node_count() const { return grid->node_count(); }

    const Eigen::VectorXd& h() const { return hj.v; }

    // g_K^{ij} = h (D^2 h)^{-1} in the node frame.
    Eigen::MatrixXd gk_inverse() const {
        return invD2.array().colwise() * hj.v.array();
    }

    Eigen::VectorXd vk_density() const {
        return (1.0 / dim) * hj.v.cwiseProduct(detD2);
    }
    Eigen::VectorXd sk_density() const { return detD2; }
    Eigen::VectorXd spk_density(double p) const {
        return hj.v.array().pow(1.0 - p) * detD2.array();
    }
};

struct MeasureField {
    enum class Kind { SK, SpK, VK };
    Kind kind = Kind::SK;
    double p = 1.0; // for SpK
    Eigen::VectorXd density;
    double total = 0.0;
};

// curvature_floor = 1e-8 * (mean eigenvalue of D^2 h over nodes).
inline double curvature_floor(const Body& K) {
    double mean = trace_comp(K.D2).mean() / K.grid->tangent_dim();
    return 1e-8 * mean;
}

namespace detail {

inline void zero_odd_coeffs(const HarmonicBasis& basis, Eigen::VectorXd& c) {
    for (int a = 0; a < basis.count; ++a)
        if (!basis.even[a]) c[a] = 0.0;
}

} // namespace detail

// Build a Body from coefficients, refreshing all caches and validating the
// convexity invariants.
inline Body body_from_coeffs(std::shared_ptr<const SphereGrid> grid,
                             std::shared_ptr<const HarmonicBasis> basis,
                             Eigen::VectorXd coeffs,
                             Convexity mode = Convexity::Strict) {
    Body K;
    K.dim = grid->dim;
    K.grid = grid;
    K.basis = basis;
    for (int a = 0; a < basis->count; ++a)
        if (!basis->even[a] && coeffs[a] != 0.0)
            throw Error("body_from_coeffs: odd-parity coefficient present");
    K.coeffs = std::move(coeffs);
    K.hj = field_from_coeffs(*basis, K.coeffs);
    if (K.hj.v.minCoeff() <= 0.0)
        throw ConvexityFailure("body: support function not positive");
    K.D2 = d2_of(K.hj);
    K.detD2 = det_comp(K.D2);
    K.min_eig = min_eig_comp(K.D2);

    double mean = trace_comp(K.D2).mean() / grid->tangent_dim();
    double floor = (mode == Convexity::Strict) ? 1e-8 * mean : -1e-9 * mean;
    if (K.min_eig.minCoeff() < floor)
        throw ConvexityFailure("body: D^2 h violates the curvature floor (min eig " +
                               std::to_string(K.min_eig.minCoeff()) + ")");
    if (mode == Convexity::Strict && K.detD2.minCoeff() <= 0.0)
        throw SingularMetric("body: det D^2 h not positive");

    K.invD2.resize(K.D2.rows(), K.D2.cols());
    if (K.D2.cols() == 1) {
        K.invD2.col(0) = K.D2.col(0).cwiseInverse();
    } else {
        Eigen::VectorXd det = K.detD2;
        if (mode == Convexity::Weak)
            det = det.cwiseMax(1e-300); // weak bodies may touch det = 0
        K.invD2.col(0) = K.D2.col(2).cwiseQuotient(det);
        K.invD2.col(1) = -K.D2.col(1).cwiseQuotient(det);
        K.invD2.col(2) = K.D2.col(0).cwiseQuotient(det);
    }
    return K;
}

inline Body body_from_values(std::shared_ptr<const SphereGrid> grid,
                             std::shared_ptr<const HarmonicBasis> basis,
                             const Eigen::VectorXd& values,
                             Convexity mode = Convexity::Strict) {
    Eigen::VectorXd c = basis->project(values);
    detail::zero_odd_coeffs(*basis, c);
    return body_from_coeffs(grid, basis, std::move(c), mode);
}

// ---- standard constructors -------------------------------------------------

inline Body make_ball(std::shared_ptr<const SphereGrid> grid,
                      std::shared_ptr<const HarmonicBasis> basis, double r = 1.0) {
    if (r <= 0) throw Error("make_ball: radius must be positive");
    return body_from_values(grid, basis,
                            Eigen::VectorXd::Constant(grid->node_count(), r));
}

// h_{A(B)}(u) = |A^T u|.
inline Body make_ellipsoid(std::shared_ptr<const SphereGrid> grid,
                           std::shared_ptr<const HarmonicBasis> basis,
                           const Eigen::MatrixXd& A) {
    if (A.rows() != grid->dim || A.cols() != grid->dim)
        throw DimensionMismatch("make_ellipsoid: matrix size");
    Eigen::VectorXd h(grid->node_count());
    for (int k = 0; k < grid->node_count(); ++k)
        h[k] = (A.transpose() * grid->nodes.row(k).transpose()).norm();
    return body_from_values(grid, basis, h);
}

// Dual-norm gauge of the l^q ball plus eps * |x|, projected onto the even
// basis (smooth stand-in for the cube witnesses).  The raw truncation rings
// hard -- D^2 of the dual norm has an integrable singularity on the
// coordinate great circles -- so the projection is tapered with an
// exponential spectral filter before the convexity check.
inline Body make_rounded_lq(std::shared_ptr<const SphereGrid> grid,
                            std::shared_ptr<const HarmonicBasis> basis, double q,
                            double eps) {
    if (q <= 1.0) throw Error("make_rounded_lq: q must exceed 1");
    const double qd = q / (q - 1.0);
    Eigen::VectorXd h(grid->node_count());
    for (int k = 0; k < grid->node_count(); ++k) {
        double s = 0.0;
        for (int i = 0; i < grid->dim; ++i)
            s += std::pow(std::abs(grid->nodes(k, i)), qd);
        h[k] = std::pow(s, 1.0 / qd) + eps;
    }
    Eigen::VectorXd c = basis->project(h);
    detail::zero_odd_coeffs(*basis, c);
    for (int a = 0; a < basis->count; ++a) {
        double r = double(basis->degree[a]) / basis->max_degree;
        c[a] *= std::exp(-6.0 * r * r * r * r);
    }
    // The gauge is exactly symmetric under signed axis permutations but the
    // grid projection aliases asymmetrically; average the (band-limited, so
    // exactly rotatable) coefficients over the group to restore the symmetry.
    const int n = grid->dim;
    Eigen::VectorXd havg = Eigen::VectorXd::Zero(grid->node_count());
    int count = 0;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
        for (int signs = 0; signs < (1 << n); ++signs) {
            Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i)
                P(perm[i], i) = (signs >> i) & 1 ? -1.0 : 1.0;
            for (int k = 0; k < grid->node_count(); ++k) {
                Eigen::VectorXd u =
                    P.transpose() * grid->nodes.row(k).transpose();
                havg[k] += evaluate_expansion(*basis, c, u);
            }
            ++count;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    havg /= count;
    return body_from_values(grid, basis, havg);
}

inline double volume(const Body& K); // fwd

// h = exp(random even low-degree perturbation), rescaled to unit volume.
inline Body make_random_even(std::shared_ptr<const SphereGrid> grid,
                             std::shared_ptr<const HarmonicBasis> basis,
                             unsigned seed, double amplitude) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(basis->count);
    const int lmax = std::min(basis->max_degree, 6);
    for (int a = 0; a < basis->count; ++a) {
        int l = basis->degree[a];
        if (!basis->even[a] || l < 2 || l > lmax) continue;
        c[a] = gauss(rng) * amplitude / (double(l) * l);
    }
    FieldJet s = field_from_coeffs(*basis, c);
    Body K = body_from_values(grid, basis, s.v.array().exp());
    double V = volume(K);
    double scale = std::pow(1.0 / V, 1.0 / grid->dim);
    return body_from_coeffs(grid, basis, scale * K.coeffs);
}

// ---- geometry --------------------------------------------------------------

inline double volume(const Body& K) {
    return integrate(K.vk_density(), *K.grid);
}

inline double polar_volume(const Body& K) {
    Eigen::VectorXd f = K.hj.v.array().pow(-double(K.dim));
    return integrate(f, *K.grid) / K.dim;
}

// max h / min h; equals the out-/in-radius ratio for symmetric bodies.
inline double geometric_distance(const Body& K) {
    return K.hj.v.maxCoeff() / K.hj.v.minCoeff();
}

// Scale-minimized geometric distance between two bodies on the same grid.
inline double geometric_distance_between(const Body& K, const Body& L) {
    Eigen::VectorXd r = L.hj.v.cwiseQuotient(K.hj.v);
    return r.maxCoeff() / r.minCoeff();
}

inline Body apply_linear(const Body& K, const Eigen::MatrixXd& T) {
    if (T.rows() != K.dim || T.cols() != K.dim)
        throw DimensionMismatch("apply_linear: matrix size");
    if (T.isIdentity(0.0)) return K;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(T);
    if (!lu.isInvertible()) throw Error("apply_linear: T not invertible");
    Eigen::VectorXd h(K.node_count());
    for (int k = 0; k < K.node_count(); ++k) {
        Eigen::VectorXd u = T.transpose() * K.grid->nodes.row(k).transpose();
        double r = u.norm();
        h[k] = r * evaluate_expansion(*K.basis, K.coeffs, u / r);
    }
    return body_from_values(K.grid, K.basis, h);
}

inline MeasureField measures(const Body& K, MeasureField::Kind kind,
                             double p = 1.0) {
    MeasureField m;
    m.kind = kind;
    m.p = p;
    switch (kind) {
        case MeasureField::Kind::SK: m.density = K.sk_density(); break;
        case MeasureField::Kind::SpK: m.density = K.spk_density(p); break;
        case MeasureField::Kind::VK: m.density = K.vk_density(); break;
    }
    m.total = integrate(m.density, *K.grid);
    return m;
}

// h_{K_{R,p,xi}} = h_K ((p-1) R^p + lin_{K,xi}^p); convex by the support
// function shift lemma, so only weak convexity is enforced.
inline Body shifted_support(const Body& K, double R, int p,
                            const Eigen::VectorXd& xi) {
    if (p < 2 || p % 2 != 0) throw Error("shifted_support: p must be even >= 2");
    if (K.hj.v.minCoeff() < 1.0 / R - 1e-12)
        throw InradiusViolation("shifted_support: min h_K < 1/R");
    FieldJet lin = linear_field(*K.grid, xi.normalized());
    FieldJet u = multiply(ipow(lin, p), power(K.hj, 1.0 - p));
    FieldJet hnew = (p - 1.0) * std::pow(R, p) * K.hj + u;
    return body_from_values(K.grid, K.basis, hnew.v, Convexity::Weak);
}

// ---- serialization ---------------------------------------------------------

inline nlohmann::json to_json(const Body& K) {
    nlohmann::json j;
    j["dim"] = K.dim;
    j["max_degree"] = K.basis->max_degree;
    j["coeffs"] = std::vector<double>(K.coeffs.data(),
                                      K.coeffs.data() + K.coeffs.size());
    j["meta"] = {{"resolution", K.grid->resolution},
                 {"ordering", "degree ascending, order ascending"}};
    return j;
}

inline Body body_from_json(const nlohmann::json& j,
                           std::shared_ptr<const SphereGrid> grid = nullptr,
                           std::shared_ptr<const HarmonicBasis> basis = nullptr) {
    int dim = j.at("dim");
    int L = j.at("max_degree");
    if (!grid) grid = build_grid(dim, j.at("meta").at("resolution"));
    if (!basis) basis = build_basis(grid, L);
    std::vector<double> c = j.at("coeffs");
    if (static_cast<int>(c.size()) != basis->count)
        throw DimensionMismatch("body_from_json: coefficient count");
    Eigen::VectorXd coeffs =
        Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
    return body_from_coeffs(grid, basis, std::move(coeffs));
}

} // namespace hbm

#endif
