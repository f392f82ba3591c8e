#ifndef HBM_MINKOWSKI_HPP
#define HBM_MINKOWSKI_HPP

// The even L^p Minkowski problem as a variational problem: the objective
// F_{mu,p} and its log-form G_{mu,p}, first/second variations, Euler-Lagrange
// residuals, an L-BFGS descent over even log-h coefficients, and the
// non-uniqueness / critical-exponent / supercritical experiments.

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hbm/body.hpp"
#include "hbm/spectral.hpp"

namespace hbm {

// Even target measure mu = f m with per-node density f >= 0.
struct TargetMeasure {
    std::shared_ptr<const SphereGrid> grid;
    Eigen::VectorXd f;
    double total = 0.0;
};

inline TargetMeasure make_target(std::shared_ptr<const SphereGrid> grid,
                                 Eigen::VectorXd f) {
    if (f.size() != grid->node_count())
        throw DimensionMismatch("make_target: density size");
    double scale = f.cwiseAbs().maxCoeff();
    if (f.minCoeff() < -1e-12 * scale)
        throw Error("make_target: density must be nonnegative");
    TargetMeasure mu;
    mu.total = grid->weights.dot(f);
    if (mu.total <= 0.0) throw Error("make_target: total mass must be positive");
    // evenness via the grid's antipodal pairing
    for (int k = 0; k < grid->node_count(); ++k)
        if (std::abs(f[k] - f[grid->antipode[k]]) > 1e-10 * (1.0 + scale))
            throw Error("make_target: density is not even");
    // not concentrated on a hemisphere: int <theta,u>_+ f dm > 0
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 8 + grid->dim; ++t) {
        Eigen::VectorXd u(grid->dim);
        if (t < grid->dim)
            u = Eigen::VectorXd::Unit(grid->dim, t);
        else {
            for (int i = 0; i < grid->dim; ++i) u[i] = gauss(rng);
            u.normalize();
        }
        Eigen::VectorXd pos = (grid->nodes * u).cwiseMax(0.0);
        if (grid->weights.dot(pos.cwiseProduct(f)) <= 1e-12 * mu.total)
            throw Error("make_target: density concentrated on a hemisphere");
    }
    mu.grid = grid;
    mu.f = std::move(f);
    return mu;
}

inline TargetMeasure uniform_target(std::shared_ptr<const SphereGrid> grid) {
    return make_target(grid, Eigen::VectorXd::Ones(grid->node_count()));
}

inline TargetMeasure target_from_spk(const Body& K, double p) {
    return make_target(K.grid, K.spk_density(p));
}

// F_{mu,p}(K) = (1/p) int h^p dmu / V^{p/n} for p != 0; the p = 0 limit is
// reported in log form: G_{mu,0}(K) = int log h dmu~ - (1/n) log V.
inline double functional(const Body& K, const TargetMeasure& mu, double p) {
    if (K.grid != mu.grid)
        throw DimensionMismatch("functional: body and measure grids differ");
    double V = volume(K);
    if (p == 0.0) {
        double I = K.grid->weights.dot(
            Eigen::VectorXd(K.hj.v.array().log().matrix()).cwiseProduct(mu.f));
        return I / mu.total - std::log(V) / K.dim;
    }
    double I = K.grid->weights.dot(
        Eigen::VectorXd(K.hj.v.array().pow(p).matrix()).cwiseProduct(mu.f));
    return I / (p * std::pow(V, p / K.dim));
}

// Density g (w.r.t. m) of the first variation of G_{mu,p} at K under
// h -> h(1 + t z):  d/dt G = int z g dm.
inline Eigen::VectorXd first_variation(const Body& K, const TargetMeasure& mu,
                                       double p) {
    if (K.grid != mu.grid)
        throw DimensionMismatch("first_variation: grids differ");
    Eigen::VectorXd vk = K.vk_density();
    double V = K.grid->weights.dot(vk);
    if (p == 0.0) return mu.f / mu.total - vk / V;
    Eigen::VectorXd hp = K.hj.v.array().pow(p).matrix().cwiseProduct(mu.f);
    double Ip = K.grid->weights.dot(hp);
    return p * (hp / Ip - vk / V);
}

// Second variation of G_{S_pK, p} at K in direction z (h -> h(1+tz)):
// (V/p) d2 G = int (-Delta_K z) z dV_K - (n-p) (int z^2 dV - (int z dV)^2/V).
// For p = 0 the reported value is the limit slope (1/V)[E - n Var].
inline double second_variation(const Body& K, double p, const FieldJet& z) {
    Eigen::VectorXd wv = K.grid->weights.cwiseProduct(K.vk_density());
    double V = wv.sum();
    double E = dirichlet_energy(K, z);
    double m = wv.dot(z.v);
    double var = wv.dot(z.v.cwiseProduct(z.v)) - m * m / V;
    double slope = (E - (K.dim - p) * var) / V;
    return p == 0.0 ? slope : p * slope;
}

struct ElResidual {
    double residual = 0.0; // (1/2) L^1 distance of normalized densities
    double c = 0.0;        // total(S_p K) / total(mu)
};

inline ElResidual el_residual(const Body& K, const TargetMeasure& mu,
                              double p) {
    if (K.grid != mu.grid)
        throw DimensionMismatch("el_residual: grids differ");
    Eigen::VectorXd spk = K.spk_density(p);
    double ts = K.grid->weights.dot(spk);
    ElResidual r;
    r.c = ts / mu.total;
    r.residual = 0.5 * K.grid->weights.dot(
                           (spk / ts - mu.f / mu.total).cwiseAbs());
    return r;
}

enum class SolveStatus { Converged, MaxIterations, FloorLimited };

struct SolveReport {
    Body body;            // harmonic projection of the iterate (see body_valid)
    bool body_valid = false; // false when the projection rings below the floor
    Eigen::VectorXd h_values; // the iterate's support values at the nodes
    double p = 0.0;
    double c = 0.0;           // Euler-Lagrange constant
    double el_residual = 0.0; // against mu, on the solver's own iterate
    double el_residual_body = 0.0; // after harmonic projection into `body`
    std::vector<double> objective_trace;
    double dG = 0.0; // geometric distance of the solution to a ball
    double grad_norm = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::MaxIterations;
};

struct SolveOptions {
    int max_iter = 600;
    double grad_tol = 1e-8; // infinity norm over even log-h coefficients
    double el_tol = 1e-5;
    int memory = 10;
    double min_step = 1e-14;
    bool require_convergence = true;
    // Interior-point continuation: descend J - tau * avg log det(D^2 h) for
    // each tau in order, then finish with the plain objective (tau = 0).
    std::vector<double> barrier;
};

namespace detail {

// Even-column slices of the basis tables, shared by objective and gradient.
struct SolveTables {
    std::shared_ptr<const SphereGrid> grid;
    std::shared_ptr<const HarmonicBasis> basis;
    std::vector<int> idx;
    Eigen::MatrixXd Y, G1, G2, H11, H12, H22;
    int const_col = -1;
    double c0 = 0.0; // value of the constant basis function
};

inline SolveTables make_tables(std::shared_ptr<const SphereGrid> grid,
                               std::shared_ptr<const HarmonicBasis> basis) {
    SolveTables t;
    t.grid = grid;
    t.basis = basis;
    t.idx = basis->even_indices();
    const int N = grid->node_count(), A = static_cast<int>(t.idx.size());
    const int d = grid->tangent_dim();
    t.Y.resize(N, A);
    t.G1.resize(N, A);
    t.H11.resize(N, A);
    if (d == 2) {
        t.G2.resize(N, A);
        t.H12.resize(N, A);
        t.H22.resize(N, A);
    }
    for (int a = 0; a < A; ++a) {
        int b = t.idx[a];
        t.Y.col(a) = basis->val.col(b);
        t.G1.col(a) = basis->g1.col(b);
        t.H11.col(a) = basis->h11.col(b);
        if (d == 2) {
            t.G2.col(a) = basis->g2.col(b);
            t.H12.col(a) = basis->h12.col(b);
            t.H22.col(a) = basis->h22.col(b);
        }
        if (basis->degree[b] == 0) {
            t.const_col = a;
            t.c0 = basis->val(0, b);
        }
    }
    return t;
}

// Full jet evaluation of h = exp(sum_a x_a phi_a) plus the derived surfaces.
struct SolveState {
    FieldJet h;
    Eigen::MatrixXd D2, B; // components of D^2 h and its inverse
    Eigen::VectorXd det;
    Eigen::VectorXd vk;
    double V = 0.0;
    bool feasible = false;
};

inline SolveState eval_state(const SolveTables& t, const Eigen::VectorXd& x) {
    SolveState st;
    const int d = t.grid->tangent_dim();
    FieldJet s;
    s.v = t.Y * x;
    s.g.resize(s.v.size(), d);
    s.g.col(0) = t.G1 * x;
    s.H.resize(s.v.size(), d == 1 ? 1 : 3);
    s.H.col(0) = t.H11 * x;
    if (d == 2) {
        s.g.col(1) = t.G2 * x;
        s.H.col(1) = t.H12 * x;
        s.H.col(2) = t.H22 * x;
    }
    st.h = exp_field(s);
    st.D2 = d2_of(st.h);
    st.det = det_comp(st.D2);
    Eigen::VectorXd mineig = min_eig_comp(st.D2);
    double mean = trace_comp(st.D2).mean() / d;
    st.feasible = mean > 0.0 && mineig.minCoeff() > 1e-8 * mean;
    if (!st.feasible) return st;
    st.B.resize(st.D2.rows(), st.D2.cols());
    if (d == 1) {
        st.B.col(0) = st.D2.col(0).cwiseInverse();
    } else {
        st.B.col(0) = st.D2.col(2).cwiseQuotient(st.det);
        st.B.col(1) = -st.D2.col(1).cwiseQuotient(st.det);
        st.B.col(2) = st.D2.col(0).cwiseQuotient(st.det);
    }
    st.vk = (1.0 / t.grid->dim) * st.h.v.cwiseProduct(st.det);
    st.V = t.grid->weights.dot(st.vk);
    return st;
}

// dV/dx_a = (1/n) int det(D^2h) h [n phi_a + h tr(B D^2 phi_a)
//                                  + 2 (B grad h) . grad phi_a] dm
inline Eigen::VectorXd grad_volume(const SolveTables& t, const SolveState& st) {
    const int n = t.grid->dim, d = t.grid->tangent_dim();
    Eigen::VectorXd q = t.grid->weights.cwiseProduct(st.det).cwiseProduct(st.h.v);
    Eigen::VectorXd qh = q.cwiseProduct(st.h.v);
    Eigen::VectorXd g = double(n) * (t.Y.transpose() * q);
    if (d == 1) {
        g += t.H11.transpose() * qh.cwiseProduct(st.B.col(0));
        g += 2.0 * (t.G1.transpose() *
                    q.cwiseProduct(st.B.col(0)).cwiseProduct(st.h.g.col(0)));
    } else {
        g += t.H11.transpose() * qh.cwiseProduct(st.B.col(0));
        g += 2.0 * (t.H12.transpose() * qh.cwiseProduct(st.B.col(1)));
        g += t.H22.transpose() * qh.cwiseProduct(st.B.col(2));
        Eigen::VectorXd bg1 = st.B.col(0).cwiseProduct(st.h.g.col(0)) +
                              st.B.col(1).cwiseProduct(st.h.g.col(1));
        Eigen::VectorXd bg2 = st.B.col(1).cwiseProduct(st.h.g.col(0)) +
                              st.B.col(2).cwiseProduct(st.h.g.col(1));
        g += 2.0 * (t.G1.transpose() * q.cwiseProduct(bg1));
        g += 2.0 * (t.G2.transpose() * q.cwiseProduct(bg2));
    }
    return g / n;
}

// Objective J = sign(p) G_{mu,p} (p != 0) or G_{mu,0}, with its gradient
// over the even log-h coefficients; optionally augmented by the interior
// log-det barrier -tau * avg log det(D^2 h), used for continuation when the
// descent path grazes the convexity boundary.
inline double objective(const SolveTables& t, const SolveState& st,
                        const TargetMeasure& mu, double p,
                        Eigen::VectorXd* grad = nullptr, double tau = 0.0) {
    const int n = t.grid->dim;
    double J;
    Eigen::VectorXd g;
    if (p == 0.0) {
        double I = t.grid->weights.dot(Eigen::VectorXd(
            st.h.v.array().log().matrix()).cwiseProduct(mu.f));
        J = I / mu.total - std::log(st.V) / n;
        if (grad)
            g = (t.Y.transpose() * t.grid->weights.cwiseProduct(mu.f)) /
                    mu.total -
                grad_volume(t, st) / (n * st.V);
    } else {
        Eigen::VectorXd hp =
            st.h.v.array().pow(p).matrix().cwiseProduct(mu.f);
        double Ip = t.grid->weights.dot(hp);
        double G = std::log(Ip) - (p / n) * std::log(st.V);
        double sgn = p > 0 ? 1.0 : -1.0;
        J = sgn * G;
        if (grad)
            g = sgn * (p * (t.Y.transpose() * t.grid->weights.cwiseProduct(hp)) /
                           Ip -
                       (p / n) * grad_volume(t, st) / st.V);
    }
    if (tau > 0.0) {
        const int d = t.grid->tangent_dim();
        double W = t.grid->weights.sum();
        Eigen::VectorXd q2 = t.grid->weights / W;
        J -= tau * q2.dot(Eigen::VectorXd(st.det.array().log().matrix()));
        if (grad) {
            // d/dx_a avg log det = avg[ h tr(B D^2 phi_a) + d phi_a
            //                           + 2 (B grad h) . grad phi_a ]
            Eigen::VectorXd q2h = q2.cwiseProduct(st.h.v);
            Eigen::VectorXd gb = double(d) * (t.Y.transpose() * q2);
            if (d == 1) {
                gb += t.H11.transpose() * q2h.cwiseProduct(st.B.col(0));
                gb += 2.0 * (t.G1.transpose() *
                             q2.cwiseProduct(st.B.col(0))
                                 .cwiseProduct(st.h.g.col(0)));
            } else {
                gb += t.H11.transpose() * q2h.cwiseProduct(st.B.col(0));
                gb += 2.0 * (t.H12.transpose() * q2h.cwiseProduct(st.B.col(1)));
                gb += t.H22.transpose() * q2h.cwiseProduct(st.B.col(2));
                Eigen::VectorXd bg1 = st.B.col(0).cwiseProduct(st.h.g.col(0)) +
                                      st.B.col(1).cwiseProduct(st.h.g.col(1));
                Eigen::VectorXd bg2 = st.B.col(1).cwiseProduct(st.h.g.col(0)) +
                                      st.B.col(2).cwiseProduct(st.h.g.col(1));
                gb += 2.0 * (t.G1.transpose() * q2.cwiseProduct(bg1));
                gb += 2.0 * (t.G2.transpose() * q2.cwiseProduct(bg2));
            }
            g -= tau * gb;
        }
    }
    if (grad) *grad = g;
    return J;
}

} // namespace detail

// Quasi-Newton (L-BFGS + Armijo backtracking) descent of sign(p) G_{mu,p}
// over even coefficients of log h, volume-normalized after each step;
// infeasible steps (curvature floor) are rejected by the line search.
inline SolveReport solve(const TargetMeasure& mu, double p, const Body& init,
                         SolveOptions opts = {}) {
    if (p >= 1.0) throw PreconditionUnmet("solve: requires p < 1");
    if (init.grid != mu.grid)
        throw DimensionMismatch("solve: init and measure grids differ");
    auto t = detail::make_tables(init.grid, init.basis);
    const int A = static_cast<int>(t.idx.size());

    // start from the even projection of log h_init, volume-normalized
    Eigen::VectorXd x =
        t.Y.transpose() *
        t.grid->weights.cwiseProduct(
            Eigen::VectorXd(init.hj.v.array().log().matrix()));
    auto normalize = [&](Eigen::VectorXd& xc, const detail::SolveState& st) {
        xc[t.const_col] -= std::log(st.V) / (t.grid->dim * t.c0);
    };
    detail::SolveState st = detail::eval_state(t, x);
    if (!st.feasible)
        throw ConvexityBarrier("solve: initializer violates the curvature floor");
    normalize(x, st);
    st = detail::eval_state(t, x);

    std::vector<double> stages = opts.barrier;
    if (stages.empty() || stages.back() != 0.0) stages.push_back(0.0);

    Eigen::VectorXd grad;
    double J = 0.0;
    std::vector<Eigen::VectorXd> sk, yk;
    SolveReport rep;
    rep.p = p;
    rep.status = SolveStatus::MaxIterations;

    int it = 0; // total accepted-iteration count across stages
    for (double tau : stages) {
    sk.clear();
    yk.clear();
    J = detail::objective(t, st, mu, p, &grad, tau);
    if (rep.objective_trace.empty()) rep.objective_trace.push_back(J);
    for (int stage_it = 0; stage_it < opts.max_iter; ++stage_it, ++it) {
        if (grad.lpNorm<Eigen::Infinity>() < opts.grad_tol) break;

        // two-loop recursion
        Eigen::VectorXd d = -grad;
        const int m = static_cast<int>(sk.size());
        std::vector<double> alpha(m), rho(m);
        for (int i = m - 1; i >= 0; --i) {
            rho[i] = 1.0 / yk[i].dot(sk[i]);
            alpha[i] = rho[i] * sk[i].dot(d);
            d -= alpha[i] * yk[i];
        }
        if (m > 0)
            d *= sk.back().dot(yk.back()) / yk.back().squaredNorm();
        for (int i = 0; i < m; ++i) {
            double beta = rho[i] * yk[i].dot(d);
            d += (alpha[i] - beta) * sk[i];
        }
        double slope = grad.dot(d);
        bool is_sd = false;
        if (slope >= 0.0) { // fall back to steepest descent
            d = -grad;
            slope = -grad.squaredNorm();
            is_sd = true;
        }

        detail::SolveState stn;
        Eigen::VectorXd xn;
        double Jn = 0.0;
        bool accepted = false;
        bool floor_blocked = false;
        auto line_search = [&](const Eigen::VectorXd& dir, double sl) {
            double step = 1.0;
            while (step >= opts.min_step) {
                xn = x + step * dir;
                stn = detail::eval_state(t, xn);
                if (stn.feasible) {
                    Jn = detail::objective(t, stn, mu, p, nullptr, tau);
                    if (Jn <= J + 1e-4 * step * sl) {
                        accepted = true;
                        return;
                    }
                } else {
                    floor_blocked = true;
                }
                step *= 0.5;
            }
        };
        line_search(d, slope);
        if (!accepted && !is_sd) {
            // quasi-Newton direction blocked (often at the curvature floor):
            // retry along steepest descent with fresh memory
            sk.clear();
            yk.clear();
            line_search(-grad, -grad.squaredNorm());
        }
        if (!accepted) {
            if (floor_blocked && tau == 0.0)
                rep.status = SolveStatus::FloorLimited;
            break;
        }

        // Volume normalization is cosmetic (the objective is 0-homogeneous),
        // but the curvature-floor test is only scale-invariant up to rounding;
        // keep the rescale only if it stays feasible.
        Eigen::VectorXd xs = xn;
        normalize(xs, stn);
        detail::SolveState sts = detail::eval_state(t, xs);
        if (sts.feasible) {
            xn = xs;
            stn = std::move(sts);
        }
        Eigen::VectorXd gradn;
        Jn = detail::objective(t, stn, mu, p, &gradn, tau);

        Eigen::VectorXd s = xn - x, y = gradn - grad;
        if (y.dot(s) > 1e-12 * y.norm() * s.norm()) {
            sk.push_back(s);
            yk.push_back(y);
            if (static_cast<int>(sk.size()) > opts.memory) {
                sk.erase(sk.begin());
                yk.erase(yk.begin());
            }
        }
        x = xn;
        st = stn;
        J = Jn;
        grad = gradn;
        rep.objective_trace.push_back(J);
    }
    } // barrier stages

    rep.iterations = it;
    rep.grad_norm = grad.lpNorm<Eigen::Infinity>();
    // EL residual of the iterate itself (exact jets, no projection)
    Eigen::VectorXd spk =
        (st.h.v.array().pow(1.0 - p) * st.det.array()).matrix();
    double ts = t.grid->weights.dot(spk);
    rep.c = ts / mu.total;
    rep.el_residual =
        0.5 * t.grid->weights.dot((spk / ts - mu.f / mu.total).cwiseAbs());
    rep.h_values = st.h.v;
    rep.dG = st.h.v.maxCoeff() / st.h.v.minCoeff();
    try {
        // The iterate satisfies the floor, but its harmonic projection can
        // ring below it when the solution is too eccentric for max_degree;
        // in that case the report keeps the node values only.
        rep.body = body_from_values(t.grid, t.basis, st.h.v);
        rep.body_valid = true;
        rep.el_residual_body = el_residual(rep.body, mu, p).residual;
    } catch (const ConvexityFailure&) {
        rep.body_valid = false;
        rep.el_residual_body = std::numeric_limits<double>::quiet_NaN();
    }
    if (rep.status != SolveStatus::FloorLimited &&
        rep.grad_norm < opts.grad_tol && rep.el_residual < opts.el_tol)
        rep.status = SolveStatus::Converged;
    if (opts.require_convergence && rep.status != SolveStatus::Converged) {
        if (rep.status == SolveStatus::FloorLimited)
            throw ConvexityBarrier("solve: no feasible step above the floor");
        throw NoConvergence("solve: grad " + std::to_string(rep.grad_norm) +
                            ", el residual " +
                            std::to_string(rep.el_residual) + " after " +
                            std::to_string(it) + " iterations");
    }
    return rep;
}

struct NonUniquenessReport {
    double p = 0.0;
    double lambda1_even = 0.0;
    bool found = false;
    SolveReport witness;      // the run producing K2, when found
    double separation = 0.0;  // geometric distance between K2 and K1
    std::vector<SolveReport> runs;
};

// Cor-1.5-style experiment: mu = S_p K1 with lambda_{1,e}(K1) < n - p, so K1
// is not a local minimum; descent from biased initializers looks for a
// distinct critical body K2 with S_p K2 = c mu.
inline NonUniquenessReport nonuniqueness_experiment(const Body& K1, double p,
                                                    double sep_threshold = 1.05,
                                                    int n_inits = 8) {
    const int n = K1.dim;
    if (p <= -n)
        throw PreconditionUnmet("nonuniqueness_experiment: requires p > -n");
    auto spec = lambda1_even(K1);
    NonUniquenessReport rep;
    rep.p = p;
    rep.lambda1_even = spec.lambda1;
    if (!(spec.lambda1 < n - p))
        throw PreconditionUnmet(
            "nonuniqueness_experiment: lambda1_even = " +
            std::to_string(spec.lambda1) + " is not below n - p = " +
            std::to_string(n - p));
    TargetMeasure mu = target_from_spk(K1, p);
    SolveOptions opts;
    opts.require_convergence = false;

    const unsigned seeds[] = {4, 10, 14, 16, 28, 33, 57, 71};
    for (int i = 0; i < n_inits; ++i) {
        Body init = K1;
        bool ok = true;
        try {
            if (i == 0)
                init = make_ball(K1.grid, K1.basis);
            else
                init = make_random_even(K1.grid, K1.basis, seeds[i % 8],
                                        0.2);
        } catch (const ConvexityFailure&) {
            ok = false;
        }
        if (!ok) continue;
        SolveReport run;
        try {
            run = solve(mu, p, init, opts);
        } catch (const ConvexityBarrier&) {
            continue;
        }
        Eigen::VectorXd ratio = run.h_values.cwiseQuotient(K1.hj.v);
        double sep = ratio.maxCoeff() / ratio.minCoeff();
        bool good = run.status == SolveStatus::Converged &&
                    run.el_residual < opts.el_tol && sep > sep_threshold;
        if (good && (!rep.found || sep > rep.separation)) {
            rep.found = true;
            rep.witness = run;
            rep.separation = sep;
        }
        rep.runs.push_back(std::move(run));
    }
    return rep;
}

struct ScanRow {
    double p = 0.0;
    double dG = 0.0;
    double el_residual = 0.0;
    double lambda_even = 0.0;
    double objective = 0.0;
};

// Solve for each p (descending toward -n), warm-starting from the previous
// solution, and tabulate the d_G trend.
inline std::vector<ScanRow> critical_divergence_scan(
    const TargetMeasure& mu, const std::vector<double>& p_list,
    const Body& init, SolveOptions opts = {}) {
    const int n = mu.grid->dim;
    std::vector<ScanRow> rows;
    Body start = init;
    // Rows near p = -n stall at the discretization's EL-residual floor by
    // design (the continuum solutions diverge); report them rather than fail.
    opts.require_convergence = false;
    for (double p : p_list) {
        if (!(p > -n && p < 0))
            throw PreconditionUnmet(
                "critical_divergence_scan: p must lie in (-n, 0)");
        SolveReport rep = solve(mu, p, start, opts);
        ScanRow row;
        row.p = p;
        row.dG = rep.dG;
        row.el_residual = rep.el_residual;
        row.objective = rep.objective_trace.back();
        row.lambda_even = rep.body_valid
                              ? lambda1_even(rep.body).lambda1
                              : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
        if (rep.body_valid) start = rep.body;
    }
    return rows;
}

struct SupercriticalRow {
    double t = 0.0;       // family parameter (or index for body paths)
    double dG = 0.0;      // distance of the body to a ball
    double F = 0.0;       // F_{mu,p}
    double mahler = 0.0;  // V(K) V(K^polar)
};

// Evaluate F_{mu,p} along an explicit path of bodies (volume-invariant by
// 0-homogeneity); used for coercivity trends at p <= -n.
inline std::vector<SupercriticalRow> supercritical_diagnostic(
    const TargetMeasure& mu, double p, const std::vector<Body>& path) {
    std::vector<SupercriticalRow> rows;
    int i = 0;
    for (const Body& K : path) {
        SupercriticalRow r;
        r.t = ++i;
        r.dG = geometric_distance(K);
        r.F = functional(K, mu, p);
        r.mahler = volume(K) * polar_volume(K);
        rows.push_back(r);
    }
    return rows;
}

// Analytic ellipsoid family diag(t, 1/t[, 1]): h(u) = |A^T u| evaluated
// exactly on the quadrature grid, so arbitrarily eccentric ellipsoids are
// reachable without any harmonic truncation.  Against mu = m only.
inline std::vector<SupercriticalRow> supercritical_ellipsoid_table(
    const SphereGrid& grid, double p, const std::vector<double>& ts) {
    const int n = grid.dim;
    std::vector<SupercriticalRow> rows;
    for (double t : ts) {
        Eigen::VectorXd axes(n);
        axes[0] = t;
        axes[1] = 1.0 / t;
        if (n == 3) axes[2] = 1.0;
        Eigen::VectorXd h(grid.node_count());
        Eigen::VectorXd hpol(grid.node_count());
        for (int k = 0; k < grid.node_count(); ++k) {
            Eigen::VectorXd u = grid.nodes.row(k);
            h[k] = u.cwiseProduct(axes).norm();
            hpol[k] = u.cwiseQuotient(axes).norm();
        }
        // V = kappa_n det A; for diag(t, 1/t[, 1]) the det is 1
        double V = sphere_area(n) / n;
        double Ip;
        SupercriticalRow r;
        r.t = t;
        r.dG = t * t; // axis ratio of the family member
        if (p == 0.0) {
            Ip = grid.weights.dot(Eigen::VectorXd(h.array().log().matrix()));
            r.F = Ip / grid.weights.sum() - std::log(V) / n;
        } else {
            Ip = grid.weights.dot(Eigen::VectorXd(h.array().pow(p).matrix()));
            r.F = Ip / (p * std::pow(V, p / n));
        }
        double Vpol =
            grid.weights.dot(Eigen::VectorXd(hpol.array().pow(-n).matrix())) /
            n;
        r.mahler = V * Vpol;
        rows.push_back(r);
    }
    return rows;
}

} // namespace hbm

#endif
