#ifndef HBM_MIXED_VOLUME_HPP
#define HBM_MIXED_VOLUME_HPP

// Mixed volumes of support-function differences via mixed discriminants,
// the V_K(f; m) shorthand, and the Minkowski second-inequality gap.
// Entries carry their covariant jets, so differentiation is shared with the
// rest of the library.

#include <vector>

#include "hbm/body.hpp"
#include "hbm/field.hpp"

namespace hbm {

struct MixedVolumeResult {
    double value = 0.0;     // symmetrized over entry permutations
    double asymmetry = 0.0; // max relative deviation between role assignments
};

// n = 2: (1/2) int f1 tr(D^2 f2); n = 3: (1/3) int f1 D(D^2 f2, D^2 f3) with
// the 2x2 mixed discriminant D(A,B) = (tr A tr B - tr(AB)) / 2.  The mixed
// discriminant is already symmetric, so only the choice of the undifferentiated
// slot matters; we average over it and report the spread.
inline MixedVolumeResult mixed_volume_full(const SphereGrid& grid,
                                           const std::vector<FieldJet>& entries) {
    const int n = grid.dim;
    if (static_cast<int>(entries.size()) != n)
        throw DimensionMismatch("mixed_volume: need n entries");

    std::vector<Eigen::MatrixXd> D2(n);
    for (int i = 0; i < n; ++i) D2[i] = d2_of(entries[i]);

    std::vector<double> vals;
    if (n == 2) {
        for (int a = 0; a < 2; ++a) {
            int b = 1 - a;
            Eigen::VectorXd integrand =
                entries[a].v.cwiseProduct(D2[b].col(0));
            vals.push_back(0.5 * integrate(integrand, grid));
        }
    } else {
        for (int a = 0; a < 3; ++a) {
            int b = (a + 1) % 3, c = (a + 2) % 3;
            // D(A,B) per node
            Eigen::ArrayXd trA = D2[b].col(0).array() + D2[b].col(2).array();
            Eigen::ArrayXd trB = D2[c].col(0).array() + D2[c].col(2).array();
            Eigen::ArrayXd trAB = D2[b].col(0).array() * D2[c].col(0).array() +
                                  2 * D2[b].col(1).array() * D2[c].col(1).array() +
                                  D2[b].col(2).array() * D2[c].col(2).array();
            Eigen::VectorXd integrand =
                entries[a].v.array() * 0.5 * (trA * trB - trAB);
            vals.push_back(integrate(integrand, grid) / 3.0);
        }
    }
    MixedVolumeResult r;
    for (double v : vals) r.value += v;
    r.value /= vals.size();
    double scale = std::abs(r.value);
    for (double v : vals) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    for (double v : vals)
        r.asymmetry = std::max(r.asymmetry, std::abs(v - r.value) / scale);
    return r;
}

inline double mixed_volume(const SphereGrid& grid,
                           const std::vector<FieldJet>& entries) {
    return mixed_volume_full(grid, entries).value;
}

// V_K(f; m) = V(f h_K [m], h_K [n-m]); for m = 1 this is int f dV_K.
inline double vk_mixed(const Body& K, const FieldJet& f, int m) {
    if (m < 1 || m > 2) throw Error("vk_mixed: m must be 1 or 2");
    std::vector<FieldJet> entries;
    FieldJet fh = multiply(f, K.hj);
    for (int i = 0; i < m; ++i) entries.push_back(fh);
    for (int i = m; i < K.dim; ++i) entries.push_back(K.hj);
    return mixed_volume(*K.grid, entries);
}

// V(L[1], K[n-1])^2 - V(L[2], K[n-2]) V(K); nonnegative by Minkowski's
// second inequality.
inline double minkowski2_gap(const Body& K, const Body& L) {
    if (K.dim != L.dim) throw DimensionMismatch("minkowski2_gap");
    const int n = K.dim;
    std::vector<FieldJet> e1, e2;
    e1.push_back(L.hj);
    for (int i = 1; i < n; ++i) e1.push_back(K.hj);
    e2.push_back(L.hj);
    e2.push_back(L.hj);
    for (int i = 2; i < n; ++i) e2.push_back(K.hj);
    double v1 = mixed_volume(*K.grid, e1);
    double v2 = mixed_volume(*K.grid, e2);
    return v1 * v1 - v2 * volume(K);
}

} // namespace hbm

#endif
