#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "chi.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "subspace.hpp"

namespace grassdyn {

/// A rank decision that landed close to the threshold; recorded so callers
/// can see which reductions were numerically delicate.
struct NearThresholdEvent {
    int step = 0;       // reduction step i (slice rho - i)
    double ratio = 0.0; // decided quantity over threshold
};

/**
 * The staircase basis produced by the reduction: vectors y^1..y^m, the pivot
 * counter sequence kappa_0..kappa_rho and per-step Lambda span dimensions.
 * kappa values are 1-based vector indices, kappa_0 = 1 and, for a genuine
 * basis, kappa_rho = m + 1.
 */
struct ReducedBasis {
    std::vector<Vec> vectors;
    std::vector<int> kappa;       // rho + 1 entries
    std::vector<int> lambda_dims; // rho entries, each 0, 1 or 2
    std::vector<NearThresholdEvent> near_threshold;
};

/**
 * Basis reduction against a block structure.
 *
 * Step i (i = 0..rho-1) looks at the chi_(rho-i) components of the not yet
 * placed vectors, measures the dimension of their span (0, 1 or 2), pivots
 * accordingly and eliminates the component from the remaining vectors:
 *
 *   dim 0: nothing to do;
 *   dim 1: the vector with the largest component becomes the pivot, scaled
 *          so its component has norm 1;
 *   dim 2: two pivots, combined so their components are exactly (0,1) and
 *          (1,0) in that order.
 *
 * Rank decisions compare against tol times the largest chi component in the
 * current trailing set; decisions within a factor 10 of the threshold are
 * logged. The input must be linearly independent (smallest singular value of
 * the column matrix above tol).
 */
inline ReducedBasis reduce(const ChiView& view, const std::vector<Vec>& basis,
                           double tol = 1e-10) {
    const int rho = view.rho();
    const std::size_t m = basis.size();
    ReducedBasis out;
    out.kappa.assign(static_cast<std::size_t>(rho) + 1, 1);
    out.lambda_dims.assign(static_cast<std::size_t>(rho), 0);
    if (m == 0) return out; // degenerate but harmless: kappa stays 1
    if (m > view.ambient()) throw invalid_input("reduce: more vectors than ambient dimension");
    for (const auto& v : basis)
        if (v.size() != view.ambient()) throw invalid_input("reduce: vector length mismatch");

    {
        const auto dec = svd(columns_to_matrix(basis));
        if (dec.s.back() <= tol)
            throw rank_deficiency("reduce: basis numerically dependent (sigma_min " +
                                  std::to_string(dec.s.back()) + ")");
    }

    out.vectors = basis;
    auto& y = out.vectors;

    auto log_near = [&](int step, double value, double threshold) {
        if (threshold <= 0.0) return;
        const double ratio = value / threshold;
        if (ratio > 0.1 && ratio < 10.0) out.near_threshold.push_back({step, ratio});
    };

    for (int i = 0; i < rho; ++i) {
        const int slice_index = rho - i;
        const int k0 = out.kappa[i] - 1; // first trailing vector, 0-based
        const int trailing = static_cast<int>(m) - k0;
        if (trailing <= 0) {
            out.kappa[i + 1] = out.kappa[i];
            continue;
        }
        const int width = view.slice(slice_index).width;

        double vec_scale = 0.0;
        for (const auto& v : y) vec_scale = std::max(vec_scale, norm2(v));
        std::vector<BiComponent> comps(trailing);
        double comp_scale = 0.0;
        for (int t = 0; t < trailing; ++t) {
            comps[t] = chi(y[k0 + t], slice_index, view);
            comp_scale = std::max(comp_scale, comps[t].norm());
        }

        const double zero_floor = tol * std::max(vec_scale, 1e-300);
        log_near(i, comp_scale, zero_floor);
        if (comp_scale <= zero_floor) {
            out.kappa[i + 1] = out.kappa[i];
            continue;
        }

        int dim = 1;
        if (width == 2) {
            Matrix c(2, trailing);
            for (int t = 0; t < trailing; ++t) {
                c(0, t) = comps[t].a;
                c(1, t) = comps[t].b;
            }
            const auto dec = svd(c);
            const double sigma2 = dec.s.size() > 1 ? dec.s[1] : 0.0;
            log_near(i, sigma2, tol * comp_scale);
            if (sigma2 > tol * comp_scale) dim = 2;
        }

        if (dim == 1) {
            int pivot = 0;
            for (int t = 1; t < trailing; ++t)
                if (comps[t].norm() > comps[pivot].norm()) pivot = t;
            std::swap(y[k0], y[k0 + pivot]);
            std::swap(comps[0], comps[pivot]);
            if (width == 1) {
                const double c = comps[0].a;
                y[k0] = scaled(y[k0], 1.0 / c); // pivot component becomes exactly 1
                for (int t = 1; t < trailing; ++t) axpy(-comps[t].a, y[k0], y[k0 + t]);
            } else {
                const double nn = comps[0].norm();
                y[k0] = scaled(y[k0], 1.0 / nn);
                const double ca = comps[0].a / nn, cb = comps[0].b / nn;
                for (int t = 1; t < trailing; ++t)
                    axpy(-(comps[t].a * ca + comps[t].b * cb), y[k0], y[k0 + t]);
            }
            out.lambda_dims[i] = 1;
            out.kappa[i + 1] = out.kappa[i] + 1;
        } else {
            // two pivots: largest component, then largest residual against it
            int p1 = 0;
            for (int t = 1; t < trailing; ++t)
                if (comps[t].norm() > comps[p1].norm()) p1 = t;
            const double n1 = comps[p1].norm();
            const double u1a = comps[p1].a / n1, u1b = comps[p1].b / n1;
            int p2 = -1;
            double best = -1.0;
            for (int t = 0; t < trailing; ++t) {
                if (t == p1) continue;
                const double proj = comps[t].a * u1a + comps[t].b * u1b;
                const double ra = comps[t].a - proj * u1a, rb = comps[t].b - proj * u1b;
                const double rn = std::sqrt(ra * ra + rb * rb);
                if (rn > best) {
                    best = rn;
                    p2 = t;
                }
            }
            std::swap(y[k0], y[k0 + p1]);
            std::swap(comps[0], comps[p1]);
            if (p2 == 0) p2 = p1; // the old position-0 component moved to slot p1
            std::swap(y[k0 + 1], y[k0 + p2]);
            std::swap(comps[1], comps[p2]);

            // solve the 2x2 system so the first pivot maps to (0,1), the
            // second to (1,0)
            const double det = comps[0].a * comps[1].b - comps[0].b * comps[1].a;
            const Vec v1 = y[k0], v2 = y[k0 + 1];
            auto combine = [&](double ta, double tb) {
                // coefficients alpha, beta with alpha*chi1 + beta*chi2 = (ta, tb)
                const double alpha = (ta * comps[1].b - tb * comps[1].a) / det;
                const double beta = (tb * comps[0].a - ta * comps[0].b) / det;
                Vec r = scaled(v1, alpha);
                axpy(beta, v2, r);
                return r;
            };
            y[k0] = combine(0.0, 1.0);
            y[k0 + 1] = combine(1.0, 0.0);
            for (int t = 2; t < trailing; ++t) {
                axpy(-comps[t].b, y[k0], y[k0 + t]);
                axpy(-comps[t].a, y[k0 + 1], y[k0 + t]);
            }
            out.lambda_dims[i] = 2;
            out.kappa[i + 1] = out.kappa[i] + 2;
        }
    }
    return out;
}

/// Outcome of checking a ReducedBasis against the staircase properties.
struct ReductionReport {
    bool kappa_boundary_ok = false;   // kappa_0 = 1 and kappa_rho = m+1
    bool kappa_steps_ok = false;      // kappa_{i+1} = kappa_i + dim span(Lambda_i), recomputed
    bool pivot_independence_ok = false; // each pivot set is empty or independent
    bool staircase_ok = false;        // chi_(rho-p+1)(y^j) = 0 for j >= kappa_p
    bool span_ok = false;             // span{y} = span{original}
    double worst_staircase_residual = 0.0;
    double worst_span_angle = 0.0;
    bool pass = false;
};

/**
 * Recomputes every staircase property of a reduction from scratch: the kappa
 * boundary values, the per-step Lambda dimensions against the recorded ones,
 * independence of each pivot set, the nullity below the staircase, and span
 * preservation against the original basis (principal angle below 1e-8).
 */
inline ReductionReport verify_reduction(const ReducedBasis& rb, const ChiView& view,
                                        const std::vector<Vec>& original, double tol = 1e-8) {
    const int rho = view.rho();
    const std::size_t m = rb.vectors.size();
    ReductionReport rep;
    if (rb.kappa.size() != static_cast<std::size_t>(rho) + 1 ||
        rb.lambda_dims.size() != static_cast<std::size_t>(rho))
        throw invalid_input("verify_reduction: kappa/lambda sizes inconsistent with structure");

    rep.kappa_boundary_ok =
        rb.kappa.front() == 1 && rb.kappa.back() == static_cast<int>(m) + 1;

    double vec_scale = 1e-300;
    for (const auto& v : rb.vectors) vec_scale = std::max(vec_scale, norm2(v));

    rep.kappa_steps_ok = true;
    rep.pivot_independence_ok = true;
    for (int i = 0; i < rho; ++i) {
        const int slice_index = rho - i;
        const int k0 = rb.kappa[i] - 1;
        const int trailing = static_cast<int>(m) - k0;
        // recompute dim span of the Lambda_i set
        int dim = 0;
        if (trailing > 0) {
            double comp_scale = 0.0;
            Matrix c(2, trailing);
            for (int t = 0; t < trailing; ++t) {
                const auto bc = chi(rb.vectors[k0 + t], slice_index, view);
                c(0, t) = bc.a;
                c(1, t) = bc.width == 2 ? bc.b : 0.0;
                comp_scale = std::max(comp_scale, bc.norm());
            }
            if (comp_scale > tol * vec_scale) {
                dim = 1;
                const auto dec = svd(c);
                if (dec.s.size() > 1 && dec.s[1] > tol * comp_scale) dim = 2;
            }
        }
        if (rb.lambda_dims[i] != dim || rb.kappa[i + 1] != rb.kappa[i] + rb.lambda_dims[i])
            rep.kappa_steps_ok = false;

        // pivot set independence: the components of vectors kappa_i..kappa_{i+1}-1
        const int npiv = rb.kappa[i + 1] - rb.kappa[i];
        if (npiv > trailing || npiv > 2 || k0 < 0) {
            rep.kappa_steps_ok = false;
            continue;
        }
        if (npiv > 0) {
            Matrix c(2, npiv);
            double pscale = 0.0;
            for (int t = 0; t < npiv; ++t) {
                const auto bc = chi(rb.vectors[k0 + t], slice_index, view);
                c(0, t) = bc.a;
                c(1, t) = bc.width == 2 ? bc.b : 0.0;
                pscale = std::max(pscale, bc.norm());
            }
            const auto dec = svd(c);
            if (dec.s[std::min<std::size_t>(npiv, 2) - 1] <= tol * std::max(pscale, 1e-300))
                rep.pivot_independence_ok = false;
        }
    }

    rep.staircase_ok = true;
    for (int p = 1; p <= rho; ++p) {
        for (int j = rb.kappa[p] - 1; j < static_cast<int>(m); ++j) {
            const double r = chi(rb.vectors[j], rho - p + 1, view).norm();
            rep.worst_staircase_residual = std::max(rep.worst_staircase_residual, r / vec_scale);
        }
    }
    rep.staircase_ok = rep.worst_staircase_residual <= tol;

    if (m == 0) {
        rep.span_ok = original.empty();
    } else if (original.size() != m) {
        rep.span_ok = false;
    } else {
        const auto a = Subspace::span_of(original);
        const auto b = Subspace::span_of(rb.vectors);
        rep.worst_span_angle = grassmann_distance(a, b).max_angle;
        rep.span_ok = rep.worst_span_angle < 1e-8;
    }

    rep.pass = rep.kappa_boundary_ok && rep.kappa_steps_ok && rep.pivot_independence_ok &&
               rep.staircase_ok && rep.span_ok;
    return rep;
}

} // namespace grassdyn
