#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "linalg.hpp"
#include "matrix.hpp"

namespace grassdyn {

/**
 * An n-dimensional subspace of R^N held as an N x n frame with orthonormal
 * columns. Construction either trusts and checks an orthonormal frame or
 * orthonormalises an arbitrary spanning set.
 */
class Subspace {
public:
    static Subspace from_frame(Matrix frame) {
        check_shape(frame);
        const double defect =
            (frame.transpose() * frame - Matrix::identity(frame.cols())).norm_max();
        if (defect > 1e-10)
            throw invalid_input("Subspace: frame columns not orthonormal (defect " +
                                std::to_string(defect) + ")");
        return Subspace(std::move(frame));
    }

    /// Orthonormalises the given spanning columns; throws on rank deficiency.
    static Subspace span_of(const Matrix& spanning) {
        check_shape(spanning);
        return Subspace(orthonormalize(spanning, "Subspace::span_of"));
    }

    static Subspace span_of(const std::vector<Vec>& vectors) {
        return span_of(columns_to_matrix(vectors));
    }

    std::size_t ambient() const { return frame_.rows(); }
    std::size_t dim() const { return frame_.cols(); }
    const Matrix& frame() const { return frame_; }

private:
    explicit Subspace(Matrix frame) : frame_(std::move(frame)) {}

    static void check_shape(const Matrix& f) {
        f.validate("Subspace frame");
        if (f.cols() > f.rows())
            throw invalid_input("Subspace: dimension exceeds ambient dimension");
    }

    Matrix frame_;
};

/// Orthogonal complement, dimension N - n. Undefined (throws) for the full space.
inline Subspace complement(const Subspace& s) {
    const std::size_t n = s.ambient(), k = s.dim();
    if (k == n) throw invalid_input("complement: subspace is the whole space");
    const Matrix q = qr_full(s.frame()).q;
    Matrix c = q.block(0, k, n, n - k);
    return Subspace::from_frame(std::move(c));
}

struct GrassmannDistance {
    std::vector<double> principal_angles; // non-increasing, in [0, pi/2]
    double chordal = 0.0;                 // sqrt(sum sin^2 theta_k)
    double max_angle = 0.0;               // theta_1
};

/// Principal angles between equal-dimensional subspaces. Cosines come from
/// the singular values of frame(A)^T frame(B); small angles are recomputed
/// from the sine route (residual of projecting one frame onto the other),
/// which keeps them accurate near zero where arccos loses half the digits.
/// The chordal distance is taken from the orthogonal-projector difference,
/// ||P_A - P_B||_F / sqrt(2) = sqrt(sum sin^2 theta_k), whose operands are
/// literally negatives under argument swap, so symmetry holds bit for bit.
inline GrassmannDistance grassmann_distance(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw invalid_input("grassmann_distance: ambient mismatch");
    if (a.dim() != b.dim()) throw invalid_input("grassmann_distance: dimension mismatch");
    const Matrix cross = a.frame().transpose() * b.frame();
    const auto cosdec = svd(cross); // descending cosines = ascending angles
    Matrix residual = b.frame();
    for (std::size_t j = 0; j < residual.cols(); ++j)
        residual.set_col(j, project_out(a.frame(), residual.col(j)));
    auto sines = svd(residual).s; // descending sines = descending angles
    std::reverse(sines.begin(), sines.end());

    GrassmannDistance g;
    const std::size_t n = cosdec.s.size();
    g.principal_angles.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double c = std::clamp(cosdec.s[k], 0.0, 1.0);
        const double s = std::clamp(k < sines.size() ? sines[k] : 0.0, 0.0, 1.0);
        g.principal_angles[k] = (c * c > 0.5) ? std::asin(s) : std::acos(c);
    }
    std::sort(g.principal_angles.begin(), g.principal_angles.end(), std::greater<double>());
    g.max_angle = g.principal_angles.empty() ? 0.0 : g.principal_angles.front();

    const Matrix pa = a.frame() * a.frame().transpose();
    const Matrix pb = b.frame() * b.frame().transpose();
    g.chordal = (pa - pb).norm_fro() / std::sqrt(2.0);
    return g;
}

/// Euclidean distance from x to its orthogonal projection onto S.
inline double point_to_subspace_distance(const Vec& x, const Subspace& s) {
    if (x.size() != s.ambient())
        throw invalid_input("point_to_subspace_distance: dimension mismatch");
    return norm2(project_out(s.frame(), x));
}

} // namespace grassdyn
