#pragma once

#include <cmath>
#include <vector>

#include "blocks.hpp"
#include "matrix.hpp"

namespace grassdyn {

/// One chi slice: a single coordinate when the owning block is classical,
/// a coordinate pair when it is real.
struct BiComponent {
    double a = 0.0;
    double b = 0.0;
    int width = 1;

    double norm() const { return width == 1 ? std::fabs(a) : std::sqrt(a * a + b * b); }
};

/**
 * Index bookkeeping for the chi decomposition of vectors relative to a block
 * structure: position i in 1..rho selects one coordinate (classical owner) or
 * one coordinate pair (real owner). The owning block p is the unique block
 * with sum_(l<p) rho_l < i <= sum_(l<=p) rho_l; the coordinate offset skips
 * tau_l * rho_l ambient coordinates per earlier block.
 */
class ChiView {
public:
    struct Slice {
        std::size_t offset; // 0-based ambient coordinate
        int width;          // 1 or 2
        int block;          // owning block, 0-based
    };

    static ChiView of(const std::vector<BlockSpec>& blocks) {
        if (blocks.empty()) throw invalid_input("ChiView: empty block list");
        ChiView v;
        std::size_t off = 0;
        for (std::size_t p = 0; p < blocks.size(); ++p) {
            blocks[p].validate();
            const int w = blocks[p].tau();
            for (int r = 0; r < blocks[p].rho; ++r) {
                v.slices_.push_back({off, w, static_cast<int>(p)});
                off += static_cast<std::size_t>(w);
            }
        }
        v.ambient_ = off;
        return v;
    }

    int rho() const { return static_cast<int>(slices_.size()); }
    std::size_t ambient() const { return ambient_; }

    /// Slice for chi_i, i in 1..rho.
    const Slice& slice(int i) const {
        if (i < 1 || i > rho()) throw invalid_input("ChiView: index out of range");
        return slices_[static_cast<std::size_t>(i - 1)];
    }

private:
    std::vector<Slice> slices_;
    std::size_t ambient_ = 0;
};

inline BiComponent chi(const Vec& x, int i, const ChiView& view) {
    if (x.size() != view.ambient()) throw invalid_input("chi: vector length mismatch");
    const auto& s = view.slice(i);
    BiComponent c;
    c.width = s.width;
    c.a = x[s.offset];
    if (s.width == 2) c.b = x[s.offset + 1];
    return c;
}

} // namespace grassdyn
