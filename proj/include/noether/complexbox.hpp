#pragma once

#include <vector>

#include "noether/bigfloat.hpp"

namespace noether {

// Closed polydisc in C^n: product of discs |z_k - center_k| <= radius_k.
// All domains in this library are boxes of this shape; they are convex, so
// straight-line continuation between any two interior points stays inside.
struct ComplexBox {
    std::vector<BigComplex> center;
    std::vector<BigFloat> radius;

    ComplexBox() = default;
    ComplexBox(std::vector<BigComplex> c, std::vector<BigFloat> r);

    size_t dim() const { return center.size(); }

    bool contains(const std::vector<BigComplex>& p, const BigFloat& slack = BigFloat(0)) const;

    // additive margin on every radius
    ComplexBox inflated(const BigFloat& margin) const;
    // multiplicative shrink toward the center, factor in (0,1]
    ComplexBox scaled(const BigFloat& factor) const;

    // Deterministic low-discrepancy point on the distinguished boundary
    // (every coordinate on its bounding circle). Sequences are nested:
    // the first g points of a finer grid contain the coarser grid.
    std::vector<BigComplex> boundary_sample(size_t index) const;
    // Interior sample: radial factor < 1 on each coordinate.
    std::vector<BigComplex> interior_sample(size_t index) const;

    bool operator==(const ComplexBox& o) const;
};

// angle of the k-th sample of an irrational rotation on coordinate `coord`;
// shared by boundary sampling and circle sweeps that need nested refinement
BigFloat rotation_angle(size_t index, size_t coord, long prec);

} // namespace noether
