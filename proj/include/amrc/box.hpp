#pragma once

#include <optional>

#include "amrc/types.hpp"

namespace amrc {

// Axis-aligned cell-index box; lo inclusive, hi exclusive.
struct AmrBox {
    Int3 lo, hi;

    bool valid() const { return lo.x < hi.x && lo.y < hi.y && lo.z < hi.z; }
    Int3 size() const { return hi - lo; }
    int64_t volume() const { return size().product(); }

    bool contains(const Int3& p) const {
        return p.x >= lo.x && p.x < hi.x && p.y >= lo.y && p.y < hi.y && p.z >= lo.z && p.z < hi.z;
    }
    bool contains(const AmrBox& b) const {
        return b.lo.x >= lo.x && b.hi.x <= hi.x && b.lo.y >= lo.y && b.hi.y <= hi.y &&
               b.lo.z >= lo.z && b.hi.z <= hi.z;
    }

    std::string str() const { return "[" + lo.str() + "," + hi.str() + ")"; }

    friend bool operator==(const AmrBox&, const AmrBox&) = default;
};

// Maximal box contained in both, or nullopt when the interiors are disjoint.
std::optional<AmrBox> intersect(const AmrBox& a, const AmrBox& b);

// lo/ratio, hi/ratio. Extents must divide; throws DataError otherwise.
AmrBox coarsen(const AmrBox& b, int ratio);

AmrBox refine(const AmrBox& b, int ratio);

// The box of coarse cells fully covered by b under the given ratio.
// Uses ceil(lo/ratio), floor(hi/ratio), so partially covered cells are excluded.
std::optional<AmrBox> full_coarse_cover(const AmrBox& b, int ratio);

}  // namespace amrc
