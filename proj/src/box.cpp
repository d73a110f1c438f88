#include "amrc/box.hpp"

#include <algorithm>

namespace amrc {

std::optional<AmrBox> intersect(const AmrBox& a, const AmrBox& b) {
    AmrBox r;
    for (int d = 0; d < 3; ++d) {
        r.lo[d] = std::max(a.lo[d], b.lo[d]);
        r.hi[d] = std::min(a.hi[d], b.hi[d]);
        if (r.lo[d] >= r.hi[d]) return std::nullopt;
    }
    return r;
}

AmrBox coarsen(const AmrBox& b, int ratio) {
    for (int d = 0; d < 3; ++d) {
        if (b.lo[d] % ratio != 0 || b.hi[d] % ratio != 0) {
            throw DataError("coarsen: box " + b.str() + " extents not divisible by ratio " +
                            std::to_string(ratio));
        }
    }
    return AmrBox{{b.lo.x / ratio, b.lo.y / ratio, b.lo.z / ratio},
                  {b.hi.x / ratio, b.hi.y / ratio, b.hi.z / ratio}};
}

AmrBox refine(const AmrBox& b, int ratio) {
    return AmrBox{b.lo * ratio, b.hi * ratio};
}

std::optional<AmrBox> full_coarse_cover(const AmrBox& b, int ratio) {
    AmrBox r;
    for (int d = 0; d < 3; ++d) {
        r.lo[d] = ceil_div(b.lo[d], ratio);
        r.hi[d] = floor_div(b.hi[d], ratio);
        if (r.lo[d] >= r.hi[d]) return std::nullopt;
    }
    return r;
}

}  // namespace amrc
