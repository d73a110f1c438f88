#include "amrc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace amrc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

// mt19937_64 is fully specified by the standard; distributions are not, so
// uniforms and normals are derived by hand to keep datasets bit-identical
// across toolchains.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    double uniform() {  // [0,1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double normal() {  // Box-Muller, one value per pair
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        have_spare_ = true;
        spare_ = r * std::sin(kTwoPi * u2);
        return r * std::cos(kTwoPi * u2);
    }

    int64_t below(int64_t n) { return static_cast<int64_t>(uniform() * static_cast<double>(n)); }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct CosMode {
    double kx, ky, kz, phase, amp;
};

std::vector<CosMode> draw_modes(Rng& rng, int count) {
    std::vector<CosMode> modes(count);
    for (int m = 0; m < count; ++m) {
        modes[m].kx = static_cast<double>(1 + rng.below(4));
        modes[m].ky = static_cast<double>(1 + rng.below(4));
        modes[m].kz = static_cast<double>(1 + rng.below(4));
        modes[m].phase = rng.uniform() * kTwoPi;
        modes[m].amp = 1.5 / (1.0 + m);
    }
    return modes;
}

// Trilinear sample of a grid at a fractional position (cell-center convention),
// clamped at the grid edges.
double trilinear(const std::vector<double>& g, const Int3& n, double fx, double fy, double fz) {
    auto clamp = [](int64_t v, int64_t hi) { return std::max<int64_t>(0, std::min(v, hi - 1)); };
    int64_t x0 = clamp(static_cast<int64_t>(std::floor(fx)), n.x);
    int64_t y0 = clamp(static_cast<int64_t>(std::floor(fy)), n.y);
    int64_t z0 = clamp(static_cast<int64_t>(std::floor(fz)), n.z);
    int64_t x1 = clamp(x0 + 1, n.x), y1 = clamp(y0 + 1, n.y), z1 = clamp(z0 + 1, n.z);
    double tx = std::clamp(fx - static_cast<double>(x0), 0.0, 1.0);
    double ty = std::clamp(fy - static_cast<double>(y0), 0.0, 1.0);
    double tz = std::clamp(fz - static_cast<double>(z0), 0.0, 1.0);
    auto at = [&](int64_t x, int64_t y, int64_t z) { return g[linear_index({x, y, z}, n)]; };
    double c00 = at(x0, y0, z0) * (1 - tx) + at(x1, y0, z0) * tx;
    double c10 = at(x0, y1, z0) * (1 - tx) + at(x1, y1, z0) * tx;
    double c01 = at(x0, y0, z1) * (1 - tx) + at(x1, y0, z1) * tx;
    double c11 = at(x0, y1, z1) * (1 - tx) + at(x1, y1, z1) * tx;
    double c0 = c00 * (1 - ty) + c10 * ty;
    double c1 = c01 * (1 - ty) + c11 * ty;
    return c0 * (1 - tz) + c1 * tz;
}

// Correlated noise: iid normals on a coarse lattice, trilinearly upsampled.
std::vector<double> correlated_noise(Rng& rng, const Int3& dims, int64_t lattice_step) {
    Int3 ln{std::max<int64_t>(2, dims.x / lattice_step), std::max<int64_t>(2, dims.y / lattice_step),
            std::max<int64_t>(2, dims.z / lattice_step)};
    std::vector<double> lattice(ln.product());
    for (auto& v : lattice) v = rng.normal();
    std::vector<double> out(dims.product());
    double sx = static_cast<double>(ln.x) / static_cast<double>(dims.x);
    double sy = static_cast<double>(ln.y) / static_cast<double>(dims.y);
    double sz = static_cast<double>(ln.z) / static_cast<double>(dims.z);
    for (int64_t z = 0; z < dims.z; ++z)
        for (int64_t y = 0; y < dims.y; ++y)
            for (int64_t x = 0; x < dims.x; ++x) {
                out[linear_index({x, y, z}, dims)] =
                    trilinear(lattice, ln, (x + 0.5) * sx - 0.5, (y + 0.5) * sy - 0.5, (z + 0.5) * sz - 0.5);
            }
    return out;
}

std::vector<double> level0_field(const SyntheticSpec& spec, Rng& rng) {
    auto modes = draw_modes(rng, 6);
    const Int3 n = spec.dims;
    std::vector<double> g(n.product());
    for (int64_t z = 0; z < n.z; ++z)
        for (int64_t y = 0; y < n.y; ++y)
            for (int64_t x = 0; x < n.x; ++x) {
                double fx = static_cast<double>(x) / static_cast<double>(n.x);
                double fy = static_cast<double>(y) / static_cast<double>(n.y);
                double fz = static_cast<double>(z) / static_cast<double>(n.z);
                double v = 0.0;
                for (const auto& m : modes)
                    v += m.amp * std::cos(kTwoPi * (m.kx * fx + m.ky * fy + m.kz * fz) + m.phase);
                g[linear_index({x, y, z}, n)] = v;
            }
    if (spec.preset == Preset::Rough) {
        auto noise = correlated_noise(rng, n, 4);
        for (size_t i = 0; i < g.size(); ++i) g[i] *= std::exp(0.6 * noise[i]);
    }
    return g;
}

double range_of(const std::vector<double>& g) {
    auto [lo, hi] = std::minmax_element(g.begin(), g.end());
    return *hi - *lo;
}

// Quantile of per-block maxima; the refinement criterion is "block max exceeds it".
double refine_cut(const std::vector<double>& block_maxima, double threshold) {
    if (threshold <= 0.0) return -std::numeric_limits<double>::infinity();
    if (threshold >= 1.0) return std::numeric_limits<double>::infinity();
    std::vector<double> sorted = block_maxima;
    std::sort(sorted.begin(), sorted.end());
    auto idx = static_cast<size_t>(std::floor(threshold * static_cast<double>(sorted.size() - 1)));
    return sorted[idx];
}

struct GridLevel {
    // one full grid per field over `box` (the level's covered region is a box union;
    // the generator keeps per-box grids)
    std::vector<AmrBox> boxes;
    std::vector<std::vector<std::vector<double>>> data;  // [field][box][cell]
};

}  // namespace

AmrDataset generate_synthetic(const SyntheticSpec& spec) {
    const int U = spec.unit_block_size;
    for (int d = 0; d < 3; ++d) {
        if (spec.dims[d] % U != 0) {
            throw DataError("generate_synthetic: dims " + spec.dims.str() +
                            " not divisible by unit block size " + std::to_string(U));
        }
    }
    if (spec.levels < 1 || spec.levels > 3) throw DataError("generate_synthetic: levels must be 1..3");
    if (spec.field_count < 1) throw DataError("generate_synthetic: field_count must be >= 1");

    AmrDataset ds;
    ds.domain = AmrBox{{0, 0, 0}, spec.dims};
    ds.unit_block_size = U;
    for (int f = 0; f < spec.field_count; ++f) ds.field_names.push_back("f" + std::to_string(f));

    // level-0 full grids, one per field
    std::vector<std::vector<double>> grids(spec.field_count);
    std::vector<double> ranges(spec.field_count);
    for (int f = 0; f < spec.field_count; ++f) {
        Rng rng(spec.seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(f) + 1);
        grids[f] = level0_field(spec, rng);
        ranges[f] = range_of(grids[f]);
    }

    // level 0: split the domain into boxes of edge 4U (clipped to the domain)
    AmrLevel l0;
    l0.index = 0;
    {
        int64_t edge = spec.max_box_edge > 0 ? spec.max_box_edge : 4LL * U;
        if (edge % U != 0) throw DataError("generate_synthetic: max_box_edge not a multiple of U");
        edge = std::min<int64_t>({edge, spec.dims.x, spec.dims.y, spec.dims.z});
        for (int64_t bz = 0; bz < spec.dims.z; bz += edge)
            for (int64_t by = 0; by < spec.dims.y; by += edge)
                for (int64_t bx = 0; bx < spec.dims.x; bx += edge) {
                    l0.boxes.push_back(AmrBox{{bx, by, bz},
                                              {std::min(bx + edge, spec.dims.x),
                                               std::min(by + edge, spec.dims.y),
                                               std::min(bz + edge, spec.dims.z)}});
                }
    }
    for (int f = 0; f < spec.field_count; ++f) {
        auto& arrays = l0.fields[ds.field_names[f]];
        for (const AmrBox& b : l0.boxes) {
            std::vector<double> arr(b.volume());
            Int3 sz = b.size();
            for (int64_t z = 0; z < sz.z; ++z)
                for (int64_t y = 0; y < sz.y; ++y)
                    for (int64_t x = 0; x < sz.x; ++x) {
                        arr[linear_index({x, y, z}, sz)] =
                            grids[f][linear_index({b.lo.x + x, b.lo.y + y, b.lo.z + z}, spec.dims)];
                    }
            arrays.push_back(std::move(arr));
        }
    }
    ds.levels.push_back(std::move(l0));

    // refine: parent level grids (per box) drive the next level
    for (int lvl = 1; lvl < spec.levels; ++lvl) {
        const AmrLevel& parent = ds.levels[lvl - 1];
        const int ratio = parent.refinement_ratio;

        // per-unit-block maxima of the first field across all parent boxes
        std::vector<double> maxima;
        std::vector<std::pair<size_t, Int3>> block_of;  // (box, block grid coord)
        for (size_t b = 0; b < parent.boxes.size(); ++b) {
            const AmrBox& box = parent.boxes[b];
            const auto& arr = parent.box_field(ds.field_names[0], b);
            Int3 sz = box.size();
            Int3 nb{sz.x / U, sz.y / U, sz.z / U};
            for (int64_t bz = 0; bz < nb.z; ++bz)
                for (int64_t by = 0; by < nb.y; ++by)
                    for (int64_t bx = 0; bx < nb.x; ++bx) {
                        double mx = -std::numeric_limits<double>::infinity();
                        for (int64_t z = bz * U; z < (bz + 1) * U; ++z)
                            for (int64_t y = by * U; y < (by + 1) * U; ++y)
                                for (int64_t x = bx * U; x < (bx + 1) * U; ++x)
                                    mx = std::max(mx, arr[linear_index({x, y, z}, sz)]);
                        maxima.push_back(mx);
                        block_of.emplace_back(b, Int3{bx, by, bz});
                    }
        }
        double cut = refine_cut(maxima, spec.refine_threshold);

        AmrLevel fine;
        fine.index = lvl;
        std::vector<std::pair<size_t, Int3>> refined;
        for (size_t i = 0; i < maxima.size(); ++i) {
            if (maxima[i] > cut) {
                auto [b, bc] = block_of[i];
                const AmrBox& pbox = parent.boxes[b];
                Int3 lo = pbox.lo + bc * U;
                AmrBox blk{lo, lo + Int3{U, U, U}};
                fine.boxes.push_back(refine(blk, ratio));
                refined.emplace_back(b, bc);
            }
        }
        if (fine.boxes.empty()) break;  // nothing qualified; dataset ends here

        Rng noise_rng(spec.seed * 0x2545f4914f6cdd1dULL + static_cast<uint64_t>(lvl));
        for (int f = 0; f < spec.field_count; ++f) {
            double noise_amp = (spec.preset == Preset::Smooth ? 0.003 : 0.02) * ranges[f];
            auto& arrays = fine.fields[ds.field_names[f]];
            for (size_t i = 0; i < fine.boxes.size(); ++i) {
                auto [pb, bc] = refined[i];
                const AmrBox& pbox = parent.boxes[pb];
                const auto& parr = parent.box_field(ds.field_names[f], pb);
                Int3 psz = pbox.size();
                const AmrBox& fbox = fine.boxes[i];
                Int3 fsz = fbox.size();
                std::vector<double> arr(fbox.volume());
                // correlated detail per box: lattice at the parent resolution of the block
                Int3 ln{U + 1, U + 1, U + 1};
                std::vector<double> lattice(ln.product());
                for (auto& v : lattice) v = noise_rng.normal();
                for (int64_t z = 0; z < fsz.z; ++z)
                    for (int64_t y = 0; y < fsz.y; ++y)
                        for (int64_t x = 0; x < fsz.x; ++x) {
                            // position in the parent box's local cell coordinates
                            double px = (static_cast<double>(fbox.lo.x + x) + 0.5) / ratio - 0.5 -
                                        static_cast<double>(pbox.lo.x);
                            double py = (static_cast<double>(fbox.lo.y + y) + 0.5) / ratio - 0.5 -
                                        static_cast<double>(pbox.lo.y);
                            double pz = (static_cast<double>(fbox.lo.z + z) + 0.5) / ratio - 0.5 -
                                        static_cast<double>(pbox.lo.z);
                            double base = trilinear(parr, psz, px, py, pz);
                            double nx = static_cast<double>(x) / ratio, ny = static_cast<double>(y) / ratio,
                                   nz = static_cast<double>(z) / ratio;
                            double detail = trilinear(lattice, ln, nx, ny, nz);
                            arr[linear_index({x, y, z}, fsz)] = base + noise_amp * detail;
                        }
                arrays.push_back(std::move(arr));
            }
        }
        ds.levels.push_back(std::move(fine));
    }

    ds.validate();
    return ds;
}

}  // namespace amrc
