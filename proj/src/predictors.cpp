#include "amrc/predictors.hpp"

#include <cmath>

namespace amrc {

RegCoeffs regression_fit(const double* data, Int3 size, int64_t row_stride, int64_t slab_stride) {
    const int64_t nx = size.x, ny = size.y, nz = size.z;
    const double n = static_cast<double>(nx * ny * nz);

    double f = 0, fx = 0, fy = 0, fz = 0;
    for (int64_t z = 0; z < nz; ++z)
        for (int64_t y = 0; y < ny; ++y) {
            const double* row = data + z * slab_stride + y * row_stride;
            for (int64_t x = 0; x < nx; ++x) {
                double v = row[x];
                f += v;
                fx += v * static_cast<double>(x);
                fy += v * static_cast<double>(y);
                fz += v * static_cast<double>(z);
            }
        }

    auto slope = [&](double moment, int64_t len, int64_t others) {
        if (len <= 1) return 0.0;
        double mean_coord = static_cast<double>(len - 1) / 2.0;
        // sum over the block of (coord - mean)^2
        double sxx = static_cast<double>(others) * static_cast<double>(len) *
                     (static_cast<double>(len) * static_cast<double>(len) - 1.0) / 12.0;
        return (moment - mean_coord * f) / sxx;
    };

    RegCoeffs c;
    c.a = slope(fx, nx, ny * nz);
    c.b = slope(fy, ny, nx * nz);
    c.c = slope(fz, nz, nx * ny);
    c.d = f / n - c.a * static_cast<double>(nx - 1) / 2.0 - c.b * static_cast<double>(ny - 1) / 2.0 -
          c.c * static_cast<double>(nz - 1) / 2.0;
    return c;
}

SelectionEstimate estimate_predictors(const double* data, Int3 size, int64_t row_stride,
                                      int64_t slab_stride, const PaddedVolume& recon, Int3 origin,
                                      const RegCoeffs& dequantized) {
    SelectionEstimate est;
    auto orig_at = [&](int64_t x, int64_t y, int64_t z) {
        return data[z * slab_stride + y * row_stride + x];
    };
    // causal neighbor: original value when inside this block, otherwise whatever
    // the reconstruction buffer holds (earlier blocks or the zero padding)
    auto ctx = [&](int64_t x, int64_t y, int64_t z) {
        if (x >= 0 && x < size.x && y >= 0 && y < size.y && z >= 0 && z < size.z)
            return orig_at(x, y, z);
        return recon.get(origin.x + x, origin.y + y, origin.z + z);
    };
    for (int64_t z = 0; z < size.z; ++z)
        for (int64_t y = 0; y < size.y; ++y)
            for (int64_t x = 0; x < size.x; ++x) {
                double v = orig_at(x, y, z);
                double lor = ctx(x - 1, y, z) + ctx(x, y - 1, z) + ctx(x, y, z - 1) -
                             ctx(x - 1, y - 1, z) - ctx(x - 1, y, z - 1) - ctx(x, y - 1, z - 1) +
                             ctx(x - 1, y - 1, z - 1);
                est.lorenzo_abs_sum += std::abs(v - lor);
                est.regression_abs_sum += std::abs(v - regression_predict(dequantized, x, y, z));
            }
    return est;
}

}  // namespace amrc
