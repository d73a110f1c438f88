#pragma once

#include <vector>

#include "amrc/quantize.hpp"
#include "amrc/types.hpp"

namespace amrc {

// Reconstruction scratch for one compression volume, padded with one layer of
// zeros on the low sides so first-plane/row/column neighbors read as 0.
class PaddedVolume {
public:
    explicit PaddedVolume(Int3 dims)
        : dims_(dims), sx_(dims.x + 1), sxy_((dims.x + 1) * (dims.y + 1)),
          v_(static_cast<size_t>((dims.x + 1) * (dims.y + 1) * (dims.z + 1)), 0.0) {}

    double get(int64_t i, int64_t j, int64_t k) const { return v_[idx(i, j, k)]; }
    void set(int64_t i, int64_t j, int64_t k, double val) { v_[idx(i, j, k)] = val; }
    Int3 dims() const { return dims_; }

private:
    size_t idx(int64_t i, int64_t j, int64_t k) const {
        return static_cast<size_t>((k + 1) * sxy_ + (j + 1) * sx_ + (i + 1));
    }
    Int3 dims_;
    int64_t sx_, sxy_;
    std::vector<double> v_;
};

// First-order 3D Lorenzo: the 7-term inclusion-exclusion stencil over
// previously reconstructed values; out-of-volume neighbors are 0.
inline double lorenzo_predict(const PaddedVolume& v, int64_t i, int64_t j, int64_t k) {
    return v.get(i - 1, j, k) + v.get(i, j - 1, k) + v.get(i, j, k - 1) -
           v.get(i - 1, j - 1, k) - v.get(i - 1, j, k - 1) - v.get(i, j - 1, k - 1) +
           v.get(i - 1, j - 1, k - 1);
}

struct RegCoeffs {
    double a = 0, b = 0, c = 0, d = 0;  // f ~ a*x + b*y + c*z + d over local coords
};

// Closed-form least squares over a (possibly clipped) block read from `data`
// with the given strides. Dimensions of extent 1 get a zero slope.
RegCoeffs regression_fit(const double* data, Int3 size, int64_t row_stride, int64_t slab_stride);

inline double regression_predict(const RegCoeffs& c, int64_t x, int64_t y, int64_t z) {
    return c.a * static_cast<double>(x) + c.b * static_cast<double>(y) +
           c.c * static_cast<double>(z) + c.d;
}

enum class Predictor : uint8_t { Lorenzo = 0, Regression = 1 };

// Residual-sum estimates used for predictor selection. Lorenzo residuals are
// evaluated against a causal context of reconstructed values outside the block
// and original values inside it; regression residuals use the dequantized
// coefficients. Ties go to Lorenzo.
struct SelectionEstimate {
    double lorenzo_abs_sum = 0;
    double regression_abs_sum = 0;
    Predictor choice() const {
        return regression_abs_sum < lorenzo_abs_sum ? Predictor::Regression : Predictor::Lorenzo;
    }
};

SelectionEstimate estimate_predictors(const double* data, Int3 size, int64_t row_stride,
                                      int64_t slab_stride, const PaddedVolume& recon, Int3 origin,
                                      const RegCoeffs& dequantized);

}  // namespace amrc
