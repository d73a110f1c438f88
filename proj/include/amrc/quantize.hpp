#pragma once

#include <cmath>
#include <cstdint>

namespace amrc {

// Linear quantizer over prediction residuals. Bins are 2*eb wide; codes are
// offset to the midpoint (capacity/2); code 0 is reserved for outliers whose
// exact bits are stored verbatim.
class Quantizer {
public:
    Quantizer(double eb, uint32_t capacity)
        : eb_(eb), recip_(0.5 / eb), radius_(capacity / 2), capacity_(capacity) {}

    // Returns the code and overwrites val with the reconstructed value so the
    // encoder's prediction chain matches the decoder. Returns 0 (outlier) when
    // the code would overflow or rounding would break the bound; val is then
    // left exact. Non-finite residuals always take the outlier path.
    uint32_t quantize(double& val, double pred) {
        double scaled = (val - pred) * recip_;
        if (!(std::abs(scaled) < static_cast<double>(radius_))) return 0;
        auto q = static_cast<int64_t>(std::llround(scaled));
        if (q <= -static_cast<int64_t>(radius_) || q >= static_cast<int64_t>(radius_)) return 0;
        double recon = pred + 2.0 * static_cast<double>(q) * eb_;
        if (std::abs(recon - val) > eb_) return 0;
        val = recon;
        return static_cast<uint32_t>(q + static_cast<int64_t>(radius_));
    }

    // code != 0
    double recover(double pred, uint32_t code) const {
        auto q = static_cast<int64_t>(code) - static_cast<int64_t>(radius_);
        return pred + 2.0 * static_cast<double>(q) * eb_;
    }

    double eb() const { return eb_; }
    uint32_t radius() const { return radius_; }
    uint32_t capacity() const { return capacity_; }

private:
    double eb_;
    double recip_;
    uint32_t radius_;
    uint32_t capacity_;
};

}  // namespace amrc
