#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace amrc {

// Malformed input: bad files, inconsistent datasets, corrupt streams.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A decompressed value missed its error bound during self-check.
struct BoundViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Int3 {
    int64_t x = 0, y = 0, z = 0;

    int64_t& operator[](int d) { return d == 0 ? x : (d == 1 ? y : z); }
    int64_t operator[](int d) const { return d == 0 ? x : (d == 1 ? y : z); }

    friend bool operator==(const Int3&, const Int3&) = default;
    friend Int3 operator+(Int3 a, Int3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Int3 operator-(Int3 a, Int3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Int3 operator*(Int3 a, int64_t s) { return {a.x * s, a.y * s, a.z * s}; }

    int64_t product() const { return x * y * z; }

    std::string str() const {
        return "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")";
    }
};

// Row-major with x fastest: index = (z*ny + y)*nx + x.
inline int64_t linear_index(const Int3& p, const Int3& n) {
    return (p.z * n.y + p.y) * n.x + p.x;
}

inline int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline int64_t ceil_div(int64_t a, int64_t b) {
    return -floor_div(-a, b);
}

}  // namespace amrc
