#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "amrc/container.hpp"

namespace amrc {

// 20*log10(R) - 10*log10(sum(e^2)/N), R = max-min of the original.
// Identical arrays give +inf; zero range with nonzero error gives -inf.
double psnr(std::span<const double> original, std::span<const double> reconstructed);

// Formula core with the range supplied by the caller.
double psnr_with_range(double range, std::span<const double> original,
                       std::span<const double> reconstructed);

// Kept values of one (level, field) in mask order; shared by metrics and tests.
std::vector<double> kept_values(const AmrDataset& ds, const std::vector<BlockMask>& masks,
                                int level, const std::string& field);

// Kept elements of a level over that level's whole domain.
double density(const AmrDataset& ds, const std::vector<BlockMask>& masks, int level);

struct FieldQuality {
    int level = 0;
    std::string field;
    int64_t count = 0;  // kept points
    double range = 0;
    double max_abs_err = 0;
    double psnr_db = 0;
    uint64_t payload_bytes = 0;
    double ratio = 0;    // raw kept bytes / payload bytes
    double bitrate = 0;  // payload bits per kept value
};

struct QualityReport {
    std::vector<FieldQuality> rows;
    double mean_psnr_db = 0;  // arithmetic mean of per-row dB
    double max_abs_err = 0;
    double total_ratio = 0;    // raw kept bytes / container file bytes
    double total_bitrate = 0;  // file bits per kept value
    int64_t kept_points = 0;
    uint64_t file_bytes = 0;

    std::string to_csv() const;  // stable schema; +-inf as literal inf/-inf
};

// Pure function of (original, decompressed, masks, chunk table); removed
// redundant points are excluded from both N and R.
QualityReport evaluate_quality(const AmrDataset& original, const AmrDataset& decompressed,
                               const std::vector<BlockMask>& masks,
                               const std::vector<ChunkRecord>& records, uint64_t file_bytes);

// Convenience: decompress `file` and compare against `original`.
QualityReport evaluate_container(const std::filesystem::path& file, const AmrDataset& original);

struct SweepRow {
    Algorithm algorithm;
    ArrangementChoice arrangement;
    Encoding encoding;
    EbMode eb_mode;
    double eb = 0;
    double bitrate = 0;
    double psnr_db = 0;
    double ratio = 0;
};

std::string sweep_csv_header();
std::string sweep_row_csv(const SweepRow& row);

// One container run per (algorithm, arrangement, eb), deterministic order.
std::vector<SweepRow> sweep(const AmrDataset& ds, std::span<const Algorithm> algorithms,
                            std::span<const double> ebs,
                            std::span<const ArrangementChoice> arrangements,
                            const CompressorConfig& base, int ranks,
                            const std::filesystem::path& workdir);

// Absolute-error slice |a-b| of one (level, field) composed over the level
// domain; axis 0=x, 1=y, 2=z. Returns row-major (width, height) data.
struct ErrorMap {
    int64_t width = 0, height = 0;
    std::vector<double> values;
};

ErrorMap error_map(const AmrDataset& original, const AmrDataset& reconstructed, int level,
                   const std::string& field, int axis, int64_t index);

// Raw f64 array plus a JSON sidecar describing the slice.
void save_error_map(const ErrorMap& map, const std::filesystem::path& prefix);

}  // namespace amrc
