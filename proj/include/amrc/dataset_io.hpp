#pragma once

#include <filesystem>

#include "amrc/dataset.hpp"

namespace amrc {

// Interchange format: a directory holding header.json plus one little-endian
// raw f64 file per (level, box, field) named L{l}_B{b}_{field}.f64.
// export followed by import is bit-identical.
void export_dataset(const AmrDataset& ds, const std::filesystem::path& dir);
AmrDataset import_dataset(const std::filesystem::path& dir);

}  // namespace amrc
