#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gibbslab/spectral/field.hpp"

namespace gibbslab {

// Binary container: "TFLD", u32 version, f64 L, u64 M, u64 count, then
// `count` records of (f64 tag, M x (f64 re, f64 im)), all little-endian.
// The tag is a time stamp for trajectories and a member index for ensembles.
inline constexpr std::uint32_t kFieldFormatVersion = 1;

struct FieldRecord {
    double tag;
    TorusField field;
};

void write_fields(const std::filesystem::path& path, const std::vector<FieldRecord>& records);
// Explicit grid; allows an empty container.
void write_fields(const std::filesystem::path& path, const TorusGrid& grid, const std::vector<FieldRecord>& records);
std::vector<FieldRecord> read_fields(const std::filesystem::path& path);

void write_field(const std::filesystem::path& path, const TorusField& u);
TorusField read_field(const std::filesystem::path& path);

// x, Re, Im per node; %.17g formatting.
void write_field_csv(std::ostream& os, const TorusField& u);

}  // namespace gibbslab
