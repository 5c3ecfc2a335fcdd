#pragma once

// File formats:
//  - raw frames and SVE value planes: binary portable graymap, header
//    "P5 <w> <h> 65535", big-endian 16-bit samples;
//  - correction profiles: JSON text;
//  - linear HDR images: "SVEH" container (see encode_hdr);
//  - manifests, regions, radiometric samples and metrics: CSV with a header
//    row, comma separator and LF line endings.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svehdr/calib.hpp"
#include "svehdr/cfa.hpp"
#include "svehdr/linearize.hpp"
#include "svehdr/metrics.hpp"

namespace svehdr::io {

using Bytes = std::vector<std::uint8_t>;

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, std::string_view text);

// --- 16-bit graymap -------------------------------------------------------

Bytes encode_pgm16(const Plane<std::uint16_t>& plane);
/// Throws FormatError with malformed_header, unsupported_maxval, truncated or
/// trailing_data.
Plane<std::uint16_t> decode_pgm16(std::span<const std::uint8_t> bytes);

Bytes encode_raw16(const RawFrame& frame);
/// Samples above 2^bit_depth - 1 raise FormatError(sample_overflow); pass
/// bit_depth = 16 to accept the full range.
RawFrame decode_raw16(std::span<const std::uint8_t> bytes, int bit_depth = 12);

RawFrame read_raw16(const std::filesystem::path& path, int bit_depth = 12);
void write_raw16(const RawFrame& frame, const std::filesystem::path& path);

/// 8-bit preview scaled so the brightest valid pixel maps to 255.
Bytes encode_preview8(const LinearHdrImage& img);

// --- correction profile ----------------------------------------------------

std::string encode_profile(const CorrectionProfile& profile);
/// Rejects unknown keys, version mismatches and profiles that break an invariant.
CorrectionProfile decode_profile(std::string_view text);

CorrectionProfile read_profile(const std::filesystem::path& path);
void write_profile(const CorrectionProfile& profile, const std::filesystem::path& path);

// --- HDR container ----------------------------------------------------------

inline constexpr std::uint8_t kHdrVersion = 1;

/// "SVEH", version byte, width and height as little-endian u32, row-major
/// little-endian float32 samples, then the validity mask packed row-major,
/// least significant bit first, zero padded to a whole byte.
Bytes encode_hdr(const LinearHdrImage& img);
LinearHdrImage decode_hdr(std::span<const std::uint8_t> bytes);

LinearHdrImage read_hdr(const std::filesystem::path& path);
void write_hdr(const LinearHdrImage& img, const std::filesystem::path& path);

// --- CSV artefacts ----------------------------------------------------------

struct ManifestEntry {
    double exposure = 0.0;
    std::string path;  // relative to the manifest's directory
    bool operator==(const ManifestEntry&) const = default;
};

/// `exposure_seconds,path`
std::string encode_manifest(std::span<const ManifestEntry> entries);
std::vector<ManifestEntry> decode_manifest(std::string_view text);

/// Parses the manifest and checks that exposures increase strictly and that
/// every referenced file exists.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(std::span<const ManifestEntry> entries, const std::filesystem::path& path);

/// Loads every frame named by a manifest.
ExposureSeries load_series(const std::filesystem::path& manifest_path, int bit_depth = 12);

/// `x,y,w,h`
std::string encode_regions(std::span<const Rect> regions);
std::vector<Rect> decode_regions(std::string_view text);
std::vector<Rect> read_regions(const std::filesystem::path& path);
void write_regions(std::span<const Rect> regions, const std::filesystem::path& path);

/// `T_seconds,mean_sve`
std::string encode_radiometric(const RadiometricFunction& rf);

/// Appends one evaluation row, writing the header first when the file is new.
void append_evaluation(const EvaluationRecord& record, const std::filesystem::path& path);

}  // namespace svehdr::io
