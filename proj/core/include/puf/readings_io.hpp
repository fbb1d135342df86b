#ifndef PUF_READINGS_IO_HPP
#define PUF_READINGS_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "puf/fingerprint.hpp"

namespace puf::io {

/**
 * Readings-file text format, one record per line:
 *
 *   device_id,board_type,nominal_temp_c,sensor_temp_c,run_index,fingerprint_hex
 *
 * Lines starting with '#' are comments. Hex fingerprints use little-endian bit
 * order within bytes. All fingerprints in one file must have the same length.
 */
std::vector<Reading> parse_readings(std::istream &in, const std::string &source_name = "<stream>");
std::vector<Reading> load_readings(const std::filesystem::path &path);

std::string format_reading(const Reading &reading);

/// Writes records atomically (temp file + rename); byte-deterministic.
void write_readings(const std::filesystem::path &path, std::span<const Reading> readings);

/// References are stored as reading records whose board_type carries a ".ref"
/// suffix; the run_index field holds the number of source readings.
Reading reference_as_record(const ReferenceFingerprint &ref, const std::string &board_type);
ReferenceFingerprint record_as_reference(const Reading &record);
bool is_reference_record(const Reading &record);

void write_references(const std::filesystem::path &path, std::span<const ReferenceFingerprint> refs,
		      const std::string &board_type);
std::vector<ReferenceFingerprint> load_references(const std::filesystem::path &path);

/// Atomic text-file write used by every report emitter.
void write_text_atomic(const std::filesystem::path &path, const std::string &content);

} // namespace puf::io

#endif
