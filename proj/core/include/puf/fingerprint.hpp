#ifndef PUF_FINGERPRINT_HPP
#define PUF_FINGERPRINT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "puf/errors.hpp"

namespace puf {

/**
 * A fixed-length bit vector: the start-up response of a block of SRAM cells.
 *
 * Bit i always refers to cell i. Bits are packed little-endian within bytes
 * (bit i lives in byte i/8 at position i%8), which is also the order used by
 * the hex encoding in readings files and by the helper-data position masks.
 */
class Fingerprint {
      public:
	Fingerprint() = default;
	explicit Fingerprint(std::size_t length_bits);
	Fingerprint(std::vector<std::uint8_t> bytes, std::size_t length_bits);

	/// Decodes a hex string; the fingerprint length is 4 bits per hex digit.
	static Fingerprint from_hex(std::string_view hex);

	std::size_t length_bits() const { return length_bits_; }
	std::size_t size_bytes() const { return bytes_.size(); }

	bool bit(std::size_t i) const;
	void set_bit(std::size_t i, bool value);

	/// Number of set bits.
	std::size_t popcount() const;

	const std::vector<std::uint8_t> &bytes() const { return bytes_; }
	std::string to_hex() const;

	Fingerprint complemented() const;

	bool operator==(const Fingerprint &) const = default;

      private:
	std::vector<std::uint8_t> bytes_;
	std::size_t length_bits_ = 0;
};

/// Absolute Hamming distance. Throws ValidationError on length mismatch.
std::size_t hamming_distance(const Fingerprint &a, const Fingerprint &b);

/// Fractional Hamming distance: differing bits / total bits, in [0,1].
double fhd(const Fingerprint &a, const Fingerprint &b);

/// One power-up capture of a device, with the context needed to group it.
struct Reading {
	Fingerprint fingerprint;
	std::string device_id;
	std::string board_type;    // e.g. F401RE, F446RE, SIM
	int nominal_temp_c = 25;   // chamber target; authoritative for grouping
	double sensor_temp_c = 25; // noisy on-chip sensor value
	std::uint32_t run_index = 0;
};

/// Per-cell empirical probability of powering up to 1.
struct CellStatistics {
	std::vector<double> p_one;
	std::size_t sample_count = 0;
};

/**
 * Majority-rounded aggregate of repeated readings at one temperature.
 * Cells whose p_one was exactly 0.5 round to 0 and are flagged in tie_mask.
 */
struct ReferenceFingerprint {
	Fingerprint fingerprint;
	std::string device_id;
	int source_temp_c = 25;
	std::size_t source_count = 0;
	Fingerprint tie_mask;
};

/// Computes p_one per cell. Readings must be non-empty, same device, same length.
CellStatistics cell_statistics(std::span<const Reading> readings);

/// Rounds cell statistics of readings taken at temp_c into a reference.
ReferenceFingerprint aggregate_reference(std::span<const Reading> readings, int temp_c);

/// Index sets of the strong-0 / strong-1 / weak trichotomy at threshold epsilon.
struct CellPartition {
	std::vector<std::uint32_t> strong0;
	std::vector<std::uint32_t> strong1;
	std::vector<std::uint32_t> weak;
};

/// strong1: p_one >= 1-epsilon, strong0: p_one <= epsilon, weak: the rest.
/// Requires 0 < epsilon < 0.5.
CellPartition classify_cells(const CellStatistics &stats, double epsilon = 0.1);

} // namespace puf

#endif
