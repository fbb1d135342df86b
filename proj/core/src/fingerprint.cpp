#include "puf/fingerprint.hpp"

#include <algorithm>
#include <bit>

namespace puf {

namespace {

int hex_nibble(char c)
{
	if (c >= '0' && c <= '9') {
		return c - '0';
	}
	if (c >= 'a' && c <= 'f') {
		return c - 'a' + 10;
	}
	if (c >= 'A' && c <= 'F') {
		return c - 'A' + 10;
	}
	return -1;
}

} // namespace

Fingerprint::Fingerprint(std::size_t length_bits) : bytes_((length_bits + 7) / 8, 0), length_bits_(length_bits)
{
	if (length_bits == 0) {
		throw ValidationError("fingerprint length must be positive");
	}
}

Fingerprint::Fingerprint(std::vector<std::uint8_t> bytes, std::size_t length_bits)
    : bytes_(std::move(bytes)), length_bits_(length_bits)
{
	if (length_bits == 0) {
		throw ValidationError("fingerprint length must be positive");
	}
	if (bytes_.size() != (length_bits + 7) / 8) {
		throw ValidationError("fingerprint byte buffer does not match bit length");
	}
	// keep padding bits zero so popcount/equality work on whole bytes
	if (length_bits % 8 != 0) {
		bytes_.back() &= static_cast<std::uint8_t>((1u << (length_bits % 8)) - 1);
	}
}

Fingerprint Fingerprint::from_hex(std::string_view hex)
{
	if (hex.empty() || hex.size() % 2 != 0) {
		throw ValidationError("hex fingerprint must have a positive, even number of digits");
	}
	std::vector<std::uint8_t> bytes(hex.size() / 2);
	for (std::size_t i = 0; i < bytes.size(); ++i) {
		int hi = hex_nibble(hex[2 * i]);
		int lo = hex_nibble(hex[2 * i + 1]);
		if (hi < 0 || lo < 0) {
			throw ValidationError("invalid hex digit in fingerprint");
		}
		bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
	}
	return Fingerprint(std::move(bytes), hex.size() * 4);
}

bool Fingerprint::bit(std::size_t i) const
{
	if (i >= length_bits_) {
		throw ValidationError("bit index out of range");
	}
	return (bytes_[i / 8] >> (i % 8)) & 1u;
}

void Fingerprint::set_bit(std::size_t i, bool value)
{
	if (i >= length_bits_) {
		throw ValidationError("bit index out of range");
	}
	if (value) {
		bytes_[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
	} else {
		bytes_[i / 8] &= static_cast<std::uint8_t>(~(1u << (i % 8)));
	}
}

std::size_t Fingerprint::popcount() const
{
	std::size_t n = 0;
	for (std::uint8_t b : bytes_) {
		n += static_cast<std::size_t>(std::popcount(b));
	}
	return n;
}

std::string Fingerprint::to_hex() const
{
	static const char digits[] = "0123456789abcdef";
	std::string out;
	out.reserve(bytes_.size() * 2);
	for (std::uint8_t b : bytes_) {
		out.push_back(digits[b >> 4]);
		out.push_back(digits[b & 0xf]);
	}
	return out;
}

Fingerprint Fingerprint::complemented() const
{
	Fingerprint out(length_bits_);
	for (std::size_t i = 0; i < bytes_.size(); ++i) {
		out.bytes_[i] = static_cast<std::uint8_t>(~bytes_[i]);
	}
	if (length_bits_ % 8 != 0) {
		out.bytes_.back() &= static_cast<std::uint8_t>((1u << (length_bits_ % 8)) - 1);
	}
	return out;
}

std::size_t hamming_distance(const Fingerprint &a, const Fingerprint &b)
{
	if (a.length_bits() != b.length_bits()) {
		throw ValidationError("cannot compare fingerprints of different lengths");
	}
	std::size_t n = 0;
	const auto &ba = a.bytes();
	const auto &bb = b.bytes();
	for (std::size_t i = 0; i < ba.size(); ++i) {
		n += static_cast<std::size_t>(std::popcount(static_cast<std::uint8_t>(ba[i] ^ bb[i])));
	}
	return n;
}

double fhd(const Fingerprint &a, const Fingerprint &b)
{
	return static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.length_bits());
}

CellStatistics cell_statistics(std::span<const Reading> readings)
{
	if (readings.empty()) {
		throw ValidationError("cannot aggregate zero readings");
	}
	const std::size_t n = readings.front().fingerprint.length_bits();
	const std::string &device = readings.front().device_id;
	std::vector<std::size_t> ones(n, 0);
	for (const Reading &r : readings) {
		if (r.device_id != device) {
			throw ValidationError("cell statistics mix readings from devices '" + device + "' and '" +
					      r.device_id + "'");
		}
		if (r.fingerprint.length_bits() != n) {
			throw ValidationError("cell statistics mix fingerprint lengths");
		}
		for (std::size_t i = 0; i < n; ++i) {
			ones[i] += r.fingerprint.bit(i) ? 1 : 0;
		}
	}
	CellStatistics stats;
	stats.sample_count = readings.size();
	stats.p_one.resize(n);
	for (std::size_t i = 0; i < n; ++i) {
		stats.p_one[i] = static_cast<double>(ones[i]) / static_cast<double>(readings.size());
	}
	return stats;
}

ReferenceFingerprint aggregate_reference(std::span<const Reading> readings, int temp_c)
{
	for (const Reading &r : readings) {
		if (r.nominal_temp_c != temp_c) {
			throw ValidationError("reference aggregation found a reading at " +
					      std::to_string(r.nominal_temp_c) + " degC, expected " +
					      std::to_string(temp_c));
		}
	}
	CellStatistics stats = cell_statistics(readings);
	const std::size_t n = stats.p_one.size();
	ReferenceFingerprint ref;
	ref.fingerprint = Fingerprint(n);
	ref.tie_mask = Fingerprint(n);
	ref.device_id = readings.front().device_id;
	ref.source_temp_c = temp_c;
	ref.source_count = stats.sample_count;
	for (std::size_t i = 0; i < n; ++i) {
		if (stats.p_one[i] > 0.5) {
			ref.fingerprint.set_bit(i, true);
		} else if (stats.p_one[i] == 0.5) {
			ref.tie_mask.set_bit(i, true); // ties round to 0
		}
	}
	return ref;
}

CellPartition classify_cells(const CellStatistics &stats, double epsilon)
{
	if (!(epsilon > 0.0 && epsilon < 0.5)) {
		throw ValidationError("epsilon must lie in (0, 0.5)");
	}
	CellPartition part;
	for (std::size_t i = 0; i < stats.p_one.size(); ++i) {
		double p = stats.p_one[i];
		if (p >= 1.0 - epsilon) {
			part.strong1.push_back(static_cast<std::uint32_t>(i));
		} else if (p <= epsilon) {
			part.strong0.push_back(static_cast<std::uint32_t>(i));
		} else {
			part.weak.push_back(static_cast<std::uint32_t>(i));
		}
	}
	return part;
}

} // namespace puf
