#ifndef PUF_FUZZY_EXTRACTOR_HPP
#define PUF_FUZZY_EXTRACTOR_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "puf/fingerprint.hpp"

namespace puf::fe {

/**
 * Parameters of the sample-then-lock fuzzy extractor.
 *
 * n  fingerprint length in bits
 * t  tolerated Hamming errors
 * k  subsample size in bits (the cipher-security knob)
 * s  check-tag length in bits; a wrong subsample unlocks with probability 2^-s
 * delta  target reproduction error probability
 */
struct FEParams {
	std::uint16_t n = 128;
	std::uint16_t k = 80;
	std::uint16_t t = 5;
	std::uint16_t s = 128;
	std::uint16_t key_len = 128;
	double delta = 1e-3;

	void validate() const;
};

/// One digital locker: the key XOR-masked by a hash of a k-bit subsample.
struct Locker {
	Fingerprint position_mask;	     // n-bit mask with exactly k set bits
	std::array<std::uint8_t, 16> nonce{}; // unique within one HelperData
	std::vector<std::uint8_t> ciphertext; // (key_len + s)/8 bytes
};

struct HelperData {
	FEParams params;
	std::vector<Locker> lockers;
};

using Key = std::vector<std::uint8_t>;

/// Probability that a uniform k-subset of n positions avoids all t error
/// positions: C(n-t,k)/C(n,k), evaluated in stable product form.
double sampling_success_prob(std::size_t n, std::size_t t, std::size_t k);

/// Smallest locker count l with 1-(1-p)^l >= 1-delta.
std::uint64_t locker_count(const FEParams &params);

/// Serialized helper-data size in bytes for these parameters.
std::size_t helper_size(const FEParams &params);

/// Enrollment: draws a fresh key and locks it under locker_count(params)
/// random subsamples of w. Deterministic in (w, params, rng_seed); w itself
/// is not retained in the output.
std::pair<Key, HelperData> gen(const Fingerprint &w, const FEParams &params, std::uint64_t rng_seed);

/// Reproduction: tries lockers in index order and returns the key of the first
/// one whose check tag verifies, or nullopt if no subsample avoided the errors.
std::optional<Key> rep(const Fingerprint &w_prime, const HelperData &helper);

/// Helper-data binary format: magic "PUFL", little-endian integers throughout.
std::vector<std::uint8_t> serialize(const HelperData &helper);
HelperData deserialize(std::span<const std::uint8_t> buffer);

namespace detail {
/// PRHash(nonce, subsample) expanded to out_len bytes (SHA-256 with a counter).
std::vector<std::uint8_t> locker_pad(std::span<const std::uint8_t> nonce, std::span<const std::uint8_t> sample,
				     std::size_t out_len);
/// Bits of w at the mask's set positions, ascending, packed little-endian.
std::vector<std::uint8_t> extract_sample(const Fingerprint &w, const Fingerprint &mask);
} // namespace detail

} // namespace puf::fe

#endif
