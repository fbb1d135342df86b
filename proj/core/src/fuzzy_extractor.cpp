#include "puf/fuzzy_extractor.hpp"

#include <cmath>
#include <cstring>
#include <numeric>

#include <openssl/evp.h>

#include "puf/detail/rng.hpp"

namespace puf::fe {

namespace {

constexpr char kMagic[4] = {'P', 'U', 'F', 'L'};
constexpr std::uint16_t kFormatVersion = 1;
constexpr std::size_t kNonceBytes = 16;
constexpr std::size_t kHeaderBytes = 4 + 2 + 5 * 2 + 8 + 4;

void put_u16(std::vector<std::uint8_t> &out, std::uint16_t v)
{
	out.push_back(static_cast<std::uint8_t>(v));
	out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v)
{
	for (int i = 0; i < 4; ++i) {
		out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
	}
}

class Cursor {
      public:
	explicit Cursor(std::span<const std::uint8_t> data) : data_(data) {}

	std::span<const std::uint8_t> take(std::size_t count)
	{
		if (pos_ + count > data_.size()) {
			throw IoError("truncated helper data");
		}
		auto s = data_.subspan(pos_, count);
		pos_ += count;
		return s;
	}

	std::uint16_t u16()
	{
		auto s = take(2);
		return static_cast<std::uint16_t>(s[0] | s[1] << 8);
	}

	std::uint32_t u32()
	{
		auto s = take(4);
		return static_cast<std::uint32_t>(s[0]) | static_cast<std::uint32_t>(s[1]) << 8 |
		       static_cast<std::uint32_t>(s[2]) << 16 | static_cast<std::uint32_t>(s[3]) << 24;
	}

	double f64()
	{
		auto s = take(8);
		std::uint64_t bits = 0;
		for (int i = 7; i >= 0; --i) {
			bits = bits << 8 | s[static_cast<std::size_t>(i)];
		}
		double v;
		std::memcpy(&v, &bits, sizeof v);
		return v;
	}

	bool done() const { return pos_ == data_.size(); }

      private:
	std::span<const std::uint8_t> data_;
	std::size_t pos_ = 0;
};

std::size_t mask_bytes(const FEParams &p) { return (p.n + 7u) / 8u; }
std::size_t ciphertext_bytes(const FEParams &p) { return (static_cast<std::size_t>(p.key_len) + p.s) / 8u; }

void fill_random(std::mt19937_64 &rng, std::span<std::uint8_t> out)
{
	for (auto &b : out) {
		b = static_cast<std::uint8_t>(rng() >> 56);
	}
}

} // namespace

void FEParams::validate() const
{
	if (n == 0) {
		throw InfeasibleParamsError("fingerprint length must be positive");
	}
	if (t >= n) {
		throw InfeasibleParamsError("error tolerance t must be below the fingerprint length");
	}
	if (k == 0 || k > n - t) {
		throw InfeasibleParamsError("subsample size k must satisfy 0 < k <= n - t, "
					    "otherwise no subsample can avoid all errors");
	}
	if (!(delta > 0.0 && delta < 1.0)) {
		throw InfeasibleParamsError("reproduction error delta must lie in (0, 1)");
	}
	if (s < 64) {
		throw InfeasibleParamsError("check-tag length s must be at least 64 bits");
	}
	if (key_len == 0 || key_len % 8 != 0 || s % 8 != 0) {
		throw InfeasibleParamsError("key_len and s must be positive multiples of 8");
	}
}

double sampling_success_prob(std::size_t n, std::size_t t, std::size_t k)
{
	if (n == 0 || t >= n || k == 0 || k > n) {
		throw InfeasibleParamsError("sampling probability needs 0 < k <= n and t < n");
	}
	if (k > n - t) {
		return 0.0; // C(n-t,k) = 0: no subsample can avoid every error
	}
	long double p = 1.0L;
	for (std::size_t i = 0; i < t; ++i) {
		p *= static_cast<long double>(n - k - i) / static_cast<long double>(n - i);
	}
	return static_cast<double>(p);
}

std::uint64_t locker_count(const FEParams &params)
{
	params.validate();
	if (params.t == 0) {
		return 1;
	}
	const long double p =
	    [&] {
		    long double v = 1.0L;
		    for (std::size_t i = 0; i < params.t; ++i) {
			    v *= static_cast<long double>(params.n - params.k - i) /
				 static_cast<long double>(params.n - i);
		    }
		    return v;
	    }();
	if (p <= 0.0L) {
		throw InfeasibleParamsError("subsample success probability underflowed to zero");
	}
	if (p >= 1.0L) {
		return 1;
	}
	const long double needed = std::log(static_cast<long double>(params.delta)) / std::log1p(-p);
	auto count = static_cast<std::uint64_t>(std::ceil(needed));
	return count == 0 ? 1 : count;
}

std::size_t helper_size(const FEParams &params)
{
	const std::uint64_t count = locker_count(params);
	return kHeaderBytes + count * (mask_bytes(params) + kNonceBytes + ciphertext_bytes(params));
}

namespace detail {

std::vector<std::uint8_t> locker_pad(std::span<const std::uint8_t> nonce, std::span<const std::uint8_t> sample,
				     std::size_t out_len)
{
	std::vector<std::uint8_t> out;
	out.reserve(out_len);
	std::vector<std::uint8_t> msg(nonce.size() + 4 + sample.size());
	std::memcpy(msg.data(), nonce.data(), nonce.size());
	std::memcpy(msg.data() + nonce.size() + 4, sample.data(), sample.size());
	std::uint8_t digest[EVP_MAX_MD_SIZE];
	for (std::uint32_t counter = 0; out.size() < out_len; ++counter) {
		for (int i = 0; i < 4; ++i) {
			msg[nonce.size() + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(counter >> (8 * i));
		}
		unsigned int digest_len = 0;
		if (EVP_Digest(msg.data(), msg.size(), digest, &digest_len, EVP_sha256(), nullptr) != 1) {
			throw Error("SHA-256 evaluation failed");
		}
		std::size_t take = std::min<std::size_t>(digest_len, out_len - out.size());
		out.insert(out.end(), digest, digest + take);
	}
	return out;
}

std::vector<std::uint8_t> extract_sample(const Fingerprint &w, const Fingerprint &mask)
{
	std::vector<std::uint8_t> out((mask.popcount() + 7) / 8, 0);
	std::size_t out_bit = 0;
	for (std::size_t i = 0; i < mask.length_bits(); ++i) {
		if (!mask.bit(i)) {
			continue;
		}
		if (w.bit(i)) {
			out[out_bit / 8] |= static_cast<std::uint8_t>(1u << (out_bit % 8));
		}
		++out_bit;
	}
	return out;
}

} // namespace detail

std::pair<Key, HelperData> gen(const Fingerprint &w, const FEParams &params, std::uint64_t rng_seed)
{
	params.validate();
	if (w.length_bits() != params.n) {
		throw ValidationError("fingerprint length does not match FE parameters");
	}
	const std::uint64_t count = locker_count(params);
	std::mt19937_64 rng(puf::detail::mix64(rng_seed, 0x73616d706c656c6bull));

	Key key(params.key_len / 8u);
	fill_random(rng, key);

	HelperData helper;
	helper.params = params;
	helper.lockers.reserve(count);

	const std::size_t ct_len = ciphertext_bytes(params);
	std::vector<std::uint16_t> positions(params.n);
	for (std::uint64_t l = 0; l < count; ++l) {
		Locker locker;
		// k distinct positions via partial Fisher-Yates
		std::iota(positions.begin(), positions.end(), std::uint16_t{0});
		locker.position_mask = Fingerprint(params.n);
		for (std::uint16_t i = 0; i < params.k; ++i) {
			auto j = static_cast<std::size_t>(i + puf::detail::next_below(rng, params.n - i));
			std::swap(positions[i], positions[j]);
			locker.position_mask.set_bit(positions[i], true);
		}
		fill_random(rng, locker.nonce);

		std::vector<std::uint8_t> sample = detail::extract_sample(w, locker.position_mask);
		locker.ciphertext = detail::locker_pad(locker.nonce, sample, ct_len);
		for (std::size_t i = 0; i < key.size(); ++i) {
			locker.ciphertext[i] ^= key[i]; // trailing s bits stay PRHash XOR 0
		}
		helper.lockers.push_back(std::move(locker));
	}
	return {std::move(key), std::move(helper)};
}

std::optional<Key> rep(const Fingerprint &w_prime, const HelperData &helper)
{
	const FEParams &p = helper.params;
	if (w_prime.length_bits() != p.n) {
		throw ValidationError("fingerprint length does not match the helper data");
	}
	const std::size_t key_bytes = p.key_len / 8u;
	const std::size_t ct_len = ciphertext_bytes(p);
	for (const Locker &locker : helper.lockers) {
		std::vector<std::uint8_t> sample = detail::extract_sample(w_prime, locker.position_mask);
		std::vector<std::uint8_t> pad = detail::locker_pad(locker.nonce, sample, ct_len);
		bool tag_ok = true;
		for (std::size_t i = key_bytes; i < ct_len; ++i) {
			if ((pad[i] ^ locker.ciphertext[i]) != 0) {
				tag_ok = false;
				break;
			}
		}
		if (!tag_ok) {
			continue;
		}
		Key key(key_bytes);
		for (std::size_t i = 0; i < key_bytes; ++i) {
			key[i] = pad[i] ^ locker.ciphertext[i];
		}
		return key;
	}
	return std::nullopt;
}

std::vector<std::uint8_t> serialize(const HelperData &helper)
{
	const FEParams &p = helper.params;
	std::vector<std::uint8_t> out;
	out.reserve(kHeaderBytes + helper.lockers.size() * (mask_bytes(p) + kNonceBytes + ciphertext_bytes(p)));
	out.insert(out.end(), kMagic, kMagic + 4);
	put_u16(out, kFormatVersion);
	put_u16(out, p.n);
	put_u16(out, p.k);
	put_u16(out, p.t);
	put_u16(out, p.s);
	put_u16(out, p.key_len);
	std::uint64_t delta_bits = 0;
	std::memcpy(&delta_bits, &p.delta, sizeof delta_bits);
	for (int i = 0; i < 8; ++i) {
		out.push_back(static_cast<std::uint8_t>(delta_bits >> (8 * i)));
	}
	put_u32(out, static_cast<std::uint32_t>(helper.lockers.size()));
	for (const Locker &locker : helper.lockers) {
		const auto &mb = locker.position_mask.bytes();
		out.insert(out.end(), mb.begin(), mb.end());
		out.insert(out.end(), locker.nonce.begin(), locker.nonce.end());
		out.insert(out.end(), locker.ciphertext.begin(), locker.ciphertext.end());
	}
	return out;
}

HelperData deserialize(std::span<const std::uint8_t> buffer)
{
	Cursor cur(buffer);
	auto magic = cur.take(4);
	if (std::memcmp(magic.data(), kMagic, 4) != 0) {
		throw IoError("helper data does not start with the PUFL magic");
	}
	if (cur.u16() != kFormatVersion) {
		throw IoError("unsupported helper-data format version");
	}
	HelperData helper;
	FEParams &p = helper.params;
	p.n = cur.u16();
	p.k = cur.u16();
	p.t = cur.u16();
	p.s = cur.u16();
	p.key_len = cur.u16();
	p.delta = cur.f64();
	p.validate();
	const std::uint32_t count = cur.u32();
	helper.lockers.reserve(count);
	for (std::uint32_t l = 0; l < count; ++l) {
		Locker locker;
		auto mb = cur.take(mask_bytes(p));
		locker.position_mask = Fingerprint(std::vector<std::uint8_t>(mb.begin(), mb.end()), p.n);
		auto nb = cur.take(kNonceBytes);
		std::copy(nb.begin(), nb.end(), locker.nonce.begin());
		auto cb = cur.take(ciphertext_bytes(p));
		locker.ciphertext.assign(cb.begin(), cb.end());
		helper.lockers.push_back(std::move(locker));
	}
	if (!cur.done()) {
		throw IoError("trailing bytes after the last locker record");
	}
	return helper;
}

} // namespace puf::fe
