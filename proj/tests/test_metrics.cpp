#include <doctest.h>

#include <cmath>
#include <random>

#include "puf/detail/rng.hpp"
#include "puf/metrics.hpp"

using namespace puf;

namespace {

Reading make_reading(const Fingerprint &fp, const std::string &device, int temp, std::uint32_t run)
{
	Reading r;
	r.fingerprint = fp;
	r.device_id = device;
	r.board_type = "SIM";
	r.nominal_temp_c = temp;
	r.sensor_temp_c = temp;
	r.run_index = run;
	return r;
}

ReferenceFingerprint make_ref(const Fingerprint &fp, const std::string &device)
{
	ReferenceFingerprint ref;
	ref.fingerprint = fp;
	ref.tie_mask = Fingerprint(fp.length_bits());
	ref.device_id = device;
	ref.source_count = 1;
	return ref;
}

} // namespace

TEST_CASE("group_readings buckets by nominal temperature and keeps run order")
{
	std::vector<Reading> readings = {
	    make_reading(Fingerprint(8), "a", 50, 0),
	    make_reading(Fingerprint(8), "a", 25, 1),
	    make_reading(Fingerprint(8), "a", 50, 2),
	    make_reading(Fingerprint(8), "a", 10, 3),
	};
	auto groups = group_readings(readings);
	REQUIRE(groups.size() == 3);
	CHECK(groups.at(25).size() == 1);
	CHECK(groups.at(10).size() == 1);
	REQUIRE(groups.at(50).size() == 2);
	CHECK(groups.at(50)[0].run_index == 0);
	CHECK(groups.at(50)[1].run_index == 2);
}

TEST_CASE("intra_hd measures each reading against the reference")
{
	ReferenceFingerprint ref = make_ref(Fingerprint::from_hex("00"), "a");
	std::vector<Reading> readings = {
	    make_reading(Fingerprint::from_hex("00"), "a", 25, 0),
	    make_reading(Fingerprint::from_hex("ff"), "a", 25, 1),
	    make_reading(Fingerprint::from_hex("0f"), "a", 50, 2),
	};
	IntraSeries series = intra_hd(readings, ref);
	REQUIRE(series.values.size() == 3);
	CHECK(series.values[0] == 0.0);
	CHECK(series.values[1] == 1.0);
	CHECK(series.values[2] == 0.5);
	CHECK(series.nominal_temps[2] == 50);

	std::vector<Reading> foreign = {make_reading(Fingerprint::from_hex("00"), "b", 25, 0)};
	CHECK_THROWS_AS(intra_hd(foreign, ref), ValidationError);
}

TEST_CASE("inter_hd over a known trio")
{
	// pairwise FHDs 1.0, 0.5, 0.5 -> mean 2/3
	std::vector<ReferenceFingerprint> refs = {
	    make_ref(Fingerprint::from_hex("00"), "a"),
	    make_ref(Fingerprint::from_hex("ff"), "b"),
	    make_ref(Fingerprint::from_hex("0f"), "c"),
	};
	UniquenessReport rep = inter_hd(refs);
	REQUIRE(rep.pairwise.size() == 3);
	CHECK(rep.mean == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
	// population std of {1, .5, .5}
	CHECK(rep.std_dev == doctest::Approx(std::sqrt(1.0 / 18.0)).epsilon(1e-9));
}

TEST_CASE("inter_hd validates its inputs")
{
	std::vector<ReferenceFingerprint> one = {make_ref(Fingerprint(8), "a")};
	CHECK_THROWS_AS(inter_hd(one), ValidationError);
	std::vector<ReferenceFingerprint> dup = {make_ref(Fingerprint(8), "a"), make_ref(Fingerprint(8), "a")};
	CHECK_THROWS_AS(inter_hd(dup), ValidationError);
}

TEST_CASE("inter_hd of independent random references is close to one half")
{
	std::mt19937_64 rng(7);
	std::vector<ReferenceFingerprint> refs;
	for (int d = 0; d < 14; ++d) {
		Fingerprint fp(4096);
		for (std::size_t i = 0; i < fp.length_bits(); ++i) {
			fp.set_bit(i, detail::next_bit(rng));
		}
		refs.push_back(make_ref(fp, "dev-" + std::to_string(d)));
	}
	UniquenessReport rep = inter_hd(refs);
	CHECK(rep.pairwise.size() == 91);
	CHECK(rep.mean == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("relative_noise_change reproduces hand-computed ratios")
{
	CHECK(relative_noise_change(3.87, 4.24) == doctest::Approx((4.24 - 3.87) / 4.24).epsilon(1e-12));
	CHECK(relative_noise_change(1.0, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
	CHECK(relative_noise_change(2.0, 2.0) == 0.0);
	CHECK_THROWS_AS(relative_noise_change(1.0, 0.0), ValidationError);
}

TEST_CASE("distribution_summary basics")
{
	std::vector<double> values = {1.0, 2.0, 3.0};
	DistributionSummary d = distribution_summary(values);
	CHECK(d.mean == doctest::Approx(2.0));
	CHECK(d.std_dev == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12)); // population
	CHECK(d.min == 1.0);
	CHECK(d.max == 3.0);
	CHECK(d.count == 3);
	std::vector<double> empty;
	CHECK_THROWS_AS(distribution_summary(empty), ValidationError);
}
