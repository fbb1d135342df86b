#ifndef PUF_METRICS_HPP
#define PUF_METRICS_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "puf/fingerprint.hpp"

namespace puf {

/// Per-reading FHD of one device against a fixed reference (reliability series).
struct IntraSeries {
	std::string device_id;
	std::vector<double> values;
	std::vector<int> nominal_temps;
};

/// All pairwise FHDs between distinct-device references at one temperature.
struct UniquenessReport {
	std::vector<double> pairwise;
	double mean = 0.0;
	double std_dev = 0.0; // population
};

struct DistributionSummary {
	double mean = 0.0;
	double std_dev = 0.0; // population
	double min = 0.0;
	double max = 0.0;
	std::size_t count = 0;
};

/// Buckets readings by nominal temperature (the sensor value is too noisy to
/// group on). Run order is preserved within each bucket.
std::map<int, std::vector<Reading>> group_readings(std::span<const Reading> readings);

/// FHD of each reading against the device's reference, in input order.
/// All readings must come from the reference's device.
IntraSeries intra_hd(std::span<const Reading> readings, const ReferenceFingerprint &reference);

/// Uniqueness over all unordered pairs of references. Requires >= 2 references
/// with equal lengths and distinct device ids; ideal mean is 0.5.
UniquenessReport inter_hd(std::span<const ReferenceFingerprint> references);

/// (larger - smaller) / larger; how much lower the smaller noise figure is,
/// relative to the larger one. Requires larger > 0.
double relative_noise_change(double smaller, double larger);

DistributionSummary distribution_summary(std::span<const double> values);

} // namespace puf

#endif
