#include "puf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace puf {

std::map<int, std::vector<Reading>> group_readings(std::span<const Reading> readings)
{
	std::map<int, std::vector<Reading>> groups;
	for (const Reading &r : readings) {
		groups[r.nominal_temp_c].push_back(r);
	}
	return groups;
}

IntraSeries intra_hd(std::span<const Reading> readings, const ReferenceFingerprint &reference)
{
	IntraSeries series;
	series.device_id = reference.device_id;
	series.values.reserve(readings.size());
	series.nominal_temps.reserve(readings.size());
	for (const Reading &r : readings) {
		if (r.device_id != reference.device_id) {
			throw ValidationError("intra-HD mixes device '" + r.device_id + "' with reference of '" +
					      reference.device_id + "'");
		}
		series.values.push_back(fhd(r.fingerprint, reference.fingerprint));
		series.nominal_temps.push_back(r.nominal_temp_c);
	}
	return series;
}

UniquenessReport inter_hd(std::span<const ReferenceFingerprint> references)
{
	if (references.size() < 2) {
		throw ValidationError("uniqueness needs at least two references");
	}
	std::set<std::string> ids;
	for (const ReferenceFingerprint &ref : references) {
		if (!ids.insert(ref.device_id).second) {
			throw ValidationError("duplicate device id in uniqueness input: " + ref.device_id);
		}
	}
	UniquenessReport report;
	report.pairwise.reserve(references.size() * (references.size() - 1) / 2);
	for (std::size_t i = 0; i < references.size(); ++i) {
		for (std::size_t j = i + 1; j < references.size(); ++j) {
			report.pairwise.push_back(fhd(references[i].fingerprint, references[j].fingerprint));
		}
	}
	DistributionSummary s = distribution_summary(report.pairwise);
	report.mean = s.mean;
	report.std_dev = s.std_dev;
	return report;
}

double relative_noise_change(double smaller, double larger)
{
	if (!(larger > 0.0)) {
		throw ValidationError("relative noise change needs a positive baseline");
	}
	return (larger - smaller) / larger;
}

DistributionSummary distribution_summary(std::span<const double> values)
{
	if (values.empty()) {
		throw ValidationError("cannot summarize an empty distribution");
	}
	DistributionSummary s;
	s.count = values.size();
	s.min = *std::min_element(values.begin(), values.end());
	s.max = *std::max_element(values.begin(), values.end());
	double sum = 0.0;
	for (double v : values) {
		sum += v;
	}
	s.mean = sum / static_cast<double>(values.size());
	double sq = 0.0;
	for (double v : values) {
		sq += (v - s.mean) * (v - s.mean);
	}
	s.std_dev = std::sqrt(sq / static_cast<double>(values.size()));
	return s;
}

} // namespace puf
