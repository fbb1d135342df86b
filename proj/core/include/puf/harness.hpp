#ifndef PUF_HARNESS_HPP
#define PUF_HARNESS_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "puf/fuzzy_extractor.hpp"
#include "puf/metrics.hpp"
#include "puf/simulator.hpp"

namespace puf::harness {

/**
 * One experiment campaign: which board profile to simulate, how many devices
 * and readings, the temperature points, and the fuzzy-extractor parameters.
 * Loaded from a flat key = value config file; every CLI flag overrides a key.
 */
struct ExperimentConfig {
	sim::BoardProfile profile = sim::BoardProfile::F446RE_Like;
	std::size_t device_count = 14;
	std::size_t cell_count = 128;
	std::vector<int> temps = {10, 25, 50};
	int ref_temp_c = 25;
	std::size_t readings_per_temp = 50;
	std::size_t enroll_count = 50;
	std::uint64_t seed = 42;
	std::filesystem::path out_dir = "out";
	fe::FEParams fe_params;
	sim::NoiseTargets targets = sim::default_targets(sim::BoardProfile::F446RE_Like);
	double hot_flip_fraction = sim::default_hot_flip_fraction(sim::BoardProfile::F446RE_Like);
	bool strict = false;

	void set_profile(sim::BoardProfile p); // also resets targets/hot-flip defaults
	void validate() const;

	std::filesystem::path readings_file() const { return out_dir / "readings.csv"; }
	std::filesystem::path enroll_file() const { return out_dir / "enroll.csv"; }
	std::filesystem::path references_file() const { return out_dir / "references.csv"; }
};

ExperimentConfig load_config(const std::filesystem::path &path);

/// Builds the campaign's device models (deterministic in config seed).
std::vector<sim::DeviceModel> build_devices(const ExperimentConfig &cfg);

struct SimulateResult {
	std::filesystem::path readings_file;
	std::filesystem::path enroll_file;
	std::size_t reading_count = 0;
	std::size_t enroll_count = 0;
};

/// Emits the measurement campaign (readings_per_temp runs per device and
/// temperature) plus a separate enrollment series at the reference temperature.
SimulateResult run_simulate(const ExperimentConfig &cfg);

struct EnrollResult {
	std::filesystem::path references_file;
	std::size_t device_count = 0;
};

/// Aggregates one reference per device from the enrollment readings.
EnrollResult run_enroll(const ExperimentConfig &cfg);

struct MetricsResult {
	// board type -> temperature -> grand-mean intra-HD over all readings
	std::map<std::string, std::map<int, double>> fhd_avg;
	// board type -> temperature -> per-reading intra-HD distribution
	std::map<std::string, std::map<int, DistributionSummary>> reliability;
	// board type -> temperature -> uniqueness of per-temperature references
	std::map<std::string, std::map<int, UniquenessReport>> uniqueness;
	std::vector<std::filesystem::path> report_files;
};

/// Computes reliability and uniqueness reports from the readings and
/// references on disk and writes the CSV reports.
MetricsResult run_metrics(const ExperimentConfig &cfg);

struct FeTrialTempStats {
	std::size_t attempts = 0;
	std::size_t successes = 0;
	std::size_t devices = 0;
	std::size_t devices_authenticated = 0; // majority of attempts succeeded

	double attempt_rate() const { return attempts ? static_cast<double>(successes) / attempts : 0.0; }
	double device_rate() const { return devices ? static_cast<double>(devices_authenticated) / devices : 0.0; }
};

struct FeTrialResult {
	std::map<int, FeTrialTempStats> per_temp;
	std::size_t helper_bytes = 0;
	double elapsed_seconds = 0.0;
	bool ref_temp_failure = false; // any failed attempt at the reference temperature
	std::filesystem::path report_file;
};

/// Enrolls the fuzzy extractor per device at the reference temperature and
/// attempts reproduction with every reading at every temperature.
FeTrialResult run_fe_trial(const ExperimentConfig &cfg);

} // namespace puf::harness

#endif
