#include "puf/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "puf/detail/rng.hpp"
#include "puf/readings_io.hpp"

namespace puf::harness {

namespace {

std::string trim(const std::string &s)
{
	std::size_t b = s.find_first_not_of(" \t");
	if (b == std::string::npos) {
		return "";
	}
	std::size_t e = s.find_last_not_of(" \t");
	return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string &v, const std::string &key)
{
	try {
		std::size_t used = 0;
		unsigned long long x = std::stoull(v, &used);
		if (used != v.size()) {
			throw std::invalid_argument(v);
		}
		return x;
	} catch (const std::exception &) {
		throw IoError("config key '" + key + "': not a non-negative integer: '" + v + "'");
	}
}

int parse_i(const std::string &v, const std::string &key)
{
	try {
		std::size_t used = 0;
		int x = std::stoi(v, &used);
		if (used != v.size()) {
			throw std::invalid_argument(v);
		}
		return x;
	} catch (const std::exception &) {
		throw IoError("config key '" + key + "': not an integer: '" + v + "'");
	}
}

double parse_d(const std::string &v, const std::string &key)
{
	try {
		std::size_t used = 0;
		double x = std::stod(v, &used);
		if (used != v.size()) {
			throw std::invalid_argument(v);
		}
		return x;
	} catch (const std::exception &) {
		throw IoError("config key '" + key + "': not a number: '" + v + "'");
	}
}

bool parse_b(const std::string &v, const std::string &key)
{
	if (v == "1" || v == "true" || v == "yes" || v == "on") {
		return true;
	}
	if (v == "0" || v == "false" || v == "no" || v == "off") {
		return false;
	}
	throw IoError("config key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<int> parse_temp_list(const std::string &v, const std::string &key)
{
	std::vector<int> temps;
	std::stringstream ss(v);
	std::string item;
	while (std::getline(ss, item, ',')) {
		temps.push_back(parse_i(trim(item), key));
	}
	if (temps.empty()) {
		throw IoError("config key '" + key + "': empty temperature list");
	}
	return temps;
}

std::string format_percent(double fraction)
{
	std::ostringstream os;
	os << std::fixed << std::setprecision(4) << fraction * 100.0;
	return os.str();
}

std::string format_rate(double v)
{
	std::ostringstream os;
	os << std::fixed << std::setprecision(6) << v;
	return os.str();
}

// enrollment runs live in a disjoint run-index range so their per-cell draws
// never overlap the evaluation readings
constexpr std::uint32_t kEnrollRunBase = 1000000;

std::map<std::string, std::vector<Reading>> group_by_device(std::span<const Reading> readings)
{
	std::map<std::string, std::vector<Reading>> by_device;
	for (const Reading &r : readings) {
		by_device[r.device_id].push_back(r);
	}
	return by_device;
}

} // namespace

void ExperimentConfig::set_profile(sim::BoardProfile p)
{
	profile = p;
	targets = sim::default_targets(p);
	hot_flip_fraction = sim::default_hot_flip_fraction(p);
}

void ExperimentConfig::validate() const
{
	if (device_count == 0) {
		throw ValidationError("a campaign needs at least one device");
	}
	if (cell_count == 0 || cell_count % 8 != 0) {
		throw ValidationError("cell count must be a positive multiple of 8");
	}
	if (readings_per_temp == 0 || enroll_count == 0) {
		throw ValidationError("reading counts must be positive");
	}
	if (temps.empty()) {
		throw ValidationError("at least one temperature point is required");
	}
	if (std::find(temps.begin(), temps.end(), ref_temp_c) == temps.end()) {
		throw ValidationError("the reference temperature must be one of the campaign temperatures");
	}
	if (fe_params.n != cell_count) {
		throw ValidationError("fuzzy-extractor n must equal the cell count");
	}
	fe_params.validate();
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in) {
		throw IoError("cannot open config file: " + path.string());
	}
	std::map<std::string, std::string> kv;
	std::string line;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		if (!line.empty() && line.back() == '\r') {
			line.pop_back();
		}
		std::string stripped = trim(line);
		if (stripped.empty() || stripped.front() == '#') {
			continue;
		}
		std::size_t eq = stripped.find('=');
		if (eq == std::string::npos) {
			throw IoError(path.filename().string() + ":" + std::to_string(line_no) +
				      ": expected key = value");
		}
		kv[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
	}

	ExperimentConfig cfg;
	// the profile resets target defaults, so apply it before any target key
	if (auto it = kv.find("profile"); it != kv.end()) {
		cfg.set_profile(sim::profile_from_string(it->second));
		kv.erase(it);
	}
	for (const auto &[key, value] : kv) {
		if (key == "devices") {
			cfg.device_count = parse_u64(value, key);
		} else if (key == "cells") {
			cfg.cell_count = parse_u64(value, key);
		} else if (key == "temps") {
			cfg.temps = parse_temp_list(value, key);
		} else if (key == "ref_temp") {
			cfg.ref_temp_c = parse_i(value, key);
		} else if (key == "readings_per_temp") {
			cfg.readings_per_temp = parse_u64(value, key);
		} else if (key == "enroll_readings") {
			cfg.enroll_count = parse_u64(value, key);
		} else if (key == "seed") {
			cfg.seed = parse_u64(value, key);
		} else if (key == "out_dir") {
			cfg.out_dir = value;
		} else if (key == "fe_k") {
			cfg.fe_params.k = static_cast<std::uint16_t>(parse_u64(value, key));
		} else if (key == "fe_t") {
			cfg.fe_params.t = static_cast<std::uint16_t>(parse_u64(value, key));
		} else if (key == "fe_s") {
			cfg.fe_params.s = static_cast<std::uint16_t>(parse_u64(value, key));
		} else if (key == "fe_key_len") {
			cfg.fe_params.key_len = static_cast<std::uint16_t>(parse_u64(value, key));
		} else if (key == "fe_delta") {
			cfg.fe_params.delta = parse_d(value, key);
		} else if (key == "target_fhd10") {
			cfg.targets.fhd10 = parse_d(value, key);
		} else if (key == "target_fhd25") {
			cfg.targets.fhd25 = parse_d(value, key);
		} else if (key == "target_fhd50") {
			cfg.targets.fhd50 = parse_d(value, key);
		} else if (key == "weak_fraction") {
			cfg.targets.weak_fraction = parse_d(value, key);
		} else if (key == "hot_flip_fraction") {
			cfg.hot_flip_fraction = parse_d(value, key);
		} else if (key == "strict") {
			cfg.strict = parse_b(value, key);
		} else {
			throw IoError("unknown config key: '" + key + "'");
		}
	}
	cfg.fe_params.n = static_cast<std::uint16_t>(cfg.cell_count);
	return cfg;
}

std::vector<sim::DeviceModel> build_devices(const ExperimentConfig &cfg)
{
	std::vector<sim::DeviceModel> devices;
	devices.reserve(cfg.device_count);
	for (std::size_t i = 0; i < cfg.device_count; ++i) {
		sim::DeviceModel model = sim::synth_device(cfg.profile, cfg.cell_count,
							   detail::mix64(cfg.seed, i), cfg.targets,
							   cfg.hot_flip_fraction);
		std::ostringstream id;
		id << sim::to_string(cfg.profile) << "-" << std::setw(2) << std::setfill('0') << i;
		model.device_id = id.str();
		devices.push_back(std::move(model));
	}
	return devices;
}

SimulateResult run_simulate(const ExperimentConfig &cfg)
{
	cfg.validate();
	std::vector<sim::DeviceModel> devices = build_devices(cfg);

	std::vector<Reading> readings;
	readings.reserve(cfg.device_count * cfg.temps.size() * cfg.readings_per_temp);
	std::vector<Reading> enroll;
	enroll.reserve(cfg.device_count * cfg.enroll_count);
	for (const sim::DeviceModel &model : devices) {
		for (int temp : cfg.temps) {
			for (std::uint32_t run = 0; run < cfg.readings_per_temp; ++run) {
				readings.push_back(sim::sample_reading(model, temp, run));
			}
		}
		for (std::uint32_t run = 0; run < cfg.enroll_count; ++run) {
			enroll.push_back(sim::sample_reading(model, cfg.ref_temp_c, kEnrollRunBase + run));
		}
	}

	SimulateResult res;
	res.readings_file = cfg.readings_file();
	res.enroll_file = cfg.enroll_file();
	res.reading_count = readings.size();
	res.enroll_count = enroll.size();
	io::write_readings(res.readings_file, readings);
	io::write_readings(res.enroll_file, enroll);
	return res;
}

EnrollResult run_enroll(const ExperimentConfig &cfg)
{
	std::vector<Reading> enroll = io::load_readings(cfg.enroll_file());
	if (enroll.empty()) {
		throw ValidationError("enrollment file is empty: " + cfg.enroll_file().string());
	}
	const std::string board_type = enroll.front().board_type;

	std::vector<ReferenceFingerprint> refs;
	for (const auto &[device, device_readings] : group_by_device(enroll)) {
		std::vector<Reading> at_ref;
		for (const Reading &r : device_readings) {
			if (r.nominal_temp_c == cfg.ref_temp_c) {
				at_ref.push_back(r);
			}
		}
		if (at_ref.empty()) {
			throw ValidationError("device '" + device + "' has no enrollment readings at " +
					      std::to_string(cfg.ref_temp_c) + " degC");
		}
		refs.push_back(aggregate_reference(at_ref, cfg.ref_temp_c));
	}

	EnrollResult res;
	res.references_file = cfg.references_file();
	res.device_count = refs.size();
	io::write_references(res.references_file, refs, board_type);
	return res;
}

MetricsResult run_metrics(const ExperimentConfig &cfg)
{
	std::vector<Reading> readings = io::load_readings(cfg.readings_file());
	std::vector<ReferenceFingerprint> refs = io::load_references(cfg.references_file());
	if (readings.empty()) {
		throw ValidationError("readings file is empty: " + cfg.readings_file().string());
	}

	std::map<std::string, const ReferenceFingerprint *> ref_by_device;
	for (const ReferenceFingerprint &ref : refs) {
		ref_by_device[ref.device_id] = &ref;
	}

	MetricsResult res;
	std::map<std::string, std::map<int, std::vector<double>>> samples;
	std::string intra_csv = "# device_id,board_type,nominal_temp_c,run_index,fhd\n";
	for (const Reading &r : readings) {
		auto it = ref_by_device.find(r.device_id);
		if (it == ref_by_device.end()) {
			throw ValidationError("no reference enrolled for device '" + r.device_id + "'");
		}
		double d = fhd(r.fingerprint, it->second->fingerprint);
		samples[r.board_type][r.nominal_temp_c].push_back(d);
		intra_csv += r.device_id + "," + r.board_type + "," + std::to_string(r.nominal_temp_c) + "," +
			     std::to_string(r.run_index) + "," + format_rate(d) + "\n";
	}

	std::string summary_csv =
	    "# board_type,nominal_temp_c,fhd_avg_pct,fhd_std_pct,fhd_min_pct,fhd_max_pct,reading_count\n";
	for (const auto &[board, by_temp] : samples) {
		for (const auto &[temp, values] : by_temp) {
			DistributionSummary d = distribution_summary(values);
			res.fhd_avg[board][temp] = d.mean;
			res.reliability[board][temp] = d;
			summary_csv += board + "," + std::to_string(temp) + "," + format_percent(d.mean) + "," +
				       format_percent(d.std_dev) + "," + format_percent(d.min) + "," +
				       format_percent(d.max) + "," + std::to_string(d.count) + "\n";
		}
	}

	// uniqueness compares per-temperature references: each device's readings at
	// one temperature are majority-aggregated, then all device pairs measured
	std::string uniq_csv = "# board_type,nominal_temp_c,pair_count,mean_pct,std_pct\n";
	std::map<std::string, std::map<std::string, std::vector<Reading>>> by_board_device;
	for (const Reading &r : readings) {
		by_board_device[r.board_type][r.device_id].push_back(r);
	}
	for (const auto &[board, by_device] : by_board_device) {
		std::map<int, std::vector<ReferenceFingerprint>> temp_refs;
		for (const auto &[device, device_readings] : by_device) {
			for (const auto &[temp, bucket] : group_readings(device_readings)) {
				temp_refs[temp].push_back(aggregate_reference(bucket, temp));
			}
		}
		for (const auto &[temp, refs_at_temp] : temp_refs) {
			if (refs_at_temp.size() < 2) {
				continue;
			}
			UniquenessReport rep = inter_hd(refs_at_temp);
			uniq_csv += board + "," + std::to_string(temp) + "," +
				    std::to_string(rep.pairwise.size()) + "," + format_percent(rep.mean) + "," +
				    format_percent(rep.std_dev) + "\n";
			res.uniqueness[board][temp] = std::move(rep);
		}
	}

	const std::filesystem::path intra_path = cfg.out_dir / "intra_fhd.csv";
	const std::filesystem::path summary_path = cfg.out_dir / "summary.csv";
	const std::filesystem::path uniq_path = cfg.out_dir / "uniqueness.csv";
	io::write_text_atomic(intra_path, intra_csv);
	io::write_text_atomic(summary_path, summary_csv);
	io::write_text_atomic(uniq_path, uniq_csv);
	res.report_files = {intra_path, summary_path, uniq_path};
	return res;
}

FeTrialResult run_fe_trial(const ExperimentConfig &cfg)
{
	cfg.validate();
	std::vector<Reading> readings = io::load_readings(cfg.readings_file());
	std::vector<ReferenceFingerprint> refs = io::load_references(cfg.references_file());
	if (refs.empty()) {
		throw ValidationError("no enrolled references: " + cfg.references_file().string());
	}

	std::map<std::string, const ReferenceFingerprint *> ref_by_device;
	for (const ReferenceFingerprint &ref : refs) {
		ref_by_device[ref.device_id] = &ref;
	}

	FeTrialResult res;
	res.helper_bytes = fe::helper_size(cfg.fe_params);

	const auto start = std::chrono::steady_clock::now();
	std::size_t device_index = 0;
	for (const auto &[device, device_readings] : group_by_device(readings)) {
		auto it = ref_by_device.find(device);
		if (it == ref_by_device.end()) {
			throw ValidationError("no reference enrolled for device '" + device + "'");
		}
		auto [key, helper] = fe::gen(it->second->fingerprint, cfg.fe_params,
					     detail::mix64(cfg.seed, 0x66652d747269616cull, device_index));
		++device_index;
		for (const auto &[temp, bucket] : group_readings(device_readings)) {
			FeTrialTempStats &stats = res.per_temp[temp];
			std::size_t ok = 0;
			for (const Reading &r : bucket) {
				std::optional<fe::Key> got = fe::rep(r.fingerprint, helper);
				if (got && *got == key) {
					++ok;
				} else if (temp == cfg.ref_temp_c) {
					res.ref_temp_failure = true;
				}
			}
			stats.attempts += bucket.size();
			stats.successes += ok;
			stats.devices += 1;
			if (2 * ok > bucket.size()) {
				stats.devices_authenticated += 1;
			}
		}
	}
	res.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

	std::ostringstream csv;
	csv << "# fe trial: n=" << cfg.fe_params.n << " k=" << cfg.fe_params.k << " t=" << cfg.fe_params.t
	    << " delta=" << cfg.fe_params.delta << " lockers=" << fe::locker_count(cfg.fe_params)
	    << " helper_bytes=" << res.helper_bytes << "\n";
	csv << "# nominal_temp_c,attempts,successes,attempt_rate,devices,devices_authenticated,device_rate\n";
	for (const auto &[temp, stats] : res.per_temp) {
		csv << temp << "," << stats.attempts << "," << stats.successes << ","
		    << format_rate(stats.attempt_rate()) << "," << stats.devices << ","
		    << stats.devices_authenticated << "," << format_rate(stats.device_rate()) << "\n";
	}
	res.report_file = cfg.out_dir / "fe_trial.csv";
	io::write_text_atomic(res.report_file, csv.str());
	return res;
}

} // namespace puf::harness
