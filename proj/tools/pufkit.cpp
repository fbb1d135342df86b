// pufkit: command-line driver for the SRAM-PUF experiment pipeline.
//
//   pufkit simulate --config campaign.conf        emit readings + enrollment runs
//   pufkit enroll   --config campaign.conf        aggregate per-device references
//   pufkit metrics  --config campaign.conf        reliability / uniqueness reports
//   pufkit fe-trial --config campaign.conf --t 5  key reproduction trial
//
// Exit codes: 0 success, 1 runtime/input error, 2 infeasible parameters,
// 3 reproduction failure at the reference temperature under --strict.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "puf/harness.hpp"

namespace {

struct Overrides {
	std::optional<std::string> config;
	std::optional<std::uint64_t> seed;
	std::optional<std::string> out_dir;
	std::optional<std::string> profile;
	std::optional<unsigned> fe_t;
	std::optional<unsigned> fe_k;
	std::optional<double> fe_delta;
	bool strict = false;
};

void add_common_options(CLI::App *cmd, Overrides &ov)
{
	cmd->add_option("--config", ov.config, "campaign config file (key = value lines)");
	cmd->add_option("--seed", ov.seed, "campaign RNG seed");
	cmd->add_option("--out-dir", ov.out_dir, "output directory for data and reports");
	cmd->add_option("--profile", ov.profile, "board profile: F401RE, F446RE or custom");
	cmd->add_option("--t", ov.fe_t, "fuzzy-extractor error tolerance");
	cmd->add_option("--k", ov.fe_k, "fuzzy-extractor subsample size in bits");
	cmd->add_option("--delta", ov.fe_delta, "fuzzy-extractor reproduction error target");
}

puf::harness::ExperimentConfig make_config(const Overrides &ov)
{
	puf::harness::ExperimentConfig cfg;
	if (ov.config) {
		cfg = puf::harness::load_config(*ov.config);
	}
	if (ov.profile) {
		cfg.set_profile(puf::sim::profile_from_string(*ov.profile));
	}
	if (ov.seed) {
		cfg.seed = *ov.seed;
	}
	if (ov.out_dir) {
		cfg.out_dir = *ov.out_dir;
	}
	if (ov.fe_t) {
		cfg.fe_params.t = static_cast<std::uint16_t>(*ov.fe_t);
	}
	if (ov.fe_k) {
		cfg.fe_params.k = static_cast<std::uint16_t>(*ov.fe_k);
	}
	if (ov.fe_delta) {
		cfg.fe_params.delta = *ov.fe_delta;
	}
	if (ov.strict) {
		cfg.strict = true;
	}
	return cfg;
}

int run(const std::string &command, const Overrides &ov)
{
	using namespace puf::harness;
	ExperimentConfig cfg = make_config(ov);
	if (command == "simulate") {
		SimulateResult res = run_simulate(cfg);
		std::cout << "wrote " << res.reading_count << " readings to " << res.readings_file.string() << "\n"
			  << "wrote " << res.enroll_count << " enrollment readings to " << res.enroll_file.string()
			  << "\n";
	} else if (command == "enroll") {
		EnrollResult res = run_enroll(cfg);
		std::cout << "enrolled " << res.device_count << " references to " << res.references_file.string()
			  << "\n";
	} else if (command == "metrics") {
		MetricsResult res = run_metrics(cfg);
		for (const auto &[board, by_temp] : res.fhd_avg) {
			for (const auto &[temp, avg] : by_temp) {
				std::cout << board << " @ " << temp << " degC: intra-HD " << avg * 100.0 << "%";
				auto bu = res.uniqueness.find(board);
				if (bu != res.uniqueness.end()) {
					auto tu = bu->second.find(temp);
					if (tu != bu->second.end()) {
						std::cout << ", inter-HD " << tu->second.mean * 100.0 << "%";
					}
				}
				std::cout << "\n";
			}
		}
		for (const auto &p : res.report_files) {
			std::cout << "wrote " << p.string() << "\n";
		}
	} else { // fe-trial
		FeTrialResult res = run_fe_trial(cfg);
		std::cout << "helper data: " << res.helper_bytes << " bytes per device\n";
		for (const auto &[temp, stats] : res.per_temp) {
			std::cout << temp << " degC: " << stats.successes << "/" << stats.attempts
				  << " attempts reproduced the key (" << stats.attempt_rate() * 100.0 << "%), "
				  << stats.devices_authenticated << "/" << stats.devices
				  << " devices authenticated\n";
		}
		std::cout << "wrote " << res.report_file.string() << " in " << res.elapsed_seconds << " s\n";
		if (cfg.strict && res.ref_temp_failure) {
			std::cerr << "pufkit: strict mode: a reproduction attempt failed at the reference "
				     "temperature\n";
			return 3;
		}
	}
	return 0;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"SRAM-PUF fingerprint simulation, metrics and key-reproduction toolkit"};
	app.require_subcommand(1);

	Overrides ov;
	add_common_options(app.add_subcommand("simulate", "generate a simulated measurement campaign"), ov);
	add_common_options(app.add_subcommand("enroll", "aggregate reference fingerprints from enrollment runs"), ov);
	add_common_options(app.add_subcommand("metrics", "compute reliability and uniqueness reports"), ov);
	CLI::App *fe = app.add_subcommand("fe-trial", "enroll and reproduce fuzzy-extractor keys");
	add_common_options(fe, ov);
	fe->add_flag("--strict", ov.strict, "exit 3 if any attempt fails at the reference temperature");

	CLI11_PARSE(app, argc, argv);

	try {
		return run(app.get_subcommands().front()->get_name(), ov);
	} catch (const puf::InfeasibleParamsError &e) {
		std::cerr << "pufkit: infeasible parameters: " << e.what() << "\n";
		return 2;
	} catch (const std::exception &e) {
		std::cerr << "pufkit: error: " << e.what() << "\n";
		return 1;
	}
}
