#include "puf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "puf/detail/rng.hpp"

namespace puf::sim {

namespace {

constexpr double kRefTemp = 25.0;
constexpr double kColdTemp = 10.0;
constexpr double kHotTemp = 50.0;

std::uint64_t profile_tag(BoardProfile profile)
{
	switch (profile) {
	case BoardProfile::F401RE_Like:
		return 0x4634303152455f4cull;
	case BoardProfile::F446RE_Like:
		return 0x4634343652455f4cull;
	case BoardProfile::Custom:
		return 0x435553544f4d5f30ull;
	}
	return 0;
}

/// First `count` entries of a seeded partial Fisher-Yates over [0, n).
std::vector<std::uint32_t> sample_indices(std::mt19937_64 &rng, std::size_t n, std::size_t count)
{
	std::vector<std::uint32_t> idx(n);
	std::iota(idx.begin(), idx.end(), 0u);
	for (std::size_t i = 0; i < count; ++i) {
		std::size_t j = i + static_cast<std::size_t>(detail::next_below(rng, n - i));
		std::swap(idx[i], idx[j]);
	}
	idx.resize(count);
	return idx;
}

} // namespace

std::string to_string(BoardProfile profile)
{
	switch (profile) {
	case BoardProfile::F401RE_Like:
		return "F401RE";
	case BoardProfile::F446RE_Like:
		return "F446RE";
	case BoardProfile::Custom:
		return "SIM";
	}
	return "SIM";
}

BoardProfile profile_from_string(const std::string &name)
{
	if (name == "F401RE" || name == "f401re") {
		return BoardProfile::F401RE_Like;
	}
	if (name == "F446RE" || name == "f446re") {
		return BoardProfile::F446RE_Like;
	}
	if (name == "custom" || name == "SIM" || name == "sim") {
		return BoardProfile::Custom;
	}
	throw ValidationError("unknown board profile: " + name);
}

NoiseTargets default_targets(BoardProfile profile)
{
	switch (profile) {
	case BoardProfile::F401RE_Like:
		return {0.0529, 0.0387, 0.0535, 0.04};
	case BoardProfile::F446RE_Like:
		return {0.0679, 0.0424, 0.0772, 0.04};
	case BoardProfile::Custom:
		return {0.0, 0.0, 0.0, 0.0};
	}
	return {};
}

double default_hot_flip_fraction(BoardProfile profile)
{
	return profile == BoardProfile::F446RE_Like ? 0.0625 : 0.0;
}

double CellModel::prob_one_at(double temp_c) const
{
	if (hot_flip && temp_c >= hot_flip_temp_c) {
		double q = std::min(p_ref, 1.0 - p_ref);
		return hot_flip_target ? 1.0 - q : q;
	}
	double bias = p_ref - 0.5;
	double delta = temp_c < kRefTemp ? sens_cold * (kRefTemp - temp_c) : sens_hot * (temp_c - kRefTemp);
	double mag = std::max(0.0, std::abs(bias) - delta);
	return bias < 0.0 ? 0.5 - mag : 0.5 + mag;
}

SimCalibration calibrate(const NoiseTargets &targets, std::size_t cell_count, double hot_flip_fraction)
{
	if (cell_count == 0) {
		throw ValidationError("cell count must be positive");
	}
	for (double f : {targets.fhd10, targets.fhd25, targets.fhd50}) {
		if (!(f >= 0.0 && f <= 0.5)) {
			throw CalibrationError("noise targets must lie in [0, 0.5]");
		}
	}
	if (!(targets.weak_fraction >= 0.0 && targets.weak_fraction <= 1.0) ||
	    !(hot_flip_fraction >= 0.0 && hot_flip_fraction < 1.0)) {
		throw CalibrationError("weak and hot-flip fractions out of range");
	}

	SimCalibration cal;
	const auto n = static_cast<double>(cell_count);
	cal.weak_count = static_cast<std::size_t>(std::llround(targets.weak_fraction * n));
	std::size_t susceptible = static_cast<std::size_t>(std::llround(hot_flip_fraction * n)) & ~std::size_t{1};
	cal.hot_flip_count = susceptible / 2;
	if (cal.weak_count + susceptible >= cell_count) {
		throw CalibrationError("weak and susceptible cells leave no strong cells");
	}
	const double strong = n - static_cast<double>(cal.weak_count);
	const double weak_noise = 0.5 * static_cast<double>(cal.weak_count);

	auto solve_strong_rate = [&](double target, double flipped_noise, double flipped_cells, const char *label) {
		double q = (target * n - weak_noise - flipped_noise) / (strong - flipped_cells);
		if (!(q >= 0.0 && q <= 0.5)) {
			throw CalibrationError(std::string("unattainable noise target at ") + label +
					       ": weak-cell noise alone exceeds it, or it demands flip rates over 0.5");
		}
		return q;
	};

	cal.q25 = solve_strong_rate(targets.fhd25, 0.0, 0.0, "25 degC");
	cal.q10 = solve_strong_rate(targets.fhd10, 0.0, 0.0, "10 degC");
	const auto flipped = static_cast<double>(cal.hot_flip_count);
	cal.q50 = solve_strong_rate(targets.fhd50, flipped * (1.0 - cal.q25), flipped, "50 degC");
	if (cal.q10 < cal.q25 || cal.q50 < cal.q25) {
		throw CalibrationError("noise targets fall below the 25 degC reference; "
				       "flip rates must not shrink away from the enrollment temperature");
	}
	cal.sens_cold = (cal.q10 - cal.q25) / (kRefTemp - kColdTemp);
	cal.sens_hot = (cal.q50 - cal.q25) / (kHotTemp - kRefTemp);
	return cal;
}

ReferenceFingerprint DeviceModel::reference() const
{
	ReferenceFingerprint ref;
	ref.fingerprint = Fingerprint(cells.size());
	ref.tie_mask = Fingerprint(cells.size());
	ref.device_id = device_id;
	ref.source_temp_c = static_cast<int>(kRefTemp);
	ref.source_count = 1;
	for (std::size_t i = 0; i < cells.size(); ++i) {
		if (cells[i].p_ref > 0.5) {
			ref.fingerprint.set_bit(i, true);
		} else if (cells[i].p_ref == 0.5) {
			ref.tie_mask.set_bit(i, true);
		}
	}
	return ref;
}

DeviceModel synth_device(BoardProfile profile, std::size_t cell_count, std::uint64_t seed)
{
	return synth_device(profile, cell_count, seed, default_targets(profile), default_hot_flip_fraction(profile));
}

DeviceModel synth_device(BoardProfile profile, std::size_t cell_count, std::uint64_t seed,
			 const NoiseTargets &targets, double hot_flip_fraction)
{
	const SimCalibration cal = calibrate(targets, cell_count, hot_flip_fraction);
	const std::size_t susceptible_count = 2 * cal.hot_flip_count;

	// The susceptible cells and their hot-drift pattern are a property of the
	// board layout, shared by every device of the profile.
	std::mt19937_64 layout_rng(detail::mix64(profile_tag(profile), cell_count));
	std::vector<std::uint32_t> susceptible = sample_indices(layout_rng, cell_count, susceptible_count);
	std::vector<bool> drift_pattern(susceptible_count);
	for (std::size_t i = 0; i < susceptible_count; ++i) {
		drift_pattern[i] = detail::next_bit(layout_rng);
	}

	std::mt19937_64 rng(detail::mix64(seed, 0x6465766963657331ull));
	const bool polarity = detail::next_bit(rng);

	std::vector<bool> is_susceptible(cell_count, false);
	for (std::uint32_t i : susceptible) {
		is_susceptible[i] = true;
	}

	// weak cells are drawn from the non-susceptible remainder
	std::vector<bool> is_weak(cell_count, false);
	{
		std::vector<std::uint32_t> pool;
		pool.reserve(cell_count - susceptible_count);
		for (std::uint32_t i = 0; i < cell_count; ++i) {
			if (!is_susceptible[i]) {
				pool.push_back(i);
			}
		}
		for (std::size_t i = 0; i < cal.weak_count; ++i) {
			std::size_t j = i + static_cast<std::size_t>(detail::next_below(rng, pool.size() - i));
			std::swap(pool[i], pool[j]);
			is_weak[pool[i]] = true;
		}
	}

	// exactly half of the susceptible cells already prefer their hot target;
	// the other half flips preference when hot
	std::vector<std::size_t> order(susceptible_count);
	std::iota(order.begin(), order.end(), std::size_t{0});
	for (std::size_t i = 0; i + 1 < order.size(); ++i) {
		std::size_t j = i + static_cast<std::size_t>(detail::next_below(rng, order.size() - i));
		std::swap(order[i], order[j]);
	}

	DeviceModel model;
	model.device_id = to_string(profile) + "-" + std::to_string(seed);
	model.profile = profile;
	model.seed = seed;
	model.cells.resize(cell_count);

	for (std::size_t i = 0; i < cell_count; ++i) {
		CellModel &cell = model.cells[i];
		if (is_weak[i]) {
			cell.p_ref = 0.5;
			continue;
		}
		cell.sens_cold = cal.sens_cold;
		cell.sens_hot = cal.sens_hot;
		if (!is_susceptible[i]) {
			cell.p_ref = detail::next_bit(rng) ? 1.0 - cal.q25 : cal.q25;
		}
	}
	for (std::size_t rank = 0; rank < susceptible_count; ++rank) {
		std::size_t slot = order[rank];
		CellModel &cell = model.cells[susceptible[slot]];
		const bool target = polarity ? drift_pattern[slot] : !drift_pattern[slot];
		const bool agrees = rank < cal.hot_flip_count; // first half starts at the target already
		const bool pref = agrees ? target : !target;
		cell.p_ref = pref ? 1.0 - cal.q25 : cal.q25;
		if (!agrees) {
			cell.hot_flip = true;
			cell.hot_flip_target = target;
		}
	}
	return model;
}

double expected_fhd(const DeviceModel &model, const ReferenceFingerprint &reference, double temp_c)
{
	if (reference.fingerprint.length_bits() != model.cell_count()) {
		throw ValidationError("reference length does not match the device model");
	}
	double sum = 0.0;
	for (std::size_t i = 0; i < model.cell_count(); ++i) {
		double p = model.cells[i].prob_one_at(temp_c);
		sum += reference.fingerprint.bit(i) ? 1.0 - p : p;
	}
	return sum / static_cast<double>(model.cell_count());
}

Reading sample_reading(const DeviceModel &model, int temp_c, std::uint32_t run_index)
{
	std::mt19937_64 rng(detail::mix64(model.seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(temp_c)),
					  static_cast<std::uint64_t>(run_index)));
	Reading r;
	r.device_id = model.device_id;
	r.board_type = to_string(model.profile);
	r.nominal_temp_c = temp_c;
	r.sensor_temp_c = static_cast<double>(temp_c) + (detail::next_double(rng) * 3.0 - 1.5);
	r.run_index = run_index;
	r.fingerprint = Fingerprint(model.cell_count());
	for (std::size_t i = 0; i < model.cell_count(); ++i) {
		if (detail::next_double(rng) < model.cells[i].prob_one_at(static_cast<double>(temp_c))) {
			r.fingerprint.set_bit(i, true);
		}
	}
	return r;
}

} // namespace puf::sim
