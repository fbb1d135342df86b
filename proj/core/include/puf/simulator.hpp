#ifndef PUF_SIMULATOR_HPP
#define PUF_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "puf/fingerprint.hpp"

namespace puf::sim {

enum class BoardProfile { F401RE_Like, F446RE_Like, Custom };

std::string to_string(BoardProfile profile);
BoardProfile profile_from_string(const std::string &name);

/**
 * Per-cell probabilistic start-up model.
 *
 * p_ref is the probability of powering up to 1 at the 25 degC reference.
 * Away from the reference the flip probability grows linearly (independent
 * cold/hot slopes, in probability per degC), which moves p toward 0.5 and
 * clamps there. Cells marked hot_flip change their preferred value to
 * hot_flip_target at temperatures >= hot_flip_temp_c, keeping their reference
 * reliability at the new polarity; this is the mechanism behind the
 * device-correlated high-temperature drift of whole fingerprints.
 */
struct CellModel {
	double p_ref = 0.5;
	double sens_cold = 0.0;
	double sens_hot = 0.0;
	bool hot_flip = false;
	bool hot_flip_target = false;
	double hot_flip_temp_c = 40.0;

	double prob_one_at(double temp_c) const;
};

/// Mean intra-HD targets per temperature point plus the weak-cell share.
struct NoiseTargets {
	double fhd10 = 0.0;
	double fhd25 = 0.0;
	double fhd50 = 0.0;
	double weak_fraction = 0.04;
};

/// Built-in noise figures for a board profile (fractions, not percent).
NoiseTargets default_targets(BoardProfile profile);

/// Share of cells that change their preferred value between 25 and 50 degC,
/// correlated per device. Nonzero only for the F446RE-like profile, whose
/// in-class variance visibly grows with temperature.
double default_hot_flip_fraction(BoardProfile profile);

/// Closed-form parameter choices that make the expected intra-HD hit the
/// targets exactly. Throws CalibrationError when a target is unattainable.
struct SimCalibration {
	std::size_t weak_count = 0;
	std::size_t hot_flip_count = 0; // cells per device that flip preference when hot
	double q10 = 0.0;		// strong-cell flip probability at each temperature point
	double q25 = 0.0;
	double q50 = 0.0;
	double sens_cold = 0.0;
	double sens_hot = 0.0;
};

SimCalibration calibrate(const NoiseTargets &targets, std::size_t cell_count, double hot_flip_fraction);

struct DeviceModel {
	std::string device_id;
	BoardProfile profile = BoardProfile::Custom;
	std::uint64_t seed = 0;
	std::vector<CellModel> cells;

	std::size_t cell_count() const { return cells.size(); }

	/// The most likely start-up pattern at 25 degC (ties round to 0).
	ReferenceFingerprint reference() const;
};

/// Deterministic in (profile, cell_count, seed). Roughly half of the strong
/// cells favor 1, so references of independent devices differ in ~50% of bits.
DeviceModel synth_device(BoardProfile profile, std::size_t cell_count, std::uint64_t seed);

/// Same, with explicit targets (used for custom profiles and tests).
DeviceModel synth_device(BoardProfile profile, std::size_t cell_count, std::uint64_t seed,
			 const NoiseTargets &targets, double hot_flip_fraction);

/// Analytic expected FHD of a fresh reading at temp_c against the reference:
/// mean over cells of p_i(T) where the reference bit is 0 and 1-p_i(T) where it is 1.
double expected_fhd(const DeviceModel &model, const ReferenceFingerprint &reference, double temp_c);

/// One simulated power-up: independent Bernoulli draw per cell, deterministic
/// in (model.seed, temp_c, run_index). The sensor temperature carries bounded
/// per-run jitter like a real on-chip sensor.
Reading sample_reading(const DeviceModel &model, int temp_c, std::uint32_t run_index);

} // namespace puf::sim

#endif
