#include <benchmark/benchmark.h>

#include "puf/fuzzy_extractor.hpp"
#include "puf/simulator.hpp"

namespace {

puf::fe::FEParams params_with_t(std::uint16_t t)
{
	puf::fe::FEParams p;
	p.t = t;
	return p;
}

void BM_FeGen(benchmark::State &state)
{
	auto params = params_with_t(static_cast<std::uint16_t>(state.range(0)));
	auto model = puf::sim::synth_device(puf::sim::BoardProfile::F446RE_Like, params.n, 21);
	auto ref = model.reference();
	std::uint64_t seed = 0;
	for (auto _ : state) {
		benchmark::DoNotOptimize(puf::fe::gen(ref.fingerprint, params, seed++));
	}
	state.counters["lockers"] = static_cast<double>(puf::fe::locker_count(params));
}
BENCHMARK(BM_FeGen)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_FeRepMatch(benchmark::State &state)
{
	auto params = params_with_t(static_cast<std::uint16_t>(state.range(0)));
	auto model = puf::sim::synth_device(puf::sim::BoardProfile::F446RE_Like, params.n, 21);
	auto ref = model.reference();
	auto [key, helper] = puf::fe::gen(ref.fingerprint, params, 3);
	auto reading = puf::sim::sample_reading(model, 25, 0);
	for (auto _ : state) {
		benchmark::DoNotOptimize(puf::fe::rep(reading.fingerprint, helper));
	}
}
BENCHMARK(BM_FeRepMatch)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_FeRepMismatch(benchmark::State &state)
{
	// worst case: a foreign fingerprint scans every locker without unlocking
	auto params = params_with_t(static_cast<std::uint16_t>(state.range(0)));
	auto model = puf::sim::synth_device(puf::sim::BoardProfile::F446RE_Like, params.n, 21);
	auto other = puf::sim::synth_device(puf::sim::BoardProfile::F446RE_Like, params.n, 22);
	auto [key, helper] = puf::fe::gen(model.reference().fingerprint, params, 3);
	auto reading = puf::sim::sample_reading(other, 25, 0);
	for (auto _ : state) {
		benchmark::DoNotOptimize(puf::fe::rep(reading.fingerprint, helper));
	}
}
BENCHMARK(BM_FeRepMismatch)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_FeSerialize(benchmark::State &state)
{
	auto params = params_with_t(static_cast<std::uint16_t>(state.range(0)));
	auto model = puf::sim::synth_device(puf::sim::BoardProfile::F446RE_Like, params.n, 21);
	auto [key, helper] = puf::fe::gen(model.reference().fingerprint, params, 3);
	for (auto _ : state) {
		benchmark::DoNotOptimize(puf::fe::serialize(helper));
	}
	state.counters["bytes"] = static_cast<double>(puf::fe::helper_size(params));
}
BENCHMARK(BM_FeSerialize)->Arg(4)->Arg(5);

} // namespace

BENCHMARK_MAIN();
