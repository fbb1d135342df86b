#include <benchmark/benchmark.h>

#include "puf/metrics.hpp"
#include "puf/simulator.hpp"

namespace {

std::vector<puf::ReferenceFingerprint> make_references(std::size_t count, std::size_t cells)
{
	std::vector<puf::ReferenceFingerprint> refs;
	for (std::size_t i = 0; i < count; ++i) {
		auto model = puf::sim::synth_device(puf::sim::BoardProfile::F446RE_Like, cells, 1000 + i);
		auto ref = model.reference();
		ref.device_id = "dev-" + std::to_string(i);
		refs.push_back(std::move(ref));
	}
	return refs;
}

void BM_Fhd(benchmark::State &state)
{
	const auto cells = static_cast<std::size_t>(state.range(0));
	auto refs = make_references(2, cells);
	for (auto _ : state) {
		benchmark::DoNotOptimize(puf::fhd(refs[0].fingerprint, refs[1].fingerprint));
	}
	state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * cells / 8));
}
BENCHMARK(BM_Fhd)->Arg(128)->Arg(4096)->Arg(65536);

void BM_InterHd(benchmark::State &state)
{
	auto refs = make_references(static_cast<std::size_t>(state.range(0)), 128);
	for (auto _ : state) {
		benchmark::DoNotOptimize(puf::inter_hd(refs));
	}
}
BENCHMARK(BM_InterHd)->Arg(14)->Arg(64);

void BM_SampleReading(benchmark::State &state)
{
	auto model = puf::sim::synth_device(puf::sim::BoardProfile::F446RE_Like,
					    static_cast<std::size_t>(state.range(0)), 7);
	std::uint32_t run = 0;
	for (auto _ : state) {
		benchmark::DoNotOptimize(puf::sim::sample_reading(model, 25, run++));
	}
}
BENCHMARK(BM_SampleReading)->Arg(128)->Arg(4096);

} // namespace
