// Serial reference vs OpenMP verifier on the exhaustive and sweep paths.
#include <benchmark/benchmark.h>

#include "mvc/registry.hpp"
#include "mvc/verifier.hpp"

using namespace mvc;

namespace {

void run(benchmark::State& state, const char* scheme, VerifyMode mode, VerifyEngine engine) {
	const auto s = make_scheme({scheme, SchemeConfig(4, 2, CorrelationModel(8, 1, 2))});
	VerifyOptions o;
	o.mode = mode;
	o.engine = engine;
	o.trials = 200;
	o.jobs = static_cast<int>(state.range(0));
	std::uint64_t decodes = 0;
	for (auto _ : state) {
		const auto rep = verify_requirement_A(*s, o);
		decodes += rep.decodes;
		benchmark::DoNotOptimize(rep.failures);
	}
	state.counters["decodes/s"] = benchmark::Counter(static_cast<double>(decodes), benchmark::Counter::kIsRate);
}

void BM_ExhaustiveSerial(benchmark::State& st) { run(st, "mds", VerifyMode::Exhaustive, VerifyEngine::SerialReference); }
void BM_ExhaustiveParallel(benchmark::State& st) { run(st, "mds", VerifyMode::Exhaustive, VerifyEngine::Parallel); }
void BM_DeltaSerial(benchmark::State& st) { run(st, "delta", VerifyMode::Exhaustive, VerifyEngine::SerialReference); }
void BM_DeltaParallel(benchmark::State& st) { run(st, "delta", VerifyMode::Exhaustive, VerifyEngine::Parallel); }
void BM_BinningSweepSerial(benchmark::State& st) { run(st, "binning", VerifyMode::Sweep, VerifyEngine::SerialReference); }
void BM_BinningSweepParallel(benchmark::State& st) { run(st, "binning", VerifyMode::Sweep, VerifyEngine::Parallel); }

} // namespace

BENCHMARK(BM_ExhaustiveSerial)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExhaustiveParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DeltaSerial)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DeltaParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BinningSweepSerial)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BinningSweepParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
