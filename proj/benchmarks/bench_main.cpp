#include <benchmark/benchmark.h>

#include "summakit/convergence.hpp"
#include "summakit/exact.hpp"
#include "summakit/orlicz.hpp"
#include "summakit/sequence_gen.hpp"
#include "summakit/theorem_lab.hpp"

using namespace summakit;

namespace {

orlicz::SequencePrefix corpus_prefix(std::int64_t n) {
    return gen::gen_sequence({gen::BoundedRandom{2.0}, 17, n});
}

void BM_SLambdaWindows(benchmark::State& state) {
    const auto n = state.range(0);
    convergence::ConvergenceQuery q;
    q.x = corpus_prefix(n);
    q.ideal = ideals::IdealOracle::density_zero(0.01, n);
    q.gamma = 0.5;
    q.xi = 0.05;
    q.scheme = convergence::LambdaWindows{convergence::WindowLengthRule::ceil_sqrt(), 0.8};
    for (auto _ : state) benchmark::DoNotOptimize(convergence::slambda_alpha_test(q).state);
    state.SetComplexityN(n);
}
BENCHMARK(BM_SLambdaWindows)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_WLambdaPowerFamily(benchmark::State& state) {
    const auto n = state.range(0);
    convergence::ConvergenceQuery q;
    q.x = corpus_prefix(n);
    q.family = orlicz::MusielakFamily::power_ramp(2.0, 1.0);
    q.ideal = ideals::IdealOracle::density_zero(0.01, n);
    q.gamma = 0.25;
    for (auto _ : state) benchmark::DoNotOptimize(convergence::wlambda_alpha_test(q).state);
}
BENCHMARK(BM_WLambdaPowerFamily)->Arg(1 << 12)->Arg(1 << 14);

void BM_StatisticalTest(benchmark::State& state) {
    const auto n = state.range(0);
    const auto x = corpus_prefix(n);
    const auto ideal = ideals::IdealOracle::density_zero(0.01, n);
    for (auto _ : state) benchmark::DoNotOptimize(convergence::statistical_test(x, 0.0, 0.5, ideal).state);
}
BENCHMARK(BM_StatisticalTest)->Arg(10000)->Arg(100000);

void BM_ExactAccumulator(benchmark::State& state) {
    const auto x = corpus_prefix(state.range(0));
    for (auto _ : state) {
        ExactAccumulator acc;
        for (double v : x.values()) acc.add(v);
        benchmark::DoNotOptimize(acc.to_double());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExactAccumulator)->Arg(10000);

void BM_LuxemburgNorm(benchmark::State& state) {
    const auto family = orlicz::MusielakFamily::uniform(orlicz::OrliczSpec::power(3.0));
    const auto x = corpus_prefix(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(orlicz::luxemburg_norm(family, x, 1e-12).norm);
}
BENCHMARK(BM_LuxemburgNorm)->Arg(50)->Arg(5000);

void BM_OrliczNorm(benchmark::State& state) {
    const auto family = orlicz::MusielakFamily::uniform(orlicz::OrliczSpec::exp_minus_one());
    const auto x = corpus_prefix(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(orlicz::orlicz_norm(family, x, 1e-12).norm);
}
BENCHMARK(BM_OrliczNorm)->Arg(50)->Arg(5000);

void BM_Conjugate(benchmark::State& state) {
    const auto spec = orlicz::OrliczSpec::power_over_p(1.5);
    for (auto _ : state) benchmark::DoNotOptimize(orlicz::conjugate_eval(spec, 4.5, 1000.0, 1e-12).value);
}
BENCHMARK(BM_Conjugate);

void BM_TheoremSuite(benchmark::State& state) {
    lab::TheoremCase c;
    c.id = lab::TheoremId::T4;
    c.instances = 20;
    c.horizon = 10000;
    for (auto _ : state) benchmark::DoNotOptimize(lab::verify_theorem(c, static_cast<int>(state.range(0))).totals);
}
BENCHMARK(BM_TheoremSuite)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
