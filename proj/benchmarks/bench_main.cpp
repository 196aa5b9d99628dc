#include <benchmark/benchmark.h>

#include <thetagrade/kwinv.hpp>

using namespace tg;

namespace {

Scenario named(const std::string& name) {
    for (auto& s : default_suite())
        if (s.name == name) return s;
    return {};
}

const char* kNames[] = {"sl3-m3", "sl6-m3", "sp6-m3", "so8-m3", "sl4-outer-m4"};

void BM_Session(benchmark::State& st) {
    auto sc = named(kNames[st.range(0)]);
    for (auto _ : st) benchmark::DoNotOptimize(make_session(sc));
    st.SetLabel(sc.name);
}
BENCHMARK(BM_Session)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_LittleWeyl(benchmark::State& st) {
    Session s = make_session(named(kNames[st.range(0)]));
    auto c = explicit_cartan(s.F, s.spec, s.grading);
    for (auto _ : st) benchmark::DoNotOptimize(little_weyl(s, c));
    st.SetLabel(s.scenario.name);
}
BENCHMARK(BM_LittleWeyl)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_BruteCartan(benchmark::State& st) {
    Session s = make_session(named(kNames[st.range(0)]));
    for (auto _ : st) benchmark::DoNotOptimize(brute_cartan(s.F, s.alg, s.grading, s.scenario.seed, 500));
    st.SetLabel(s.scenario.name);
}
BENCHMARK(BM_BruteCartan)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_KWSection(benchmark::State& st) {
    Session s = make_session(named(kNames[st.range(0)]));
    auto c = explicit_cartan(s.F, s.spec, s.grading);
    auto lw = little_weyl(s, c);
    for (auto _ : st) benchmark::DoNotOptimize(kw_section(s, c, lw));
    st.SetLabel(s.scenario.name);
}
BENCHMARK(BM_KWSection)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_CharCoefficients(benchmark::State& st) {
    int N = static_cast<int>(st.range(0));
    PrimeField F(31);
    std::vector<Mat> dirs;
    for (int k = 0; k < 2; ++k) {
        Mat d(N, N);
        for (int i = 0; i < N; ++i) d(i, (i + k + 1) % N) = static_cast<Scalar>(i + 1);
        dirs.push_back(d);
    }
    auto A = affine_matrix(F, Mat::identity(N), dirs);
    for (auto _ : st) benchmark::DoNotOptimize(char_coefficients(F, A));
}
BENCHMARK(BM_CharCoefficients)->DenseRange(4, 12, 4);

void BM_Pfaffian(benchmark::State& st) {
    int N = static_cast<int>(st.range(0));
    PrimeField F(31);
    Rng rng(5);
    Mat a(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            a(i, j) = F.random(rng);
            a(j, i) = F.neg(a(i, j));
        }
    for (auto _ : st) benchmark::DoNotOptimize(pfaffian(F, a));
}
BENCHMARK(BM_Pfaffian)->RangeMultiplier(2)->Range(4, 32);

}  // namespace
BENCHMARK_MAIN();
