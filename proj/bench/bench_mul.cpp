// Schoolbook product, serial interval kernel (one worker) and the OpenMP
// kernel on the dense example products.
#include <benchmark/benchmark.h>

#include <map>
#include <thread>

#include "spmul/expr.hpp"
#include "spmul/parmul.hpp"

using namespace spmul;
using Z = mpz_class;

namespace {

struct Operands {
    Polynomial<Z> f, g;
};

// (1+x+y+z+t)^p times itself plus one
const Operands& dense(unsigned p) {
    static std::map<unsigned, Operands> cache;
    auto it = cache.find(p);
    if (it == cache.end()) {
        const auto ctx = make_context(VarTable({"x", "y", "z", "t"}));
        const std::string f = "(1+x+y+z+t)^" + std::to_string(p);
        it = cache.emplace(p, Operands{parse_polynomial<Z>(f, ctx), parse_polynomial<Z>(f + "+1", ctx)})
                 .first;
    }
    return it->second;
}

const Operands& sparse() {
    static const Operands ops = [] {
        const auto ctx = random_context(6, 20);
        return Operands{random_sparse<Z>(ctx, {1, 3000, 20}), random_sparse<Z>(ctx, {2, 3000, 20})};
    }();
    return ops;
}

void report(benchmark::State& state, const Operands& ops, std::size_t terms) {
    state.counters["a_terms"] = static_cast<double>(ops.f.size());
    state.counters["result_terms"] = static_cast<double>(terms);
    state.counters["products/s"] = benchmark::Counter(
        static_cast<double>(ops.f.size() * ops.g.size()) * static_cast<double>(state.iterations()),
        benchmark::Counter::kIsRate);
}

void BM_naive(benchmark::State& state) {
    const auto& ops = dense(static_cast<unsigned>(state.range(0)));
    std::size_t terms = 0;
    for (auto _ : state) {
        auto p = naive_mul(ops.f, ops.g);
        terms = p.size();
        benchmark::DoNotOptimize(p);
    }
    report(state, ops, terms);
}

// range(1): workers, range(2): 0 heap, 1 tree
void run_mul(benchmark::State& state, const Operands& ops) {
    const MulConfig cfg{{64}, static_cast<unsigned>(state.range(1)),
                        state.range(2) ? Merger::tree : Merger::heap};
    std::size_t terms = 0;
    for (auto _ : state) {
        auto p = mul(ops.f, ops.g, cfg);
        terms = p.size();
        benchmark::DoNotOptimize(p);
    }
    report(state, ops, terms);
}

void BM_dense(benchmark::State& state) { run_mul(state, dense(static_cast<unsigned>(state.range(0)))); }
void BM_sparse(benchmark::State& state) { run_mul(state, sparse()); }

void worker_args(benchmark::internal::Benchmark* b, bool dense_powers) {
    const long hw = std::max(1u, std::thread::hardware_concurrency());
    std::vector<long> workers{1};
    for (long c = 2; c <= hw; c *= 2)
        workers.push_back(c);
    if (workers.back() != hw)
        workers.push_back(hw);
    for (long p : dense_powers ? std::vector<long>{8, 12} : std::vector<long>{0})
        for (long c : workers)
            for (long merger : {0, 1})
                b->Args({p, c, merger});
    b->ArgNames({"p", "threads", "tree"})->Unit(benchmark::kMillisecond)->UseRealTime();
}

} // namespace

BENCHMARK(BM_naive)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dense)->Apply([](auto* b) { worker_args(b, true); });
BENCHMARK(BM_sparse)->Apply([](auto* b) { worker_args(b, false); });

BENCHMARK_MAIN();
