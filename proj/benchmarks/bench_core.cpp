// bench_core.cpp - Microbenchmarks for the solver and dynamics hot paths.

#include <random>

#include <benchmark/benchmark.h>

#include "qdec/dynamics.hpp"
#include "qdec/linalg.hpp"
#include "qdec/model.hpp"
#include "qdec/riccati.hpp"

using namespace qdec;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianOperator;
using model::EnvironmentPair;
using model::ModelParams;
using riccati::Branch;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) m(i, j) = Complex(gauss(rng), gauss(rng));
    }
    return m;
}

EnvironmentPair commuting_env(Eigen::Index d) {
    std::mt19937_64 rng(0xBE0C4ull + static_cast<std::uint64_t>(d));
    Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, d));
    const ComplexMatrix u = qr.householderQ() * ComplexMatrix::Identity(d, d);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Eigen::VectorXd d1(d), d2(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        d1(i) = dist(rng);
        d2(i) = dist(rng);
    }
    return EnvironmentPair(HermitianOperator(u * d1.cast<Complex>().asDiagonal() * u.adjoint()),
                           HermitianOperator(u * d2.cast<Complex>().asDiagonal() * u.adjoint()));
}

ModelParams params_for(Eigen::Index d) {
    ModelParams p;
    p.alpha = 0.9;
    p.beta = -0.4;
    p.env_dim = d;
    return p;
}

void bm_solve_commuting(benchmark::State& state) {
    const Eigen::Index d = state.range(0);
    const EnvironmentPair env = commuting_env(d);
    const ModelParams params = params_for(d);
    for (auto _ : state) {
        benchmark::DoNotOptimize(riccati::solve_commuting(env, params, Branch::PositiveF));
    }
}
BENCHMARK(bm_solve_commuting)->Arg(8)->Arg(32)->Arg(64);

void bm_evolve_block(benchmark::State& state) {
    const Eigen::Index d = state.range(0);
    const EnvironmentPair env = commuting_env(d);
    const ModelParams params = params_for(d);
    const auto sol = riccati::solve_commuting(env, params, Branch::PositiveF);
    double t = 0.0;
    for (auto _ : state) {
        t += 0.1;
        benchmark::DoNotOptimize(dynamics::evolve_block(sol, params, t));
    }
}
BENCHMARK(bm_evolve_block)->Arg(8)->Arg(32)->Arg(64);

void bm_kraus_apply(benchmark::State& state) {
    const Eigen::Index d = state.range(0);
    const EnvironmentPair env = commuting_env(d);
    const ModelParams params = params_for(d);
    const auto sol = riccati::solve_commuting(env, params, Branch::PositiveF);
    std::mt19937_64 rng(7);
    ComplexMatrix g = random_matrix(rng, d);
    ComplexMatrix rho_env = g * g.adjoint();
    rho_env /= rho_env.trace();
    const auto family = dynamics::kraus_family(HermitianOperator(rho_env), sol, params, 1.3);
    const auto rho_q = dynamics::QubitState::from_bloch(0.6, 0.0, 0.4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dynamics::kraus_apply(family, rho_q));
    }
}
BENCHMARK(bm_kraus_apply)->Arg(8)->Arg(64);

void bm_expm_oracle(benchmark::State& state) {
    const Eigen::Index d = state.range(0);
    std::mt19937_64 rng(13);
    const ComplexMatrix a = Complex(0.0, -1.0) * random_matrix(rng, d);
    for (auto _ : state) {
        benchmark::DoNotOptimize(linalg::expm_oracle(a));
    }
}
BENCHMARK(bm_expm_oracle)->Arg(16)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
