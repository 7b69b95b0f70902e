// acceptance_main.cpp - End-to-end acceptance suite. Prints one pass/fail
// line per criterion and exits with the number of failures.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdec/antilinear.hpp"
#include "qdec/config.hpp"
#include "qdec/dynamics.hpp"
#include "qdec/linalg.hpp"
#include "qdec/model.hpp"
#include "qdec/riccati.hpp"

namespace fs = std::filesystem;
using namespace qdec;
using dynamics::JointState;
using dynamics::QubitState;
using dynamics::StructuredJoint;
using linalg::AntilinearMap;
using linalg::BlockOperator;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianOperator;
using model::EnvironmentPair;
using model::ModelParams;
using riccati::Branch;
using riccati::RiccatiSolution;

namespace {

double g_tolerance_scale = 1.0;
std::uint64_t g_seed = 0x51CC4712ull;

double tol(double base) { return base * g_tolerance_scale; }

std::mt19937_64 criterion_rng(int id) {
    return std::mt19937_64(g_seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(id)));
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

// --- random model instances --------------------------------------------------

ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(gauss(rng), gauss(rng));
    }
    return m;
}

ComplexMatrix random_unitary(std::mt19937_64& rng, Eigen::Index d) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, d, d));
    return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

ComplexMatrix random_density(std::mt19937_64& rng, Eigen::Index d) {
    const ComplexMatrix g = random_matrix(rng, d, d);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return rho;
}

Eigen::VectorXd uniform_vector(std::mt19937_64& rng, Eigen::Index d, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = dist(rng);
    return v;
}

struct Instance {
    EnvironmentPair env;
    ModelParams params;
};

// Commuting environment plus drive/detuning in [-2,2], alpha bounded away
// from 0 so both branches exist.
Instance make_instance(std::mt19937_64& rng, Eigen::Index d) {
    const ComplexMatrix u = random_unitary(rng, d);
    const Eigen::VectorXd d1 = uniform_vector(rng, d, -2.0, 2.0);
    const Eigen::VectorXd d2 = uniform_vector(rng, d, -2.0, 2.0);
    EnvironmentPair env(HermitianOperator(u * d1.cast<Complex>().asDiagonal() * u.adjoint()),
                        HermitianOperator(u * d2.cast<Complex>().asDiagonal() * u.adjoint()));
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    ModelParams params;
    do {
        params.alpha = dist(rng);
    } while (std::abs(params.alpha) < 1e-3);
    params.beta = dist(rng);
    params.env_dim = d;
    return Instance{std::move(env), params};
}

constexpr std::array<Eigen::Index, 6> kSizes{2, 4, 8, 16, 32, 64};
constexpr int kInstanceCount = 100;

// --- criteria ----------------------------------------------------------------

Outcome criterion_riccati_roots() {
    std::mt19937_64 rng = criterion_rng(1);
    double worst_residual = 0.0, worst_product = 0.0;
    for (int i = 0; i < kInstanceCount; ++i) {
        const Instance inst = make_instance(rng, kSizes[static_cast<std::size_t>(i) % kSizes.size()]);
        const BlockOperator hqe = model::build_hqe(inst.params, inst.env);
        const double scale = 1.0 + hqe.flat().norm();
        const RiccatiSolution pos = riccati::solve_commuting(inst.env, inst.params, Branch::PositiveF);
        const RiccatiSolution neg =
            riccati::solve_commuting(inst.env, inst.params, Branch::NegativeFbar);
        for (const RiccatiSolution* sol : {&pos, &neg}) {
            worst_residual = std::max(
                worst_residual,
                riccati::riccati_residual_linear(hqe, sol->materialize()).norm() / scale);
        }
        for (Eigen::Index n = 0; n < pos.dim(); ++n) {
            worst_product = std::max(worst_product, std::abs(pos.x(n) * neg.x(n) + 1.0));
        }
    }
    std::ostringstream detail;
    detail << "max_rel_residual=" << worst_residual << " (tol " << tol(1e-10) << ")"
           << " max_product_defect=" << worst_product << " (tol " << tol(1e-12) << ")";
    return Outcome{worst_residual <= tol(1e-10) && worst_product <= tol(1e-12), detail.str()};
}

Outcome criterion_spectrum_equality() {
    std::mt19937_64 rng = criterion_rng(1);  // same instance stream as criterion 1
    double worst = 0.0;
    for (int i = 0; i < kInstanceCount; ++i) {
        const Instance inst = make_instance(rng, kSizes[static_cast<std::size_t>(i) % kSizes.size()]);
        const RiccatiSolution sol = riccati::solve_commuting(inst.env, inst.params, Branch::PositiveF);

        Eigen::VectorXd h_all(2 * sol.dim());
        for (const riccati::LocalFrame& f : riccati::local_frames(sol, inst.params)) {
            h_all(2 * f.index) = f.h_plus;
            h_all(2 * f.index + 1) = f.h_minus;
        }
        std::sort(h_all.begin(), h_all.end());
        const Eigen::VectorXd full =
            linalg::herm_eig(HermitianOperator(model::build_hqe(inst.params, inst.env).flat()))
                .eigenvalues;
        worst = std::max(worst, (h_all - full).cwiseAbs().maxCoeff());
    }
    std::ostringstream detail;
    detail << "max_multiset_gap=" << worst << " (tol " << tol(1e-9) << ")";
    return Outcome{worst <= tol(1e-9), detail.str()};
}

Outcome criterion_evolution_oracle() {
    std::mt19937_64 rng = criterion_rng(3);
    std::uniform_real_distribution<double> time_dist(0.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < kInstanceCount; ++i) {
        const Instance inst = make_instance(rng, kSizes[static_cast<std::size_t>(i) % kSizes.size()]);
        const RiccatiSolution sol = riccati::solve_commuting(inst.env, inst.params, Branch::PositiveF);
        const ComplexMatrix h_flat = model::build_hqe(inst.params, inst.env).flat();
        for (int k = 0; k < 10; ++k) {
            const double t = time_dist(rng);
            const ComplexMatrix via_riccati = dynamics::evolve_block(sol, inst.params, t).flat();
            const ComplexMatrix via_series = linalg::expm_oracle(Complex(0.0, -t) * h_flat);
            worst = std::max(worst, (via_riccati - via_series).norm());
        }
    }
    std::ostringstream detail;
    detail << "max_gap=" << worst << " (tol " << tol(1e-8) << ")";
    return Outcome{worst <= tol(1e-8), detail.str()};
}

Outcome criterion_kraus_laws() {
    std::mt19937_64 rng = criterion_rng(4);
    std::uniform_real_distribution<double> time_dist(0.0, 3.0);
    double completeness = 0.0, product_route = 0.0, correlated_route = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Instance inst = make_instance(rng, kSizes[static_cast<std::size_t>(i) % 4]);  // d <= 16
        const RiccatiSolution sol = riccati::solve_commuting(inst.env, inst.params, Branch::PositiveF);
        const Eigen::Index d = inst.env.dim();
        const double t = time_dist(rng);

        const ComplexMatrix rho_env = random_density(rng, d);
        const QubitState rho_q(Eigen::Matrix2cd(random_density(rng, 2)));
        const dynamics::KrausFamily family =
            dynamics::kraus_family(HermitianOperator(rho_env), sol, inst.params, t);
        completeness = std::max(completeness, family.completeness_defect());
        const QubitState via_kraus = dynamics::kraus_apply(family, rho_q);
        const QubitState via_trace =
            dynamics::reduced_dynamics(JointState::product(rho_q, rho_env), sol, inst.params, t);
        product_route = std::max(product_route, (via_kraus.rho() - via_trace.rho()).norm());

        // Correlated state with a non-factorable 3x3 coefficient grid.
        StructuredJoint joint;
        joint.gamma = ComplexMatrix::Zero(3, 3);
        joint.gamma(0, 0) = 0.5;
        joint.gamma(1, 1) = 0.3;
        joint.gamma(2, 2) = 0.2;
        const double epsilon = 0.02;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                if (a != b) joint.gamma(a, b) = epsilon;
            }
        }
        joint.gamma /= (1.0 + 6.0 * epsilon);
        for (int k = 0; k < 3; ++k) {
            joint.qubit_factors.push_back(random_density(rng, 2));
            joint.env_factors.push_back(random_density(rng, d));
        }
        const QubitState via_formula = dynamics::correlated_dynamics(joint, sol, inst.params, t);
        const QubitState via_full =
            dynamics::reduced_dynamics(JointState::structured(joint), sol, inst.params, t);
        correlated_route =
            std::max(correlated_route, (via_formula.rho() - via_full.rho()).norm());
    }
    std::ostringstream detail;
    detail << "completeness=" << completeness << " (tol " << tol(1e-12) << ")"
           << " product_route=" << product_route << " correlated_route=" << correlated_route
           << " (tol " << tol(1e-10) << ")";
    return Outcome{completeness <= tol(1e-12) && product_route <= tol(1e-10) &&
                       correlated_route <= tol(1e-10),
                   detail.str()};
}

Outcome criterion_frame_equivalence() {
    std::mt19937_64 rng = criterion_rng(5);
    std::uniform_real_distribution<double> model_dist(-2.0, 2.0);
    std::uniform_real_distribution<double> bath_dist(-1.0, 1.0);
    double worst = 0.0;
    for (int sites = 1; sites <= 4; ++sites) {
        std::vector<double> omegas, couplings;
        for (int n = 0; n < sites; ++n) {
            omegas.push_back(bath_dist(rng));
            couplings.push_back(bath_dist(rng));
        }
        const EnvironmentPair env = model::spin_bath(omegas, couplings);
        ModelParams params;
        params.alpha = model_dist(rng);
        params.beta = model_dist(rng);
        params.omega = model_dist(rng);
        params.env_dim = env.dim();
        ModelParams ti_params = params;
        ti_params.beta = params.effective_beta();

        const RiccatiSolution sol = riccati::solve_commuting(env, ti_params, Branch::PositiveF);
        const QubitState rho_q(Eigen::Matrix2cd(random_density(rng, 2)));
        const JointState joint = JointState::product(rho_q, random_density(rng, env.dim()));

        std::vector<double> grid;
        for (int i = 0; i < 100; ++i) grid.push_back(2.0 * i / 99.0);
        const std::vector<QubitState> lab = dynamics::ode_oracle(params, env, joint, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const QubitState rotating = dynamics::reduced_dynamics(joint, sol, ti_params, grid[i]);
            const QubitState mapped = dynamics::rotating_frame_map(rotating, params, grid[i]);
            worst = std::max(worst, (mapped.bloch() - lab[i].bloch()).cwiseAbs().maxCoeff());
        }
    }
    std::ostringstream detail;
    detail << "max_bloch_gap=" << worst << " (tol " << tol(1e-6) << ")";
    return Outcome{worst <= tol(1e-6), detail.str()};
}

Outcome criterion_antilinear_symmetry() {
    std::mt19937_64 rng = criterion_rng(6);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> time_dist(0.0, 5.0);
    const Eigen::Index d = 8;
    const AntilinearMap k = AntilinearMap::conjugation(d);

    const auto random_real_symmetric = [&](std::mt19937_64& r) {
        Eigen::MatrixXd g(d, d);
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index i = 0; i < d; ++i) g(i, j) = gauss(r);
        }
        return ComplexMatrix((0.5 * (g + g.transpose().eval())).cast<Complex>());
    };

    double symmetric_residual = 0.0;
    for (int i = 0; i < 50; ++i) {
        const EnvironmentPair env(HermitianOperator(random_real_symmetric(rng)),
                                  HermitianOperator(random_real_symmetric(rng)));
        ModelParams params;
        params.alpha = 0.5 + 0.1 * i;
        params.beta = gauss(rng);
        params.env_dim = d;
        const riccati::AntilinearResidual ht_res = riccati::riccati_residual_antilinear(
            model::build_ht(time_dist(rng), params, env), k);
        const riccati::AntilinearResidual hbar_res =
            riccati::riccati_residual_antilinear(model::build_hbar(params, env).hbar, k);
        symmetric_residual = std::max({symmetric_residual, ht_res.norm(), hbar_res.norm()});
    }

    double worst_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 50; ++i) {
        const ComplexMatrix g = random_matrix(rng, d, d);
        const HermitianOperator he(0.5 * (g + g.adjoint().eval()));
        const double transpose_defect = (he.matrix().transpose() - he.matrix()).norm();
        const EnvironmentPair env(he, HermitianOperator(random_real_symmetric(rng)));
        ModelParams params;
        params.alpha = 1.0;
        params.beta = 0.3;
        params.env_dim = d;
        const riccati::AntilinearResidual res = riccati::riccati_residual_antilinear(
            model::build_ht(time_dist(rng), params, env), k);
        worst_margin = std::min(
            worst_margin, res.antilinear_part.norm() - (transpose_defect - tol(1e-12)));
    }

    std::ostringstream detail;
    detail << "symmetric_residual=" << symmetric_residual << " (tol " << tol(1e-12) << ")"
           << " lower_bound_margin=" << worst_margin;
    return Outcome{symmetric_residual <= tol(1e-12) && worst_margin >= 0.0, detail.str()};
}

Outcome criterion_limit_behavior() {
    std::mt19937_64 rng = criterion_rng(7);
    const Eigen::Index d = 8;
    const ComplexMatrix u = random_unitary(rng, d);
    const Eigen::VectorXd d1 = uniform_vector(rng, d, -2.0, 2.0);
    const Eigen::VectorXd d2 = uniform_vector(rng, d, 0.0, 2.0);  // V_n + beta >= 1
    const EnvironmentPair env(HermitianOperator(u * d1.cast<Complex>().asDiagonal() * u.adjoint()),
                              HermitianOperator(u * d2.cast<Complex>().asDiagonal() * u.adjoint()));

    bool pass = true;
    std::ostringstream detail;
    for (double alpha : {1e-2, 1e-4, 1e-6}) {
        ModelParams params;
        params.alpha = alpha;
        params.beta = 1.0;
        params.env_dim = d;
        const RiccatiSolution pos = riccati::solve_commuting(env, params, Branch::PositiveF);
        const RiccatiSolution neg = riccati::solve_commuting(env, params, Branch::NegativeFbar);
        const double x_norm = pos.x.cwiseAbs().maxCoeff();
        const double xbar_min = neg.x.cwiseAbs().minCoeff();
        pass = pass && x_norm <= 0.51 * alpha && xbar_min >= 0.9 / alpha;
        detail << " alpha=" << alpha << ": |X|=" << x_norm << " min|xbar|=" << xbar_min << ";";
    }
    return Outcome{pass, detail.str()};
}

Outcome criterion_frame_analysis() {
    std::mt19937_64 rng = criterion_rng(1);  // same instance stream as criterion 1
    double vec_residual = 0.0, diag_residual = 0.0;
    double witness = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kInstanceCount; ++i) {
        const Instance inst = make_instance(rng, kSizes[static_cast<std::size_t>(i) % kSizes.size()]);
        const RiccatiSolution pos = riccati::solve_commuting(inst.env, inst.params, Branch::PositiveF);
        for (const riccati::LocalFrame& f : riccati::local_frames(pos, inst.params)) {
            const Eigen::Vector2d plus_vec(-f.x_bar, 1.0), minus_vec(-f.x, 1.0);
            vec_residual =
                std::max(vec_residual, (f.h_n * plus_vec - f.h_plus * plus_vec).norm());
            vec_residual =
                std::max(vec_residual, (f.h_n * minus_vec - f.h_minus * minus_vec).norm());
            const Eigen::Matrix2d similar = f.f_n.inverse() * f.h_n * f.f_n;
            diag_residual =
                std::max({diag_residual, std::abs(similar(0, 1)), std::abs(similar(1, 0)),
                          std::abs(similar(0, 0) - f.h_plus), std::abs(similar(1, 1) - f.h_minus)});
            witness = std::min({witness, std::abs(f.g_n.trace() - f.f_n.trace()),
                                std::abs(f.g_n.determinant() - f.f_n.determinant())});
        }
    }
    std::ostringstream detail;
    detail << "eigvec_residual=" << vec_residual << " diag_residual=" << diag_residual
           << " (tol " << tol(1e-10) << ") nonsimilarity_margin=" << witness;
    return Outcome{vec_residual <= tol(1e-10) && diag_residual <= tol(1e-10) && witness > 1e-9,
                   detail.str()};
}

Outcome criterion_channel_fuzz() {
    std::mt19937_64 rng = criterion_rng(9);
    std::uniform_real_distribution<double> time_dist(0.0, 5.0);

    std::vector<Instance> instances;
    std::vector<RiccatiSolution> solutions;
    for (int i = 0; i < 5; ++i) {
        instances.push_back(make_instance(rng, 8));
        solutions.push_back(
            riccati::solve_commuting(instances.back().env, instances.back().params,
                                     Branch::PositiveF));
    }

    double trace_drift = 0.0, min_eig = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t which = static_cast<std::size_t>(i) % instances.size();
        const dynamics::KrausFamily family = dynamics::kraus_family(
            HermitianOperator(random_density(rng, 8)), solutions[which],
            instances[which].params, time_dist(rng));
        const QubitState out =
            dynamics::kraus_apply(family, QubitState(Eigen::Matrix2cd(random_density(rng, 2))));
        trace_drift = std::max(trace_drift, std::abs(out.rho().trace() - Complex(1.0, 0.0)));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(out.rho());
        min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
    }
    std::ostringstream detail;
    detail << "trace_drift=" << trace_drift << " (tol " << tol(1e-12) << ")"
           << " min_eigenvalue=" << min_eig << " (floor " << -tol(1e-10) << ")";
    return Outcome{trace_drift <= tol(1e-12) && min_eig >= -tol(1e-10), detail.str()};
}

// --- criterion 10: CLI determinism and formats -------------------------------

struct CliRun {
    int exit_code = -1;
    std::string out;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

CliRun run_cli(const std::string& args, const fs::path& workdir, const std::string& env_prefix) {
    const fs::path out_file = workdir / "cli_stdout.txt";
    std::ostringstream cmd;
    cmd << "cd '" << workdir.string() << "' && " << env_prefix << " '" << QDEC_CLI_BIN << "' "
        << args << " > '" << out_file.string() << "' 2> '" << (workdir / "cli_stderr.txt").string()
        << "'";
    const int status = std::system(cmd.str().c_str());
    CliRun run;
    run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    run.out = slurp(out_file);
    return run;
}

Outcome criterion_cli() {
    const fs::path dir = fs::temp_directory_path() / "qdec_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string good = (fs::path(QDEC_CONFIG_DIR) / "spinbath_n3.json").string();
    const std::string broken = (fs::path(QDEC_CONFIG_DIR) / "broken_noncommuting.json").string();

    std::ostringstream detail;
    bool pass = true;

    // Determinism: identical config, byte-identical outputs.
    const CliRun first =
        run_cli("simulate '" + good + "'", dir, "QDEC_OUTPUT_DIR='" + (dir / "a").string() + "'");
    const CliRun second =
        run_cli("simulate '" + good + "'", dir, "QDEC_OUTPUT_DIR='" + (dir / "b").string() + "'");
    bool identical = first.exit_code == 0 && second.exit_code == 0;
    for (const char* name :
         {"spinbath_n3.csv", "spinbath_n3.lab.csv", "spinbath_n3.jsonl", "spinbath_n3.lab.jsonl"}) {
        const std::string a = slurp(dir / "a" / name);
        identical = identical && !a.empty() && a == slurp(dir / "b" / name);
    }
    pass = pass && identical;
    detail << "determinism=" << (identical ? "ok" : "MISMATCH");

    // Config round trip is a fixed point.
    bool round_trip = false;
    try {
        const cli::RunConfig config = cli::parse_config_file(good);
        const std::string once = cli::serialize_config(config);
        const std::string twice = cli::serialize_config(cli::parse_config_text(once, ""));
        round_trip = once == twice;
    } catch (const std::exception&) {
        round_trip = false;
    }
    pass = pass && round_trip;
    detail << " round_trip=" << (round_trip ? "ok" : "BROKEN");

    // verify --suite all: exit 0 on the good bundle, nonzero on the broken one.
    const CliRun verify_good = run_cli("verify '" + good + "' --suite all", dir, "");
    const CliRun verify_broken = run_cli("verify '" + broken + "' --suite all", dir, "");
    const bool verify_ok = verify_good.exit_code == 0 && verify_broken.exit_code != 0;
    pass = pass && verify_ok;
    detail << " verify_good_exit=" << verify_good.exit_code
           << " verify_broken_exit=" << verify_broken.exit_code;

    return Outcome{pass, detail.str()};
}

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;  // 0 = no stated limit
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--tolerance-scale" && i + 1 < argc) {
            g_tolerance_scale = std::strtod(argv[++i], nullptr);
        } else if (arg == "--seed" && i + 1 < argc) {
            g_seed = std::strtoull(argv[++i], nullptr, 10);
        } else {
            std::fprintf(stderr, "usage: %s [--tolerance-scale F] [--seed U]\n", argv[0]);
            return 1;
        }
    }

    const std::vector<Criterion> criteria{
        {1, "riccati-root-residual", 30.0, criterion_riccati_roots},
        {2, "spectrum-equality", 0.0, criterion_spectrum_equality},
        {3, "evolution-oracle", 60.0, criterion_evolution_oracle},
        {4, "kraus-laws", 0.0, criterion_kraus_laws},
        {5, "rotating-frame-equivalence", 120.0, criterion_frame_equivalence},
        {6, "antilinear-symmetry", 0.0, criterion_antilinear_symmetry},
        {7, "limit-behavior", 0.0, criterion_limit_behavior},
        {8, "fn-gn-analysis", 0.0, criterion_frame_analysis},
        {9, "channel-fuzz", 0.0, criterion_channel_fuzz},
        {10, "cli-determinism-format", 0.0, criterion_cli},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criterion.time_limit_s > 0.0 && elapsed > criterion.time_limit_s) {
            outcome.pass = false;
            outcome.detail += " [over time limit]";
        }
        if (!outcome.pass) ++failures;
        std::printf("[%s] %2d %-28s %6.1fs  %s\n", outcome.pass ? "PASS" : "FAIL", criterion.id,
                    criterion.name, elapsed, outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %zu criteria, %d failed (tolerance scale %g, seed %llu)\n",
                criteria.size(), failures, g_tolerance_scale,
                static_cast<unsigned long long>(g_seed));
    return failures;
}
