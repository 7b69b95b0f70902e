// run.cpp - Resolution of run configs into model objects and the three
// command drivers.

#include "qdec/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qdec/antilinear.hpp"
#include "qdec/dynamics.hpp"
#include "qdec/linalg.hpp"
#include "qdec/model.hpp"
#include "qdec/riccati.hpp"

namespace qdec::cli {

namespace {

namespace fs = std::filesystem;
using dynamics::JointState;
using dynamics::QubitState;
using dynamics::StructuredJoint;
using linalg::AntilinearMap;
using linalg::BlockOperator;
using linalg::Complex;
using linalg::HermitianOperator;
using model::EnvironmentPair;
using model::ModelParams;
using riccati::Branch;
using riccati::RiccatiSolution;

std::string resolve_input(const RunConfig& config, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute() || config.base_dir.empty()) return path;
    return (fs::path(config.base_dir) / p).string();
}

std::string resolve_output(const RunOptions& options, const std::string& path) {
    if (!options.output_dir) return path;
    return (fs::path(*options.output_dir) / fs::path(path).filename()).string();
}

std::string number_field(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// RFC-style CSV quoting; numeric fields pass through untouched.
std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

struct ResolvedRun {
    ModelParams params;       // physical parameters (beta as configured)
    ModelParams ti_params;    // effective time-independent model (beta -> beta - omega/2)
    EnvironmentPair env;
    Branch branch = Branch::PositiveF;
    QubitState qubit;
    linalg::ComplexMatrix rho_env;  // environment factor of the product state
    std::optional<StructuredJoint> correlated;
    std::vector<double> times;

    JointState joint() const {
        if (correlated) return JointState::structured(*correlated);
        return JointState::product(qubit, rho_env);
    }
};

linalg::ComplexMatrix initial_env_density(const RunConfig& config, const EnvironmentPair& env) {
    const Eigen::Index d = env.dim();
    if (config.initial.env_kind == "maximallyMixed") {
        return linalg::ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    }
    if (config.initial.env_kind == "groundState") {
        const linalg::HermEig eig = linalg::herm_eig(env.h_env());
        const linalg::ComplexVector ground = eig.basis.col(0);
        return ground * ground.adjoint();
    }
    return read_matrix_file(resolve_input(config, *config.initial.env_matrix_path));
}

ResolvedRun resolve_run(const RunConfig& config) {
    std::optional<EnvironmentPair> env;
    if (config.spin_bath) {
        env = model::spin_bath(config.spin_bath->omegas, config.spin_bath->couplings);
    } else {
        const linalg::ComplexMatrix he =
            read_matrix_file(resolve_input(config, config.explicit_env->h_env_path));
        const linalg::ComplexMatrix v =
            read_matrix_file(resolve_input(config, config.explicit_env->coupling_path));
        env = EnvironmentPair(HermitianOperator(he), HermitianOperator(v));
    }

    ModelParams params;
    params.alpha = config.model.alpha;
    params.beta = config.model.beta;
    params.omega = config.model.omega;
    params.env_dim = env->dim();

    ModelParams ti_params = params;
    ti_params.beta = params.effective_beta();

    QubitState qubit = [&] {
        if (config.initial.qubit_bloch) {
            const auto& b = *config.initial.qubit_bloch;
            return QubitState::from_bloch(b[0], b[1], b[2]);
        }
        const linalg::ComplexMatrix m =
            read_matrix_file(resolve_input(config, *config.initial.qubit_matrix_path));
        if (m.rows() != 2 || m.cols() != 2) {
            throw ModelError("initial qubit matrix must be 2x2");
        }
        return QubitState(Eigen::Matrix2cd(m));
    }();

    std::optional<StructuredJoint> correlated;
    if (config.initial.correlated) {
        StructuredJoint joint;
        joint.gamma = read_matrix_file(resolve_input(config, config.initial.correlated->gamma_path));
        for (const auto& path : config.initial.correlated->qubit_factor_paths) {
            const linalg::ComplexMatrix m = read_matrix_file(resolve_input(config, path));
            if (m.rows() != 2 || m.cols() != 2) {
                throw ModelError("correlated qubit factors must be 2x2");
            }
            joint.qubit_factors.emplace_back(m);
        }
        for (const auto& path : config.initial.correlated->env_factor_paths) {
            joint.env_factors.push_back(read_matrix_file(resolve_input(config, path)));
        }
        correlated = std::move(joint);
    }

    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(config.time_grid.points));
    if (config.time_grid.points == 1) {
        times.push_back(config.time_grid.start);
    } else {
        const double step = (config.time_grid.stop - config.time_grid.start) /
                            (config.time_grid.points - 1);
        for (int i = 0; i < config.time_grid.points; ++i) {
            times.push_back(config.time_grid.start + step * i);
        }
    }

    linalg::ComplexMatrix rho_env = initial_env_density(config, *env);
    ResolvedRun run{std::move(params),
                    std::move(ti_params),
                    std::move(*env),
                    config.branch == "negative" ? Branch::NegativeFbar : Branch::PositiveF,
                    std::move(qubit),
                    std::move(rho_env),
                    std::move(correlated),
                    std::move(times)};
    return run;
}

// --- output writing ---------------------------------------------------------

struct SeriesMeta {
    std::string config_hash;
    double tolerance_scale = 1.0;
    std::string branch;
    std::string frame;  // "rotating" | "lab"
};

void write_series_csv(std::ostream& out, const SeriesMeta& meta,
                      const std::vector<TimeSeriesRecord>& records) {
    out << "# qdec-version: " << library_version() << "\n";
    out << "# config-hash: " << meta.config_hash << "\n";
    out << "# tolerance-scale: " << number_field(meta.tolerance_scale) << "\n";
    out << "# branch: " << meta.branch << "\n";
    out << "# frame: " << meta.frame << "\n";
    out << "t,blochX,blochY,blochZ,coherenceAbs,purity,traceError\n";
    for (const auto& r : records) {
        out << csv_field(number_field(r.t)) << ',' << csv_field(number_field(r.bloch_x)) << ','
            << csv_field(number_field(r.bloch_y)) << ',' << csv_field(number_field(r.bloch_z))
            << ',' << csv_field(number_field(r.coherence_abs)) << ','
            << csv_field(number_field(r.purity)) << ',' << csv_field(number_field(r.trace_error))
            << "\n";
    }
}

void write_series_jsonl(std::ostream& out, const SeriesMeta& meta,
                        const std::vector<TimeSeriesRecord>& records) {
    nlohmann::ordered_json header;
    header["meta"] = {{"qdecVersion", library_version()},
                      {"configHash", meta.config_hash},
                      {"toleranceScale", meta.tolerance_scale},
                      {"branch", meta.branch},
                      {"frame", meta.frame}};
    out << header.dump() << "\n";
    for (const auto& r : records) {
        nlohmann::ordered_json row;
        row["t"] = r.t;
        row["blochX"] = r.bloch_x;
        row["blochY"] = r.bloch_y;
        row["blochZ"] = r.bloch_z;
        row["coherenceAbs"] = r.coherence_abs;
        row["purity"] = r.purity;
        row["traceError"] = r.trace_error;
        out << row.dump() << "\n";
    }
}

void write_series_file(const std::string& path, const std::string& format, const SeriesMeta& meta,
                       const std::vector<TimeSeriesRecord>& records) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output: cannot write " + path);
    if (format == "csv") {
        write_series_csv(out, meta, records);
    } else {
        write_series_jsonl(out, meta, records);
    }
}

std::string lab_frame_path(const std::string& path) {
    fs::path p(path);
    fs::path stem = p.stem();
    stem += ".lab";
    stem += p.extension();
    return (p.parent_path() / stem).string();
}

TimeSeriesRecord make_record(double t, const QubitState& state) {
    const Eigen::Vector3d bloch = state.bloch();
    TimeSeriesRecord r;
    r.t = t;
    r.bloch_x = bloch(0);
    r.bloch_y = bloch(1);
    r.bloch_z = bloch(2);
    r.coherence_abs = state.coherence_abs();
    r.purity = state.purity();
    r.trace_error = state.trace_error();
    return r;
}

void check_record_invariants(const TimeSeriesRecord& r) {
    const double bloch_sq = r.bloch_x * r.bloch_x + r.bloch_y * r.bloch_y + r.bloch_z * r.bloch_z;
    if (bloch_sq > 1.0 + 1e-9 || r.purity < 0.5 - 1e-9 || r.purity > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << "time-series record violates state invariants at t = " << r.t;
        throw NumericError(msg.str());
    }
}

// --- randomized helpers for verify -----------------------------------------

linalg::ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    linalg::ComplexMatrix m(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) m(i, j) = Complex(gauss(rng), gauss(rng));
    }
    return m;
}

linalg::ComplexMatrix random_density(std::mt19937_64& rng, Eigen::Index d) {
    const linalg::ComplexMatrix g = random_matrix(rng, d);
    linalg::ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return rho;
}

QubitState random_qubit_state(std::mt19937_64& rng) {
    return QubitState(Eigen::Matrix2cd(random_density(rng, 2)));
}

}  // namespace

std::optional<Suite> suite_from_name(const std::string& name) {
    if (name == "riccati") return Suite::Riccati;
    if (name == "symmetry") return Suite::Symmetry;
    if (name == "kraus") return Suite::Kraus;
    if (name == "frame") return Suite::Frame;
    if (name == "all") return Suite::All;
    return std::nullopt;
}

// --- simulate ----------------------------------------------------------------

namespace {

// Rotating-frame states of the effective time-independent model on the grid,
// with the factored route cross-checked against the partial-trace route at
// the ends and the middle.
std::vector<QubitState> simulate_states(const ResolvedRun& run, const RunOptions& options,
                                        const RiccatiSolution& sol) {
    const JointState joint = run.joint();
    const double cross_tol = options.tolerance_scale * 1e-10;
    const std::size_t count = run.times.size();
    const std::array<std::size_t, 3> check_at{0, count / 2, count - 1};

    std::vector<QubitState> states;
    states.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = run.times[i];
        QubitState state = [&] {
            if (run.correlated) {
                return dynamics::correlated_dynamics(*run.correlated, sol, run.ti_params, t);
            }
            const dynamics::KrausFamily family =
                dynamics::kraus_family(HermitianOperator(run.rho_env), sol, run.ti_params, t);
            return dynamics::kraus_apply(family, run.qubit);
        }();

        if (std::find(check_at.begin(), check_at.end(), i) != check_at.end()) {
            const QubitState traced = dynamics::reduced_dynamics(joint, sol, run.ti_params, t);
            const double gap = (traced.rho() - state.rho()).norm();
            if (gap > cross_tol) {
                std::ostringstream msg;
                msg << "simulate: factored route deviates from partial-trace route by " << gap
                    << " at t = " << t;
                throw NumericError(msg.str());
            }
        }
        states.push_back(std::move(state));
    }
    return states;
}

std::vector<TimeSeriesRecord> series_records(const ResolvedRun& run,
                                             const std::vector<QubitState>& states,
                                             bool lab_frame) {
    std::vector<TimeSeriesRecord> records;
    records.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const double t = run.times[i];
        const QubitState state =
            lab_frame ? dynamics::rotating_frame_map(states[i], run.params, t) : states[i];
        TimeSeriesRecord record = make_record(t, state);
        check_record_invariants(record);
        records.push_back(record);
    }
    return records;
}

}  // namespace

int run_simulate(const RunConfig& config, const RunOptions& options, std::ostream& err) {
    try {
        const ResolvedRun run = resolve_run(config);
        if (config.outputs.empty()) {
            throw ConfigError("config: simulate needs at least one output");
        }
        const RiccatiSolution sol =
            riccati::solve_commuting(run.env, run.ti_params, run.branch);

        const std::vector<QubitState> states = simulate_states(run, options, sol);
        const std::vector<TimeSeriesRecord> rotating = series_records(run, states, false);
        std::vector<TimeSeriesRecord> lab;
        const bool driven = run.params.omega != 0.0;
        if (driven) lab = series_records(run, states, true);

        SeriesMeta meta;
        meta.config_hash = config_hash_hex(config);
        meta.tolerance_scale = options.tolerance_scale;
        meta.branch = config.branch;
        for (const auto& spec : config.outputs) {
            const std::string path = resolve_output(options, spec.path);
            meta.frame = "rotating";
            write_series_file(path, spec.format, meta, rotating);
            if (driven) {
                meta.frame = "lab";
                write_series_file(lab_frame_path(path), spec.format, meta, lab);
            }
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << "\n";
        return kExitModel;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitModel;
    }
}

// --- spectrum ----------------------------------------------------------------

int run_spectrum(const RunConfig& config, const RunOptions& options, std::ostream& err) {
    try {
        const ResolvedRun run = resolve_run(config);
        if (config.outputs.empty()) {
            throw ConfigError("config: spectrum needs at least one output");
        }
        if (run.ti_params.alpha == 0.0) {
            throw ModelError("spectrum: both Riccati branches require alpha != 0");
        }
        const RiccatiSolution sol =
            riccati::solve_commuting(run.env, run.ti_params, Branch::PositiveF);
        const std::vector<riccati::LocalFrame> frames =
            riccati::local_frames(sol, run.ti_params);

        const std::string hash = config_hash_hex(config);
        for (const auto& spec : config.outputs) {
            const std::string path = resolve_output(options, spec.path);
            const fs::path parent = fs::path(path).parent_path();
            if (!parent.empty()) fs::create_directories(parent);
            std::ofstream out(path, std::ios::binary);
            if (!out) throw ConfigError("output: cannot write " + path);
            if (spec.format == "csv") {
                out << "# qdec-version: " << library_version() << "\n";
                out << "# config-hash: " << hash << "\n";
                out << "# tolerance-scale: " << number_field(options.tolerance_scale) << "\n";
                out << "n,eHE,eV,x,xBar,hPlus,hMinus\n";
                for (const auto& f : frames) {
                    out << f.index << ',' << number_field(f.e_h_env) << ','
                        << number_field(f.e_coupling) << ',' << number_field(f.x) << ','
                        << number_field(f.x_bar) << ',' << number_field(f.h_plus) << ','
                        << number_field(f.h_minus) << "\n";
                }
            } else {
                nlohmann::ordered_json header;
                header["meta"] = {{"qdecVersion", library_version()},
                                  {"configHash", hash},
                                  {"toleranceScale", options.tolerance_scale}};
                out << header.dump() << "\n";
                for (const auto& f : frames) {
                    nlohmann::ordered_json row;
                    row["n"] = f.index;
                    row["eHE"] = f.e_h_env;
                    row["eV"] = f.e_coupling;
                    row["x"] = f.x;
                    row["xBar"] = f.x_bar;
                    row["hPlus"] = f.h_plus;
                    row["hMinus"] = f.h_minus;
                    out << row.dump() << "\n";
                }
            }
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitModel;
    }
}

// --- verify -------------------------------------------------------------------

namespace {

struct CheckList {
    double tolerance_scale = 1.0;
    std::vector<CheckRow> rows;

    void upper(const std::string& name, double measured, double bound) {
        rows.push_back(CheckRow{name, measured, bound * tolerance_scale, true});
    }
    void lower(const std::string& name, double measured, double bound) {
        rows.push_back(CheckRow{name, measured, bound, false});
    }
};

std::vector<double> verify_times(const ResolvedRun& run, std::size_t cap) {
    std::vector<double> times = run.times;
    if (times.size() > cap) {
        std::vector<double> reduced;
        reduced.reserve(cap);
        const double stride = static_cast<double>(times.size() - 1) / (cap - 1);
        for (std::size_t i = 0; i < cap; ++i) {
            reduced.push_back(times[static_cast<std::size_t>(std::lround(i * stride))]);
        }
        times.swap(reduced);
    }
    return times;
}

void riccati_suite(const ResolvedRun& run, CheckList& checks) {
    const ModelParams& params = run.ti_params;
    const BlockOperator hqe = model::build_hqe(params, run.env);
    const double h_scale = 1.0 + hqe.flat().norm();

    if (params.alpha == 0.0) {
        const RiccatiSolution sol =
            riccati::solve_commuting(run.env, params, Branch::PositiveF);
        checks.upper("riccati/zero-solution-residual",
                     riccati::riccati_residual_linear(hqe, sol.materialize()).norm() / h_scale,
                     1e-10);
        return;
    }

    const RiccatiSolution pos = riccati::solve_commuting(run.env, params, Branch::PositiveF);
    const RiccatiSolution neg = riccati::solve_commuting(run.env, params, Branch::NegativeFbar);

    double root = 0.0, product = 0.0;
    for (Eigen::Index n = 0; n < pos.dim(); ++n) {
        const double lambda = pos.e_coupling(n) + params.beta;
        for (const RiccatiSolution* sol : {&pos, &neg}) {
            const double x = sol->x(n);
            root = std::max(root, std::abs(params.alpha * x * x + 2.0 * lambda * x - params.alpha));
        }
        product = std::max(product, std::abs(pos.x(n) * neg.x(n) + 1.0));
    }
    checks.upper("riccati/root-property", root, 1e-10);
    checks.upper("riccati/branch-product", product, 1e-12);
    checks.lower("riccati/positivity", pos.x.minCoeff(), 0.0);

    const linalg::ComplexMatrix x_pos = pos.materialize();
    checks.upper("riccati/residual-positive",
                 riccati::riccati_residual_linear(hqe, x_pos).norm() / h_scale, 1e-10);
    checks.upper("riccati/residual-negative",
                 riccati::riccati_residual_linear(hqe, neg.materialize()).norm() / h_scale, 1e-10);

    const linalg::ComplexMatrix h_plus = run.env.h_plus();
    const linalg::ComplexMatrix h_minus = run.env.h_minus();
    checks.upper("riccati/commutation",
                 std::max((x_pos * h_plus - h_plus * x_pos).norm(),
                          (x_pos * h_minus - h_minus * x_pos).norm()),
                 1e-10);

    const riccati::SxPair sx = riccati::build_sx(x_pos);
    checks.upper("riccati/sx-inverse",
                 (sx.sx * sx.sx_inv - BlockOperator::identity(pos.dim())).flat().norm(), 1e-10);

    const BlockOperator diag = riccati::block_diagonalize(hqe, x_pos, checks.tolerance_scale);
    checks.upper("riccati/block-offdiagonal", diag.off_diagonal_norm(), 1e-9);

    const std::vector<riccati::LocalFrame> frames = riccati::local_frames(pos, params);
    Eigen::VectorXd h_all(2 * pos.dim());
    double vec_residual = 0.0, diag_residual = 0.0;
    double witness = std::numeric_limits<double>::infinity();
    for (const auto& f : frames) {
        h_all(2 * f.index) = f.h_plus;
        h_all(2 * f.index + 1) = f.h_minus;
        const Eigen::Vector2d plus_vec(-f.x_bar, 1.0), minus_vec(-f.x, 1.0);
        vec_residual = std::max(vec_residual, (f.h_n * plus_vec - f.h_plus * plus_vec).norm());
        vec_residual = std::max(vec_residual, (f.h_n * minus_vec - f.h_minus * minus_vec).norm());
        const Eigen::Matrix2d similar = f.f_n.inverse() * f.h_n * f.f_n;
        diag_residual = std::max({diag_residual, std::abs(similar(0, 1)), std::abs(similar(1, 0)),
                                  std::abs(similar(0, 0) - f.h_plus),
                                  std::abs(similar(1, 1) - f.h_minus)});
        witness = std::min({witness, std::abs(f.g_n.trace() - f.f_n.trace()),
                            std::abs(f.g_n.determinant() - f.f_n.determinant())});
    }
    checks.upper("riccati/frame-eigenvectors", vec_residual, 1e-10);
    checks.upper("riccati/frame-diagonalization", diag_residual, 1e-10);
    checks.lower("riccati/frame-nonsimilarity", witness, 1e-9);

    std::sort(h_all.begin(), h_all.end());
    const Eigen::VectorXd full =
        linalg::herm_eig(HermitianOperator(hqe.flat())).eigenvalues;
    checks.upper("riccati/spectrum-equality", (h_all - full).cwiseAbs().maxCoeff(), 1e-9);
}

void symmetry_suite(const ResolvedRun& run, std::mt19937_64& rng, CheckList& checks) {
    const ModelParams& params = run.ti_params;
    const AntilinearMap k = AntilinearMap::conjugation(run.env.dim());
    const linalg::ComplexMatrix& he = run.env.h_env().matrix();

    checks.upper("symmetry/k-involution",
                 (k.factor() * k.factor().conjugate() -
                  linalg::ComplexMatrix::Identity(k.dim(), k.dim()))
                     .norm(),
                 1e-12);
    checks.upper("symmetry/k-transpose-rule",
                 (linalg::antilinear_conjugate(k, he) - he.transpose()).norm(), 1e-12);

    std::uniform_real_distribution<double> time_dist(0.0, 5.0);
    double ht_residual = 0.0;
    for (int i = 0; i < 10; ++i) {
        const BlockOperator ht = model::build_ht(time_dist(rng), params, run.env);
        ht_residual = std::max(ht_residual, riccati::riccati_residual_antilinear(ht, k).norm());
    }
    checks.upper("symmetry/ht-residual-k", ht_residual, 1e-12);

    const model::HbarPair hbar = model::build_hbar(params, run.env);
    checks.upper("symmetry/hbar-residual-k",
                 riccati::riccati_residual_antilinear(hbar.hbar, k).norm(), 1e-12);
    checks.upper("symmetry/hbar-unitary",
                 (hbar.u * hbar.u.adjoint() - BlockOperator::identity(run.env.dim())).flat().norm(),
                 1e-12);
}

void kraus_suite(const ResolvedRun& run, std::mt19937_64& rng, CheckList& checks) {
    const ModelParams& params = run.ti_params;
    const RiccatiSolution sol = riccati::solve_commuting(run.env, params, run.branch);
    const std::vector<double> times = verify_times(run, 5);

    double completeness = 0.0, unitarity = 0.0, route = 0.0;
    for (double t : times) {
        const dynamics::KrausFamily family =
            dynamics::kraus_family(HermitianOperator(run.rho_env), sol, params, t);
        completeness = std::max(completeness, family.completeness_defect());
        for (std::size_t n = 0; n < family.size(); ++n) {
            unitarity = std::max(unitarity, (family.unitary(n).adjoint() * family.unitary(n) -
                                             Eigen::Matrix2cd::Identity())
                                                .norm());
        }
        const QubitState via_kraus = dynamics::kraus_apply(family, run.qubit);
        const QubitState via_trace = dynamics::reduced_dynamics(
            JointState::product(run.qubit, run.rho_env), sol, params, t);
        route = std::max(route, (via_kraus.rho() - via_trace.rho()).norm());
    }
    checks.upper("kraus/completeness", completeness, 1e-12);
    checks.upper("kraus/unitarity", unitarity, 1e-10);
    checks.upper("kraus/route-equivalence", route, 1e-10);

    // Correlated route: configured structured state, or a synthesized
    // classically-correlated one.
    StructuredJoint corr;
    if (run.correlated) {
        corr = *run.correlated;
    } else {
        corr.gamma = linalg::ComplexMatrix::Zero(2, 2);
        corr.gamma(0, 0) = 0.6;
        corr.gamma(1, 1) = 0.4;
        corr.qubit_factors = {random_qubit_state(rng).rho(), random_qubit_state(rng).rho()};
        corr.env_factors = {random_density(rng, run.env.dim()), random_density(rng, run.env.dim())};
    }
    double corr_route = 0.0;
    const JointState full = JointState::structured(corr);
    for (double t : times) {
        const QubitState via_formula = dynamics::correlated_dynamics(corr, sol, params, t);
        const QubitState via_trace = dynamics::reduced_dynamics(full, sol, params, t);
        corr_route = std::max(corr_route, (via_formula.rho() - via_trace.rho()).norm());
    }
    checks.upper("kraus/correlated-route", corr_route, 1e-10);

    std::uniform_real_distribution<double> time_dist(0.0, 5.0);
    double trace_drift = 0.0, min_eig = 0.0;
    for (int i = 0; i < 100; ++i) {
        const dynamics::KrausFamily family = dynamics::kraus_family(
            HermitianOperator(run.rho_env), sol, params, time_dist(rng));
        const QubitState out = dynamics::kraus_apply(family, random_qubit_state(rng));
        trace_drift = std::max(trace_drift, std::abs(out.rho().trace() - Complex(1.0, 0.0)));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(out.rho());
        min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
    }
    checks.upper("kraus/fuzz-trace-drift", trace_drift, 1e-12);
    checks.lower("kraus/fuzz-min-eigenvalue", min_eig, -1e-10);
}

void frame_suite(const ResolvedRun& run, std::mt19937_64& rng, CheckList& checks) {
    const ModelParams& params = run.ti_params;
    const RiccatiSolution sol = riccati::solve_commuting(run.env, params, run.branch);
    const Eigen::Index d = run.env.dim();
    const BlockOperator hqe = model::build_hqe(params, run.env);

    std::uniform_real_distribution<double> time_dist(0.0, 3.0);
    double unitarity = 0.0, oracle_gap = 0.0, group = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double t1 = time_dist(rng), t2 = time_dist(rng);
        const BlockOperator u1 = dynamics::evolve_block(sol, params, t1);
        const BlockOperator u2 = dynamics::evolve_block(sol, params, t2);
        const BlockOperator u12 = dynamics::evolve_block(sol, params, t1 + t2);
        unitarity = std::max(
            unitarity,
            (u1.flat() * u1.flat().adjoint() - linalg::ComplexMatrix::Identity(2 * d, 2 * d)).norm());
        group = std::max(group, ((u1 * u2).flat() - u12.flat()).norm());
        oracle_gap = std::max(oracle_gap, (u1.flat() - linalg::expm_oracle(Complex(0.0, -t1) * hqe.flat())).norm());
    }
    checks.upper("frame/unitarity", unitarity, 1e-10);
    checks.upper("frame/group-property", group, 1e-9);
    checks.upper("frame/expm-oracle", oracle_gap, 1e-8);

    // Rotating-frame pipeline against the lab-frame integration oracle.
    const std::vector<double> times = verify_times(run, 20);
    const JointState joint = run.joint();
    const std::vector<QubitState> lab_states =
        dynamics::ode_oracle(run.params, run.env, joint, times);
    double frame_gap = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const QubitState rotating = dynamics::reduced_dynamics(joint, sol, params, times[i]);
        const QubitState mapped = dynamics::rotating_frame_map(rotating, run.params, times[i]);
        frame_gap = std::max(frame_gap,
                             (mapped.bloch() - lab_states[i].bloch()).cwiseAbs().maxCoeff());
    }
    checks.upper("frame/rotating-equivalence", frame_gap, 1e-6);
}

}  // namespace

int run_verify(const RunConfig& config, Suite suite, const RunOptions& options, std::ostream& out,
               std::ostream& err) {
    try {
        const ResolvedRun run = resolve_run(config);
        if (!run.env.commuting()) {
            std::ostringstream msg;
            msg << "verify: commuting solver inapplicable, commutator residual "
                << run.env.commutator_residual();
            throw ModelError(msg.str());
        }
        if (run.ti_params.alpha == 0.0 && run.branch == Branch::NegativeFbar) {
            throw ModelError("verify: the negative branch requires alpha != 0");
        }

        std::mt19937_64 rng(options.seed);
        CheckList checks;
        checks.tolerance_scale = options.tolerance_scale;
        if (suite == Suite::Riccati || suite == Suite::All) riccati_suite(run, checks);
        if (suite == Suite::Symmetry || suite == Suite::All) symmetry_suite(run, rng, checks);
        if (suite == Suite::Kraus || suite == Suite::All) kraus_suite(run, rng, checks);
        if (suite == Suite::Frame || suite == Suite::All) frame_suite(run, rng, checks);

        int failed = 0;
        for (const auto& row : checks.rows) {
            const bool ok = row.passed();
            if (!ok) ++failed;
            char measured[32], bound[32];
            std::snprintf(measured, sizeof(measured), "%.3e", row.measured);
            std::snprintf(bound, sizeof(bound), "%.3e", row.bound);
            out << (ok ? "[PASS] " : "[FAIL] ") << row.name << " measured=" << measured
                << (row.is_upper_bound ? " bound<=" : " bound>=") << bound << "\n";
        }
        out << "verify: " << checks.rows.size() << " checks, "
            << (checks.rows.size() - static_cast<std::size_t>(failed)) << " passed, " << failed
            << " failed\n";
        return failed == 0 ? kExitOk : kExitNumeric;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitModel;
    }
}

}  // namespace qdec::cli
