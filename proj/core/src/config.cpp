// config.cpp - Config document handling and matrix file IO.

#include "qdec/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qdec::cli {

namespace {

using nlohmann::ordered_json;

double require_finite_number(const ordered_json& j, const std::string& field) {
    if (!j.is_number()) {
        throw ConfigError("config: " + field + " must be a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError("config: " + field + " must be finite");
    }
    return v;
}

const ordered_json& require_field(const ordered_json& j, const std::string& key,
                                  const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError("config: missing field " + where + key);
    }
    return *it;
}

std::vector<double> require_number_array(const ordered_json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError("config: " + field + " must be a non-empty array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& item : j) out.push_back(require_finite_number(item, field + "[]"));
    return out;
}

std::string require_string(const ordered_json& j, const std::string& field) {
    if (!j.is_string()) {
        throw ConfigError("config: " + field + " must be a string");
    }
    return j.get<std::string>();
}

InitialSection parse_initial(const ordered_json& j) {
    InitialSection initial;

    const ordered_json& qubit = require_field(j, "qubit", "initial.");
    if (qubit.is_object() && qubit.contains("bloch")) {
        const auto bloch = require_number_array(qubit["bloch"], "initial.qubit.bloch");
        if (bloch.size() != 3) {
            throw ConfigError("config: initial.qubit.bloch must have exactly 3 components");
        }
        initial.qubit_bloch = std::array<double, 3>{bloch[0], bloch[1], bloch[2]};
    } else if (qubit.is_object() && qubit.contains("matrix")) {
        initial.qubit_matrix_path = require_string(qubit["matrix"], "initial.qubit.matrix");
    } else {
        throw ConfigError("config: initial.qubit needs either a bloch vector or a matrix file");
    }

    const ordered_json& env = require_field(j, "environment", "initial.");
    if (env.is_string()) {
        const std::string kind = env.get<std::string>();
        if (kind != "maximallyMixed" && kind != "groundState") {
            throw ConfigError("config: initial.environment must be maximallyMixed, groundState, or a matrix object");
        }
        initial.env_kind = kind;
    } else if (env.is_object() && env.contains("matrix")) {
        initial.env_kind = "matrix";
        initial.env_matrix_path = require_string(env["matrix"], "initial.environment.matrix");
    } else {
        throw ConfigError("config: initial.environment must be maximallyMixed, groundState, or a matrix object");
    }

    if (j.contains("correlated")) {
        const ordered_json& corr = j["correlated"];
        CorrelatedSection section;
        section.gamma_path = require_string(require_field(corr, "gamma", "initial.correlated."),
                                            "initial.correlated.gamma");
        for (const auto& item : require_field(corr, "qubitFactors", "initial.correlated.")) {
            section.qubit_factor_paths.push_back(require_string(item, "initial.correlated.qubitFactors[]"));
        }
        for (const auto& item : require_field(corr, "environmentFactors", "initial.correlated.")) {
            section.env_factor_paths.push_back(require_string(item, "initial.correlated.environmentFactors[]"));
        }
        if (section.qubit_factor_paths.empty() || section.env_factor_paths.empty()) {
            throw ConfigError("config: initial.correlated factor lists must be non-empty");
        }
        initial.correlated = std::move(section);
    }
    return initial;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& base_dir) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config: top level must be an object");
    }

    RunConfig config;
    config.base_dir = base_dir;

    const ordered_json& model = require_field(j, "model", "");
    config.model.alpha = require_finite_number(require_field(model, "alpha", "model."), "model.alpha");
    config.model.beta = require_finite_number(require_field(model, "beta", "model."), "model.beta");
    config.model.omega = require_finite_number(require_field(model, "omega", "model."), "model.omega");

    const ordered_json& env = require_field(j, "environment", "");
    const bool has_spin_bath = env.contains("spinBath");
    const bool has_explicit = env.contains("explicit");
    if (has_spin_bath == has_explicit) {
        throw ConfigError("config: environment needs exactly one of spinBath or explicit");
    }
    if (has_spin_bath) {
        const ordered_json& bath = env["spinBath"];
        SpinBathSection section;
        section.omegas = require_number_array(require_field(bath, "omegas", "environment.spinBath."),
                                              "environment.spinBath.omegas");
        section.couplings = require_number_array(
            require_field(bath, "couplings", "environment.spinBath."), "environment.spinBath.couplings");
        if (section.omegas.size() != section.couplings.size()) {
            throw ConfigError("config: environment.spinBath.omegas and couplings must have equal length");
        }
        config.spin_bath = std::move(section);
    } else {
        const ordered_json& exp = env["explicit"];
        ExplicitEnvSection section;
        section.h_env_path = require_string(require_field(exp, "hE", "environment.explicit."),
                                            "environment.explicit.hE");
        section.coupling_path = require_string(require_field(exp, "v", "environment.explicit."),
                                               "environment.explicit.v");
        config.explicit_env = std::move(section);
    }

    config.initial = parse_initial(require_field(j, "initial", ""));

    const ordered_json& grid = require_field(j, "timeGrid", "");
    config.time_grid.start = require_finite_number(require_field(grid, "start", "timeGrid."), "timeGrid.start");
    config.time_grid.stop = require_finite_number(require_field(grid, "stop", "timeGrid."), "timeGrid.stop");
    const ordered_json& points = require_field(grid, "points", "timeGrid.");
    if (!points.is_number_integer() || points.get<long long>() < 1) {
        throw ConfigError("config: timeGrid.points must be an integer >= 1");
    }
    config.time_grid.points = points.get<int>();
    if (config.time_grid.stop < config.time_grid.start) {
        throw ConfigError("config: timeGrid.stop must be >= timeGrid.start");
    }

    if (j.contains("branch")) {
        config.branch = require_string(j["branch"], "branch");
        if (config.branch != "positive" && config.branch != "negative") {
            throw ConfigError("config: branch must be positive or negative");
        }
    }

    if (j.contains("outputs")) {
        if (!j["outputs"].is_array()) {
            throw ConfigError("config: outputs must be an array");
        }
        for (const auto& item : j["outputs"]) {
            OutputSpec spec;
            spec.path = require_string(require_field(item, "path", "outputs[]."), "outputs[].path");
            spec.format = require_string(require_field(item, "format", "outputs[]."), "outputs[].format");
            if (spec.format != "csv" && spec.format != "jsonl") {
                throw ConfigError("config: outputs[].format must be csv or jsonl");
            }
            config.outputs.push_back(std::move(spec));
        }
    }
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), std::filesystem::path(path).parent_path().string());
}

std::string serialize_config(const RunConfig& config) {
    ordered_json j;
    j["model"] = {{"alpha", config.model.alpha},
                  {"beta", config.model.beta},
                  {"omega", config.model.omega}};

    if (config.spin_bath) {
        j["environment"] = {{"spinBath",
                             {{"omegas", config.spin_bath->omegas},
                              {"couplings", config.spin_bath->couplings}}}};
    } else if (config.explicit_env) {
        j["environment"] = {{"explicit",
                             {{"hE", config.explicit_env->h_env_path},
                              {"v", config.explicit_env->coupling_path}}}};
    }

    ordered_json initial;
    if (config.initial.qubit_bloch) {
        initial["qubit"] = {{"bloch", *config.initial.qubit_bloch}};
    } else if (config.initial.qubit_matrix_path) {
        initial["qubit"] = {{"matrix", *config.initial.qubit_matrix_path}};
    }
    if (config.initial.env_kind == "matrix") {
        initial["environment"] = {{"matrix", *config.initial.env_matrix_path}};
    } else {
        initial["environment"] = config.initial.env_kind;
    }
    if (config.initial.correlated) {
        initial["correlated"] = {{"gamma", config.initial.correlated->gamma_path},
                                 {"qubitFactors", config.initial.correlated->qubit_factor_paths},
                                 {"environmentFactors", config.initial.correlated->env_factor_paths}};
    }
    j["initial"] = std::move(initial);

    j["timeGrid"] = {{"start", config.time_grid.start},
                     {"stop", config.time_grid.stop},
                     {"points", config.time_grid.points}};
    j["branch"] = config.branch;

    ordered_json outputs = ordered_json::array();
    for (const auto& spec : config.outputs) {
        outputs.push_back({{"path", spec.path}, {"format", spec.format}});
    }
    j["outputs"] = std::move(outputs);

    return j.dump(2) + "\n";
}

std::string config_hash_hex(const RunConfig& config) {
    const std::string text = serialize_config(config);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

std::string format_complex(Complex value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value.real());
    std::string out(buf);
    std::snprintf(buf, sizeof(buf), "%.17g", std::abs(value.imag()));
    out += (std::signbit(value.imag()) ? "-" : "+");
    out += buf;
    out += "j";
    return out;
}

Complex parse_complex(const std::string& token) {
    if (token.empty()) {
        throw ConfigError("matrix: empty complex token");
    }
    const auto parse_double = [&](const std::string& text) -> double {
        if (text.empty() || text == "+" || text == "-") {
            // bare sign means unit coefficient, as in "1+j"
            return text == "-" ? -1.0 : 1.0;
        }
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) {
            throw ConfigError("matrix: malformed number '" + text + "' in token '" + token + "'");
        }
        return v;
    };

    if (token.back() != 'j') {
        return Complex(parse_double(token), 0.0);
    }
    const std::string body = token.substr(0, token.size() - 1);
    // Split at the last '+'/'-' that is not an exponent sign and not leading.
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        const char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        return Complex(0.0, parse_double(body));
    }
    return Complex(parse_double(body.substr(0, split)), parse_double(body.substr(split)));
}

ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("matrix: cannot open " + path);
    }
    std::vector<std::vector<Complex>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.front() == '#') continue;
        std::istringstream tokens(line);
        std::vector<Complex> row;
        std::string token;
        while (tokens >> token) row.push_back(parse_complex(token));
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ConfigError("matrix: ragged rows in " + path);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ConfigError("matrix: no data in " + path);
    }
    ComplexMatrix m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            m(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        }
    }
    return m;
}

void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("matrix: cannot write " + path);
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            if (k > 0) out << ' ';
            out << format_complex(m(i, k));
        }
        out << '\n';
    }
}

std::string library_version() {
#ifdef QDEC_VERSION_STRING
    return QDEC_VERSION_STRING;
#else
    return "unknown";
#endif
}

}  // namespace qdec::cli
