#include "zeno/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "zeno/models.hpp"

namespace zeno {

using nlohmann::json;

namespace {

bool same(const Mat& a, const Mat& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

const json& field(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    return j.at(key);
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError(what + " must be a number");
    return j.get<double>();
}

void require_square(const Mat& m, int d, const std::string& what) {
    if (m.rows() != d || m.cols() != d) {
        std::ostringstream os;
        os << what << " must be " << d << "x" << d << ", got " << m.rows() << "x" << m.cols();
        throw ConfigError(os.str());
    }
}

}  // namespace

bool ModelConfig::operator==(const ModelConfig& o) const {
    if (d_A != o.d_A || d_B != o.d_B || seed != o.seed || gamma != o.gamma || gamma_grid != o.gamma_grid ||
        tolerances != o.tolerances || jumps.size() != o.jumps.size())
        return false;
    for (size_t i = 0; i < jumps.size(); ++i)
        if (!same(jumps[i], o.jumps[i])) return false;
    return same(H_A, o.H_A) && same(H_AB, o.H_AB) && same(H_B, o.H_B) && same(hamiltonian_part, o.hamiltonian_part);
}

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw ConfigError(what + " must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array()) throw ConfigError(what + " rows must be arrays");
    const auto m = static_cast<Eigen::Index>(j[0].size());
    Mat out(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = j[i];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m)
            throw ConfigError(what + " is ragged");
        for (Eigen::Index k = 0; k < m; ++k) {
            const json& z = row[k];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                throw ConfigError(what + " entries must be [re, im] pairs");
            out(i, k) = cplx(z[0].get<double>(), z[1].get<double>());
            if (!std::isfinite(out(i, k).real()) || !std::isfinite(out(i, k).imag()))
                throw ConfigError(what + " has a non-finite entry");
        }
    }
    return out;
}

ModelConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ModelConfig c;
    const json& dims = field(j, "dims");
    if (!dims.is_object()) throw ConfigError("dims must be an object");
    const json& da = field(dims, "d_A");
    const json& db = field(dims, "d_B");
    if (!da.is_number_integer() || !db.is_number_integer() || da.get<int>() < 1 || db.get<int>() < 1)
        throw ConfigError("dims.d_A and dims.d_B must be positive integers");
    c.d_A = da.get<int>();
    c.d_B = db.get<int>();

    c.H_A = matrix_from_json(field(j, "H_A"), "H_A");
    c.H_AB = matrix_from_json(field(j, "H_AB"), "H_AB");
    c.H_B = matrix_from_json(field(j, "H_B"), "H_B");
    require_square(c.H_A, c.d_A, "H_A");
    require_square(c.H_AB, c.d_A * c.d_B, "H_AB");
    require_square(c.H_B, c.d_B, "H_B");

    const json& dis = field(j, "dissipator_A");
    if (!dis.is_object()) throw ConfigError("dissipator_A must be an object");
    const json& jumps = field(dis, "jumps");
    if (!jumps.is_array()) throw ConfigError("dissipator_A.jumps must be an array");
    for (size_t i = 0; i < jumps.size(); ++i) {
        const std::string what = "dissipator_A.jumps[" + std::to_string(i) + "]";
        c.jumps.push_back(matrix_from_json(jumps[i], what));
        require_square(c.jumps.back(), c.d_A, what);
    }
    if (dis.contains("hamiltonian_part")) {
        c.hamiltonian_part = matrix_from_json(dis.at("hamiltonian_part"), "dissipator_A.hamiltonian_part");
        require_square(c.hamiltonian_part, c.d_A, "dissipator_A.hamiltonian_part");
    } else {
        c.hamiltonian_part = Mat::Zero(c.d_A, c.d_A);
    }

    if (j.contains("gamma")) c.gamma = number(j.at("gamma"), "gamma");
    if (j.contains("gamma_grid")) {
        const json& g = j.at("gamma_grid");
        if (!g.is_array()) throw ConfigError("gamma_grid must be an array");
        for (const json& x : g) {
            const double v = number(x, "gamma_grid entries");
            if (!(v > 0) || !std::isfinite(v)) throw ConfigError("gamma_grid entries must be positive");
            c.gamma_grid.push_back(v);
        }
    }
    if (c.gamma && (!(*c.gamma >= 0) || !std::isfinite(*c.gamma)))
        throw ConfigError("gamma must be finite and >= 0");
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_integer() || s.get<std::int64_t>() < 0) throw ConfigError("seed must be a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        if (!t.is_object()) throw ConfigError("tolerances must be an object");
        for (const auto& [k, v] : t.items()) c.tolerances[k] = number(v, "tolerances." + k);
    }
    return c;
}

ModelConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

ModelConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str());
}

json to_json(const ModelConfig& c) {
    json j;
    j["dims"] = {{"d_A", c.d_A}, {"d_B", c.d_B}};
    j["H_A"] = matrix_to_json(c.H_A);
    j["H_AB"] = matrix_to_json(c.H_AB);
    j["H_B"] = matrix_to_json(c.H_B);
    json jumps = json::array();
    for (const Mat& m : c.jumps) jumps.push_back(matrix_to_json(m));
    j["dissipator_A"] = {{"jumps", jumps}, {"hamiltonian_part", matrix_to_json(c.hamiltonian_part)}};
    if (c.gamma) j["gamma"] = *c.gamma;
    if (!c.gamma_grid.empty()) j["gamma_grid"] = c.gamma_grid;
    j["seed"] = c.seed;
    if (!c.tolerances.empty()) j["tolerances"] = c.tolerances;
    return j;
}

CompositeModel to_model(const ModelConfig& c) {
    double gamma = 1.0;
    if (c.gamma)
        gamma = *c.gamma;
    else if (!c.gamma_grid.empty())
        gamma = c.gamma_grid.front();
    LindbladSpec da;
    try {
        da = LindbladSpec(SpaceTag::a(c.d_A, c.d_B), c.jumps, c.hamiltonian_part);
    } catch (const std::invalid_argument& e) {
        throw ModelError(std::string("dissipator_A: ") + e.what());
    }
    return make_model(c.d_A, c.d_B, c.H_A, c.H_AB, c.H_B, da, gamma);
}

ModelConfig example1_config(double beta) {
    const CompositeModel m = example1(beta);
    const Example1Params p = example1_params(beta);
    ModelConfig c;
    c.d_A = c.d_B = 2;
    c.H_A = pauli::z();
    c.H_AB = kron(pauli::minus(), pauli::plus()) + kron(pauli::plus(), pauli::minus());
    c.H_B = example1_HB(beta);
    c.jumps = {p.c * pauli::plus(), p.s * pauli::minus()};
    c.hamiltonian_part = Mat::Zero(2, 2);
    c.gamma = m.gamma;
    c.gamma_grid = {10, 30, 100, 300};
    c.seed = 0;
    return c;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string config_digest(const ModelConfig& cfg) { return sha256_hex(to_json(cfg).dump()); }

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace zeno
