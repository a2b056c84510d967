#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zeno/zeno.hpp"

namespace zeno {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvVersion = 1;

// schema or syntax problem in a config document
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelConfig {
    int d_A = 2, d_B = 2;
    Mat H_A, H_AB, H_B;
    std::vector<Mat> jumps;
    Mat hamiltonian_part;
    std::optional<double> gamma;
    std::vector<double> gamma_grid;
    std::uint64_t seed = 0;
    std::map<std::string, double> tolerances;

    bool operator==(const ModelConfig&) const;
};

nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j, const std::string& what);

ModelConfig parse_config(const nlohmann::json& j);
ModelConfig parse_config_text(const std::string& text);
ModelConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ModelConfig& cfg);

// builds and validates the model; throws ModelError on an invariant violation
CompositeModel to_model(const ModelConfig& cfg);

// the two-qubit example, generated from beta
ModelConfig example1_config(double beta);

// SHA-256 hex of the canonical (sorted, compact) dump
std::string config_digest(const ModelConfig& cfg);
std::string sha256_hex(const std::string& bytes);

// write to a sibling temp file, then rename over the target
void atomic_write(const std::filesystem::path& path, const std::string& contents);

}  // namespace zeno
