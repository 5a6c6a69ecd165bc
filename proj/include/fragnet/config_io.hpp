#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fragnet/sim_config.hpp"

namespace fragnet {

/// Grid lists for a parameter sweep. An empty vector means the dimension is
/// not swept and every cell inherits the base config value.
struct SweepSpec {
    std::vector<double> alpha, lambda_d, lambda_b, lambda_s, gamma, phi;
    std::vector<Mode> mode;
    std::vector<int> n, horizon;
    int replicas = 1;
    std::size_t cap = 4096;

    bool any() const;
    std::size_t cell_count() const;
};

/// A parsed config: the effective key set (defaults merged, suitable for
/// manifest emission) alongside the constructed objects.
struct ConfigDoc {
    std::map<std::string, std::string> entries;
    SimConfig sim;
    SweepSpec sweep;
    bool has_sweep = false;
};

/// Syntax pass over "key = value" lines. '#' starts a comment, blank lines
/// are skipped, duplicate keys are rejected. manifest.* keys are dropped so
/// a manifest is itself a valid config.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Semantic pass: rejects unknown keys, fills defaults, constructs the
/// validated SimConfig and SweepSpec. Errors name the offending key.
ConfigDoc build_config(const std::map<std::string, std::string>& raw);

ConfigDoc parse_config_text(const std::string& text);
ConfigDoc load_config(const std::filesystem::path& path);

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

struct ManifestInfo {
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> replica_seeds;
    std::vector<std::string> outputs;
};

/// Plain-text manifest: the effective config followed by manifest.* metadata
/// (engine version, seeds, artifact list). Feeding the manifest back through
/// parse_config reproduces the run.
std::string render_manifest(const ConfigDoc& doc, const ManifestInfo& info);

}  // namespace fragnet
