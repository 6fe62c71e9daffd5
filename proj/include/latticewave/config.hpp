#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lw {

// Echo of the effective run configuration, embedded into manifests and
// round-tripped by --dump-config.
struct RunConfig {
    std::string subcommand;
    std::map<std::string, std::string> values;
};

struct OutputRecord {
    std::string path;
    std::uint64_t bytes = 0;
    std::string fnv1a64;
};

// JSON manifest with the config echo, tool version, wall time and output
// checksums; returns the serialized document.
std::string emit_manifest(const RunConfig& config, const std::vector<std::string>& output_paths,
                          double wall_seconds, const std::string& manifest_path);

}  // namespace lw
