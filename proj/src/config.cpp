#include "latticewave/config.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>

#include "latticewave/csvio.hpp"
#include "latticewave/errors.hpp"

namespace lw {

std::string emit_manifest(const RunConfig& config, const std::vector<std::string>& output_paths,
                          double wall_seconds, const std::string& manifest_path) {
    nlohmann::json doc;
    doc["tool"] = "latticewave";
    doc["version"] = "1.0.0";
    doc["subcommand"] = config.subcommand;
    doc["config"] = nlohmann::json::object();
    for (const auto& [k, v] : config.values) doc["config"][k] = v;
    doc["wall_time_s"] = wall_seconds;
    doc["outputs"] = nlohmann::json::array();
    for (const auto& p : output_paths) {
        nlohmann::json rec;
        rec["path"] = p;
        rec["bytes"] = static_cast<std::uint64_t>(std::filesystem::file_size(p));
        char hex[20];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(fnv1a64_file(p)));
        rec["fnv1a64"] = hex;
        doc["outputs"].push_back(rec);
    }
    std::string text = doc.dump(2);
    if (!manifest_path.empty()) {
        std::FILE* fp = std::fopen(manifest_path.c_str(), "wb");
        if (!fp) throw IOError("cannot open " + manifest_path);
        std::fwrite(text.data(), 1, text.size(), fp);
        std::fputc('\n', fp);
        std::fclose(fp);
    }
    return text;
}

}  // namespace lw
