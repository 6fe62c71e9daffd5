#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "latticewave/errors.hpp"

namespace lw {

// CSV with a versioned comment header: "# latticewave v1, <name>, <notes>".
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& name, const std::string& notes,
              const std::vector<std::string>& columns)
        : path_(path) {
        fp_ = std::fopen(path.c_str(), "wb");
        if (!fp_) throw IOError("cannot open " + path);
        std::fprintf(fp_, "# latticewave v1, %s%s%s\n", name.c_str(), notes.empty() ? "" : ", ",
                     notes.c_str());
        for (std::size_t i = 0; i < columns.size(); ++i)
            std::fprintf(fp_, "%s%s", columns[i].c_str(), i + 1 == columns.size() ? "\n" : ",");
    }
    ~CsvWriter() {
        if (fp_) std::fclose(fp_);
    }
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            std::fprintf(fp_, "%.17g%s", values[i], i + 1 == values.size() ? "\n" : ",");
    }
    void row_mixed(const std::vector<std::string>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            std::fprintf(fp_, "%s%s", values[i].c_str(), i + 1 == values.size() ? "\n" : ",");
    }
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::FILE* fp_ = nullptr;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// FNV-1a 64-bit checksum of a file, for run manifests.
inline std::uint64_t fnv1a64_file(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw IOError("cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    unsigned char buf[65536];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), fp)) > 0)
        for (std::size_t i = 0; i < n; ++i) {
            h ^= buf[i];
            h *= 1099511628211ull;
        }
    std::fclose(fp);
    return h;
}

}  // namespace lw
