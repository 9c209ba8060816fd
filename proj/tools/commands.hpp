#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace permrelax::cli {

enum class Format { csv, json };

/// Bad invocation detected after flag parsing (maps to exit code 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    /// Raw --lambda values; each command parses its own (shuffle accepts "tuned").
    std::vector<std::string> lambdas;
    std::vector<std::uint64_t> seeds;
    std::optional<std::string> out;
    Format format = Format::csv;
};

struct QapOptions {
    std::string instance;
    bool general = false;
    std::size_t restarts = 8;
};

struct CurvesOptions {
    int example = 1;
    std::vector<double> ms;
    std::size_t points = 201;
};

struct ShuffleOptions {
    std::size_t n = 16;
    std::size_t samples = 512;
    double noise = 0.0;
    std::size_t restarts = 8;
    std::size_t iterations = 0;
    std::optional<std::string> trace_out;
};

int cmd_verify(const std::string& suite, const CommonOptions& common, std::ostream& log);
int cmd_qap(const QapOptions& opts, const CommonOptions& common);
int cmd_curves(const CurvesOptions& opts, const CommonOptions& common);
int cmd_shuffle(const ShuffleOptions& opts, const CommonOptions& common);

/// Writes `text` to path via a sibling temp file and rename; stdout when path is empty.
void write_output(const std::optional<std::string>& path, const std::string& text);

}  // namespace permrelax::cli
