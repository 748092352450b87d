#pragma once

// Command implementations behind the eiac command-line tool.
// Each returns the process exit status; diagnostics go to `err`.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eiac/config.hpp"
#include "eiac/freq_expr.hpp"

namespace eiac::cli {

inline constexpr const char* kTfHeader = "freq_hz,real,imag,mag_db,phase_deg_unwrapped";
inline constexpr const char* kCoeffsHeader =
    "freq_hz,Ai_re,Ai_im,Bi_re,Bi_im,Ci_re,Ci_im,Ao_re,Ao_im,Bo_re,Bo_im,Co_re,Co_im";

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,          // bad input, evaluation error
    kThresholdBreach = 3,  // validate found an error above threshold
};

struct GridOverride {
    std::optional<double> f_min;
    std::optional<double> f_max;
    std::optional<int> ppd;
};

struct TfOptions {
    std::filesystem::path config;
    std::string which;
    bool open_loop = false;
    GridOverride grid;
    ConfigOverrides set;
    std::filesystem::path out;
};

struct MarginsOptions {
    std::filesystem::path config;
    GridOverride grid;
    ConfigOverrides set;
    std::filesystem::path out;
};

struct TmlgOptions {
    std::filesystem::path source;
    std::vector<std::filesystem::path> loads;
    GridOverride grid;
    std::filesystem::path out;
};

struct ValidateOptions {
    std::uint64_t seed = 1;
    int cases = 200;
    std::optional<std::filesystem::path> out;
};

struct CoeffsOptions {
    std::filesystem::path config;
    GridOverride grid;
    ConfigOverrides set;
    std::filesystem::path out;
};

int cmd_tf(const TfOptions& o, std::ostream& out, std::ostream& err);
int cmd_margins(const MarginsOptions& o, std::ostream& out, std::ostream& err);
int cmd_tmlg(const TmlgOptions& o, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err);
int cmd_coeffs(const CoeffsOptions& o, std::ostream& out, std::ostream& err);

/// One CSV row per sample, `%.9e` fields, LF endings, header kTfHeader.
std::string format_sweep_csv(const SweepResult& r);

/// Writes via a temporary file in the same directory and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// `<dir>/<stem><suffix>` next to `path`.
std::filesystem::path sibling(const std::filesystem::path& path, const std::string& suffix);

/// Full command line: subcommands tf, margins, tmlg, validate, coeffs.
int run(int argc, char** argv);

} // namespace eiac::cli
