#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace kd {

inline constexpr const char* kReportSchema = "kd-report/1";

enum class ExitStatus { pass = 0, fail = 1, inconclusive = 2, input_error = 3 };

struct JobConfig {
    std::string command;
    std::string input;           // presentation file, or inline text when input_text is set
    std::optional<std::string> input_text;
    std::string field = "gf:101";
    int cutoff = 10;
    std::optional<std::string> polarity;  // overrides the presentation
    std::string format = "json";
    bool emit_matrices = false;
};

const std::vector<std::string>& cli_commands();

struct JobResult {
    ExitStatus status = ExitStatus::pass;
    nlohmann::ordered_json report;
};

JobResult run_job(const JobConfig& config);
// the report as printed: pretty JSON, or "key: value" lines with dotted keys and aligned rank tables
std::string render(const JobResult& r, const std::string& format);
// CLI entry point; writes the report to stdout and errors to stderr
int cli_main(int argc, char** argv);

}  // namespace kd
