#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optseq/adaptation.hpp"
#include "optseq/config.hpp"
#include "optseq/learner.hpp"

namespace optseq {

enum class EpisodeOutcome { Success, Violation, Timeout, InitReject };

std::string to_string(EpisodeOutcome o);

struct EpisodeResult {
    bool success = false;
    EpisodeOutcome outcome = EpisodeOutcome::Success;
    std::optional<std::string> failed_at;
    std::optional<ViolationKind> violation;
    std::int64_t env_steps = 0;
};

// One chained episode: a start drawn from the first option's origin set, then
// each option in turn until its termination fires, handing the state on.
EpisodeResult run_sequence_episode(const Environment& env, const std::vector<TrainedOption>& chain,
                                   std::uint64_t start_seed, int max_steps_per_option = 100);

struct SuccessReport {
    std::vector<std::string> chain;
    std::string method = "independent";
    std::vector<double> per_set_success;
    double mean = 0.0;
    double std = 0.0;     // population standard deviation over sets
    double pooled = 0.0;  // successes / episodes
    std::int64_t episodes = 0;
    std::int64_t successes = 0;
    std::map<std::string, std::int64_t> violation_histogram;  // every ViolationKind, zero included
    std::int64_t timeout_count = 0;
    std::int64_t init_reject_count = 0;
    std::map<std::string, std::int64_t> failed_at;  // option name -> failed episodes

    std::string label() const;  // "reach>grasp"
    bool operator==(const SuccessReport&) const = default;
};

// Episode (set s, episode e) uses derive_seed(master_seed, s, e).
SuccessReport measure_success(const Environment& env, const std::vector<TrainedOption>& chain,
                              const EvalProtocol& protocol, const std::string& method = "independent");

// Every contiguous subchain of length >= 2, ordered by length then start.
std::vector<SuccessReport> evaluate_all_subchains(const Environment& env, const std::vector<TrainedOption>& options,
                                                  const EvalProtocol& protocol,
                                                  const std::string& method = "independent");

struct ComplexityReport {
    std::string method;
    std::vector<std::pair<std::string, std::int64_t>> per_option_steps;  // chain order
    std::int64_t total_steps = 0;

    bool operator==(const ComplexityReport&) const = default;
};

ComplexityReport complexity_report(const std::vector<TrainedOption>& options, const std::string& method);
ComplexityReport complexity_report(const std::vector<AdaptationOutcome>& outcomes, const std::string& method);

enum class ReportFormat { Csv, Json, Markdown };

ReportFormat report_format_from_string(const std::string& s);
std::string to_string(ReportFormat f);

std::string render_success(const std::vector<SuccessReport>& reports, ReportFormat format);
std::string render_complexity(const std::vector<ComplexityReport>& reports, ReportFormat format);
std::string render_overlap(const std::vector<AdaptationOutcome>& outcomes, ReportFormat format);
std::string render_overlap(const OverlapReport& report, const std::string& result_option,
                           const std::string& origin_option, ReportFormat format);

std::vector<SuccessReport> parse_success_json(const std::string& text);
std::vector<ComplexityReport> parse_complexity_json(const std::string& text);

// Writes text to path, throwing IoError on failure.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace optseq
