#include "optseq/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "optseq/errors.hpp"
#include "optseq/parallel.hpp"
#include "optseq/rng.hpp"

namespace optseq {

using ojson = nlohmann::ordered_json;

std::string to_string(EpisodeOutcome o) {
    switch (o) {
        case EpisodeOutcome::Success: return "success";
        case EpisodeOutcome::Violation: return "violation";
        case EpisodeOutcome::Timeout: return "timeout";
        case EpisodeOutcome::InitReject: return "init_reject";
    }
    return "unknown";
}

EpisodeResult run_sequence_episode(const Environment& env, const std::vector<TrainedOption>& chain,
                                   std::uint64_t start_seed, int max_steps_per_option) {
    if (chain.empty()) throw ContractError("run_sequence_episode needs a non-empty chain");
    const auto& log = chain.front().origin_log;
    if (log.empty()) throw ProvenanceError("option '" + chain.front().spec.name + "' has no origin set");

    Rng rng(start_seed);
    WorldState s = log[uniform_index(rng, log.size())];
    EpisodeResult r;
    for (const auto& option : chain) {
        if (!(*option.spec.init)(s)) {
            r.outcome = EpisodeOutcome::InitReject;
            r.failed_at = option.spec.name;
            return r;
        }
        const Trajectory t = rollout(env, option, s, max_steps_per_option);
        r.env_steps += static_cast<std::int64_t>(t.length());
        if (t.violation) {
            r.outcome = EpisodeOutcome::Violation;
            r.violation = t.violation;
            r.failed_at = option.spec.name;
            return r;
        }
        if (!t.terminal) {
            r.outcome = EpisodeOutcome::Timeout;
            r.failed_at = option.spec.name;
            return r;
        }
        s = t.final_state();
    }
    r.success = true;
    return r;
}

std::string SuccessReport::label() const {
    std::string out;
    for (const auto& name : chain) out += (out.empty() ? "" : ">") + name;
    return out;
}

SuccessReport measure_success(const Environment& env, const std::vector<TrainedOption>& chain,
                              const EvalProtocol& protocol, const std::string& method) {
    protocol.validate();
    require_connected(chain);
    const auto sets = static_cast<std::size_t>(protocol.sets);
    const auto per_set = static_cast<std::size_t>(protocol.episodes_per_set);
    std::vector<EpisodeResult> results(sets * per_set);
    parallel_for(results.size(), [&](std::size_t i) {
        results[i] = run_sequence_episode(env, chain, derive_seed(protocol.master_seed, i / per_set, i % per_set),
                                          protocol.max_steps_per_option);
    });

    SuccessReport rep;
    rep.method = method;
    for (const auto& o : chain) rep.chain.push_back(o.spec.name);
    for (auto v : kAllViolations) rep.violation_histogram[to_string(v)] = 0;
    for (std::size_t set = 0; set < sets; ++set) {
        std::int64_t ok = 0;
        for (std::size_t e = 0; e < per_set; ++e) {
            const EpisodeResult& r = results[set * per_set + e];
            ++rep.episodes;
            if (r.success) {
                ++ok;
                continue;
            }
            ++rep.failed_at[*r.failed_at];
            if (r.outcome == EpisodeOutcome::Violation) ++rep.violation_histogram[to_string(*r.violation)];
            if (r.outcome == EpisodeOutcome::Timeout) ++rep.timeout_count;
            if (r.outcome == EpisodeOutcome::InitReject) ++rep.init_reject_count;
        }
        rep.successes += ok;
        rep.per_set_success.push_back(static_cast<double>(ok) / static_cast<double>(per_set));
    }
    double sum = 0.0;
    for (double v : rep.per_set_success) sum += v;
    rep.mean = sum / static_cast<double>(sets);
    double sq = 0.0;
    for (double v : rep.per_set_success) sq += (v - rep.mean) * (v - rep.mean);
    rep.std = std::sqrt(sq / static_cast<double>(sets));
    rep.pooled = static_cast<double>(rep.successes) / static_cast<double>(rep.episodes);
    return rep;
}

std::vector<SuccessReport> evaluate_all_subchains(const Environment& env, const std::vector<TrainedOption>& options,
                                                  const EvalProtocol& protocol, const std::string& method) {
    require_connected(options);
    std::vector<SuccessReport> out;
    for (std::size_t len = 2; len <= options.size(); ++len)
        for (std::size_t start = 0; start + len <= options.size(); ++start) {
            const std::vector<TrainedOption> sub(options.begin() + static_cast<std::ptrdiff_t>(start),
                                                 options.begin() + static_cast<std::ptrdiff_t>(start + len));
            out.push_back(measure_success(env, sub, protocol, method));
        }
    return out;
}

ComplexityReport complexity_report(const std::vector<TrainedOption>& options, const std::string& method) {
    ComplexityReport r{method, {}, 0};
    for (const auto& o : options) {
        r.per_option_steps.emplace_back(o.spec.name, o.steps_used);
        r.total_steps += o.steps_used;
    }
    return r;
}

ComplexityReport complexity_report(const std::vector<AdaptationOutcome>& outcomes, const std::string& method) {
    ComplexityReport r{method, {}, 0};
    for (const auto& o : outcomes) {
        const std::int64_t steps = o.skipped ? 0 : o.steps_used;
        r.per_option_steps.emplace_back(o.adapted.spec.name, steps);
        r.total_steps += steps;
    }
    return r;
}

ReportFormat report_format_from_string(const std::string& s) {
    for (auto f : {ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown})
        if (to_string(f) == s) return f;
    throw ConfigError("unknown report format '" + s + "' (csv, json, md)");
}

std::string to_string(ReportFormat f) {
    switch (f) {
        case ReportFormat::Csv: return "csv";
        case ReportFormat::Json: return "json";
        case ReportFormat::Markdown: return "md";
    }
    return "unknown";
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed(double v, int digits = 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

ojson to_json(const SuccessReport& r) {
    ojson j;
    j["chain"] = r.chain;
    j["method"] = r.method;
    j["episodes"] = r.episodes;
    j["successes"] = r.successes;
    j["mean"] = r.mean;
    j["std"] = r.std;
    j["pooled"] = r.pooled;
    j["timeout_count"] = r.timeout_count;
    j["init_reject_count"] = r.init_reject_count;
    j["violation_histogram"] = ojson::object();
    for (const auto& [k, v] : r.violation_histogram) j["violation_histogram"][k] = v;
    j["failed_at"] = ojson::object();
    for (const auto& [k, v] : r.failed_at) j["failed_at"][k] = v;
    j["per_set_success"] = r.per_set_success;
    return j;
}

ojson to_json(const ComplexityReport& r) {
    ojson j;
    j["method"] = r.method;
    j["per_option_steps"] = ojson::array();
    for (const auto& [name, steps] : r.per_option_steps) j["per_option_steps"].push_back({{"option", name}, {"steps", steps}});
    j["total_steps"] = r.total_steps;
    return j;
}

ojson to_json(const OverlapReport& r) {
    return ojson{{"containment_fraction", r.containment_fraction}, {"jaccard_distance", r.jaccard_distance},
                 {"epsilon", r.epsilon}, {"voxel_size", r.voxel_size},
                 {"containment_threshold", r.containment_threshold}, {"composable", r.verdict_composable}};
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

template <typename T>
T field(const ojson& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("report is missing '") + key + "'");
    return j.at(key).get<T>();
}

}  // namespace

std::string render_success(const std::vector<SuccessReport>& reports, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Json) {
        ojson arr = ojson::array();
        for (const auto& r : reports) arr.push_back(to_json(r));
        return dump(ojson{{"success_reports", arr}});
    }
    if (format == ReportFormat::Csv) {
        out << "chain,method,length,episodes,successes,mean,std,pooled,timeouts,init_rejects";
        for (auto v : kAllViolations) out << "," << to_string(v);
        out << ",per_set_success\n";
        for (const auto& r : reports) {
            out << r.label() << "," << r.method << "," << r.chain.size() << "," << r.episodes << "," << r.successes
                << "," << num(r.mean) << "," << num(r.std) << "," << num(r.pooled) << "," << r.timeout_count << ","
                << r.init_reject_count;
            for (auto v : kAllViolations) {
                auto it = r.violation_histogram.find(to_string(v));
                out << "," << (it == r.violation_histogram.end() ? 0 : it->second);
            }
            out << ",";
            for (std::size_t i = 0; i < r.per_set_success.size(); ++i) out << (i ? ";" : "") << num(r.per_set_success[i]);
            out << "\n";
        }
        return out.str();
    }
    out << "| chain | method | mean | std | pooled | episodes | violations | timeouts | init rejects |\n";
    out << "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : reports) {
        std::int64_t violations = 0;
        for (const auto& [k, v] : r.violation_histogram) violations += v;
        out << "| " << r.label() << " | " << r.method << " | " << fixed(r.mean) << " | " << fixed(r.std) << " | "
            << fixed(r.pooled) << " | " << r.episodes << " | " << violations << " | " << r.timeout_count << " | "
            << r.init_reject_count << " |\n";
    }
    return out.str();
}

std::string render_complexity(const std::vector<ComplexityReport>& reports, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Json) {
        ojson arr = ojson::array();
        for (const auto& r : reports) arr.push_back(to_json(r));
        return dump(ojson{{"complexity_reports", arr}});
    }
    if (format == ReportFormat::Csv) {
        out << "method,option,steps\n";
        for (const auto& r : reports) {
            for (const auto& [name, steps] : r.per_option_steps) out << r.method << "," << name << "," << steps << "\n";
            out << r.method << ",total," << r.total_steps << "\n";
        }
        return out.str();
    }
    out << "| method | option | steps |\n|---|---|---|\n";
    for (const auto& r : reports) {
        for (const auto& [name, steps] : r.per_option_steps)
            out << "| " << r.method << " | " << name << " | " << steps << " |\n";
        out << "| " << r.method << " | **total** | " << r.total_steps << " |\n";
    }
    return out.str();
}

std::string render_overlap(const std::vector<AdaptationOutcome>& outcomes, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Json) {
        ojson arr = ojson::array();
        for (const auto& o : outcomes) {
            ojson j{{"method", to_string(o.method)},   {"predecessor", o.predecessor},
                    {"successor", o.successor},        {"adapted", o.adapted.spec.name},
                    {"skipped", o.skipped},            {"converged", o.adapted.converged},
                    {"warm_started", o.warm_started},  {"steps_used", o.steps_used},
                    {"seeding_steps", o.seeding_steps}, {"discard_rate", o.discard_rate}};
            if (o.goal_pose) {
                const auto& p = *o.goal_pose;
                j["goal_pose"] = {p.position.x(),    p.position.y(),    p.position.z(),   p.orientation.w(),
                                  p.orientation.x(), p.orientation.y(), p.orientation.z()};
            } else {
                j["goal_pose"] = nullptr;
            }
            j["pre_overlap"] = to_json(o.pre_overlap);
            j["post_overlap"] = to_json(o.post_overlap);
            arr.push_back(j);
        }
        return dump(ojson{{"adaptation_outcomes", arr}});
    }
    if (format == ReportFormat::Csv) {
        out << "method,predecessor,successor,adapted,skipped,converged,warm_started,steps_used,seeding_steps,"
               "discard_rate,pre_containment,pre_jaccard,post_containment,post_jaccard,epsilon,voxel\n";
        for (const auto& o : outcomes)
            out << to_string(o.method) << "," << o.predecessor << "," << o.successor << "," << o.adapted.spec.name
                << "," << o.skipped << "," << o.adapted.converged << "," << o.warm_started << "," << o.steps_used
                << "," << o.seeding_steps << "," << num(o.discard_rate) << "," << num(o.pre_overlap.containment_fraction)
                << "," << num(o.pre_overlap.jaccard_distance) << "," << num(o.post_overlap.containment_fraction) << ","
                << num(o.post_overlap.jaccard_distance) << "," << num(o.pre_overlap.epsilon) << ","
                << num(o.pre_overlap.voxel_size) << "\n";
        return out.str();
    }
    out << "| method | pair | retrained | converged | steps | containment before | containment after |\n"
           "|---|---|---|---|---|---|---|\n";
    for (const auto& o : outcomes)
        out << "| " << to_string(o.method) << " | " << o.predecessor << ">" << o.successor << " | "
            << (o.skipped ? "-" : o.adapted.spec.name) << " | " << (o.adapted.converged ? "yes" : "no") << " | "
            << o.steps_used << " | " << fixed(o.pre_overlap.containment_fraction) << " | "
            << fixed(o.post_overlap.containment_fraction) << " |\n";
    return out.str();
}

std::string render_overlap(const OverlapReport& r, const std::string& result_option,
                           const std::string& origin_option, ReportFormat format) {
    if (format == ReportFormat::Json) {
        ojson j{{"result", result_option}, {"origin", origin_option}};
        j.update(to_json(r));
        return dump(ojson{{"overlap", j}});
    }
    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        out << "result,origin,containment_fraction,jaccard_distance,epsilon,voxel,containment_threshold,composable\n"
            << result_option << "," << origin_option << "," << num(r.containment_fraction) << ","
            << num(r.jaccard_distance) << "," << num(r.epsilon) << "," << num(r.voxel_size) << ","
            << num(r.containment_threshold) << "," << r.verdict_composable << "\n";
        return out.str();
    }
    out << "| result | origin | containment | jaccard | composable |\n|---|---|---|---|---|\n"
        << "| " << result_option << " | " << origin_option << " | " << fixed(r.containment_fraction) << " | "
        << fixed(r.jaccard_distance) << " | " << (r.verdict_composable ? "yes" : "no") << " |\n";
    return out.str();
}

std::vector<SuccessReport> parse_success_json(const std::string& text) {
    std::vector<SuccessReport> out;
    try {
        const ojson root = ojson::parse(text);
        for (const auto& j : root.at("success_reports")) {
            SuccessReport r;
            r.chain = field<std::vector<std::string>>(j, "chain");
            r.method = field<std::string>(j, "method");
            r.episodes = field<std::int64_t>(j, "episodes");
            r.successes = field<std::int64_t>(j, "successes");
            r.mean = field<double>(j, "mean");
            r.std = field<double>(j, "std");
            r.pooled = field<double>(j, "pooled");
            r.timeout_count = field<std::int64_t>(j, "timeout_count");
            r.init_reject_count = field<std::int64_t>(j, "init_reject_count");
            for (const auto& [k, v] : j.at("violation_histogram").items()) r.violation_histogram[k] = v.get<std::int64_t>();
            for (const auto& [k, v] : j.at("failed_at").items()) r.failed_at[k] = v.get<std::int64_t>();
            r.per_set_success = field<std::vector<double>>(j, "per_set_success");
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed success report: ") + e.what());
    }
    return out;
}

std::vector<ComplexityReport> parse_complexity_json(const std::string& text) {
    std::vector<ComplexityReport> out;
    try {
        const ojson root = ojson::parse(text);
        for (const auto& j : root.at("complexity_reports")) {
            ComplexityReport r;
            r.method = field<std::string>(j, "method");
            for (const auto& e : j.at("per_option_steps"))
                r.per_option_steps.emplace_back(field<std::string>(e, "option"), field<std::int64_t>(e, "steps"));
            r.total_steps = field<std::int64_t>(j, "total_steps");
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed complexity report: ") + e.what());
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw IoError("failed reading '" + path + "'");
    return ss.str();
}

}  // namespace optseq
