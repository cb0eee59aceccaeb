#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optseq/adaptation.hpp"
#include "optseq/config.hpp"
#include "optseq/errors.hpp"
#include "optseq/harness.hpp"
#include "optseq/io.hpp"
#include "optseq/rng.hpp"
#include "optseq/sampling.hpp"

namespace fs = std::filesystem;
using namespace optseq;

namespace {

struct Common {
    std::string config;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "scenario JSON (default: built-in offset scenario)");
    cmd->add_option("--set", c.overrides, "override one key, e.g. train.population=32");
}

Scenario load(const Common& c) {
    Scenario s = c.config.empty() ? Scenario::offset_default() : load_scenario(c.config);
    for (const auto& kv : c.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("override '" + kv + "' is not key=value");
        apply_override(s, kv.substr(0, eq), kv.substr(eq + 1));
    }
    s.validate();
    return s;
}

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string name;
    while (std::getline(ss, name, ','))
        if (!name.empty()) out.push_back(name);
    return out;
}

// Output format from the file extension; JSON unless .csv or .md.
ReportFormat format_for(const std::string& path) {
    const auto ext = fs::path(path).extension().string();
    if (ext == ".csv") return ReportFormat::Csv;
    if (ext == ".md") return ReportFormat::Markdown;
    return ReportFormat::Json;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

// Output files may name a directory that does not exist yet.
const std::string& out_file(const std::string& path) {
    const auto parent = fs::path(path).parent_path();
    if (!parent.empty()) ensure_dir(parent.string());
    return path;
}

std::vector<TrainedOption> load_chain(const std::string& dir, const std::vector<OptionSpec>& seq,
                                      const std::vector<std::string>& names) {
    std::vector<TrainedOption> chain;
    for (const auto& n : names) chain.push_back(load_trained_option(dir, find_option(seq, n)));
    return chain;
}

std::vector<std::string> all_names(const std::vector<OptionSpec>& seq) {
    std::vector<std::string> out;
    for (const auto& o : seq) out.push_back(o.name);
    return out;
}

int run_train(const Common& c, const std::string& option, std::uint64_t seed, const std::string& out) {
    const Scenario s = load(c);
    const Environment env(s.env);
    const auto seq = canonical_sequence(env, s.tolerances);
    const auto& spec = find_option(seq, option);
    const auto trained = train_option(env, spec, region_source(env, s.region(option)), s.train, seed);
    save_trained_option(out, trained);
    std::printf("%s: converged=%s steps=%lld iterations=%zu\n", option.c_str(), trained.converged ? "yes" : "no",
                static_cast<long long>(trained.steps_used), trained.history.size());
    if (!trained.converged)
        std::fprintf(stderr, "warning: '%s' did not reach the success threshold within the step budget\n",
                     option.c_str());
    return 0;
}

int run_sample(const Common& c, const std::string& policy_path, const std::string& kind, std::size_t n,
               std::uint64_t seed, const std::string& out) {
    const Scenario s = load(c);
    const Environment env(s.env);
    const auto seq = canonical_sequence(env, s.tolerances);
    const PolicyFile f = parse_policy_file(read_text(policy_path));
    const auto dir = fs::path(policy_path).parent_path().string();
    const auto trained = load_trained_option(dir.empty() ? "." : dir, find_option(seq, f.option));
    SampleSet set;
    if (set_kind_from_string(kind) == SetKind::Origin) {
        set = sample_origin_set(trained, n, seed);
    } else {
        auto r = sample_result_set(env, trained, n, seed);
        std::printf("%s: %zu of %zu rollouts terminated\n", f.option.c_str(), r.successes, r.attempts);
        set = std::move(r.set);
    }
    write_sample_set(out_file(out), set);
    std::printf("wrote %zu %s samples to %s\n", set.size(), kind.c_str(), out.c_str());
    return 0;
}

int run_analyze(const std::string& result, const std::string& origin, OverlapParams params, const std::string& out) {
    const SampleSet r = read_sample_set(result);
    const SampleSet o = read_sample_set(origin);
    if (r.kind != SetKind::Result) throw ProvenanceError("'" + result + "' is not a result set");
    if (o.kind != SetKind::Origin) throw ProvenanceError("'" + origin + "' is not an origin set");
    const OverlapReport rep = overlap(r, o, params);
    write_text(out_file(out), render_overlap(rep, r.option_name, o.option_name, format_for(out)));
    std::printf("containment=%.4f jaccard=%.4f composable=%s\n", rep.containment_fraction, rep.jaccard_distance,
                rep.verdict_composable ? "yes" : "no");
    return 0;
}

int run_adapt(const Common& c, const std::string& method_name, const std::string& chain_dir, const std::string& names,
              std::uint64_t seed, const std::string& out) {
    const Scenario s = load(c);
    const Environment env(s.env);
    const auto seq = canonical_sequence(env, s.tolerances);
    const auto method = adaptation_method_from_string(method_name);
    const auto chain = load_chain(chain_dir, seq, names.empty() ? all_names(seq) : split_names(names));
    const auto result = adapt_sequence(env, chain, method, AdaptationSettings::from(s), seed);
    ensure_dir(out);
    for (const auto& o : result.chain) save_trained_option(out, o);
    write_text(out + "/adaptation.json", render_overlap(result.outcomes, ReportFormat::Json));
    write_text(out + "/adaptation.csv", render_overlap(result.outcomes, ReportFormat::Csv));
    write_text(out + "/complexity.json",
               render_complexity({complexity_report(result.outcomes, to_string(method))}, ReportFormat::Json));
    std::cout << render_overlap(result.outcomes, ReportFormat::Markdown);
    return 0;
}

int run_evaluate(const Common& c, const std::string& names, const std::string& policies, std::optional<int> sets,
                 std::optional<int> episodes, std::optional<std::uint64_t> master_seed, bool subchains,
                 const std::string& method, const std::string& out) {
    Scenario s = load(c);
    if (sets) s.protocol.sets = *sets;
    if (episodes) s.protocol.episodes_per_set = *episodes;
    if (master_seed) s.protocol.master_seed = *master_seed;
    s.protocol.validate();
    const Environment env(s.env);
    const auto seq = canonical_sequence(env, s.tolerances);
    const auto chain = load_chain(policies, seq, split_names(names));
    if (chain.empty()) throw ConfigError("--chain names no options");
    const auto reports = subchains ? evaluate_all_subchains(env, chain, s.protocol, method)
                                   : std::vector<SuccessReport>{measure_success(env, chain, s.protocol, method)};
    write_text(out_file(out), render_success(reports, format_for(out)));
    std::cout << render_success(reports, ReportFormat::Markdown);
    return 0;
}

// Collects every report in a directory: success and complexity JSON files,
// plus a complexity table built from any stored policies.
int run_report(const std::string& in, const std::string& format_name, const std::string& out) {
    const auto format = report_format_from_string(format_name);
    if (!fs::is_directory(in)) throw IoError("'" + in + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(in))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());

    std::vector<SuccessReport> success;
    std::vector<ComplexityReport> complexity;
    ComplexityReport trained{"trained", {}, 0};
    for (const auto& p : files) {
        if (p.extension() == ".policy") {
            const PolicyFile f = parse_policy_file(read_text(p.string()));
            trained.per_option_steps.emplace_back(f.option, f.steps_used);
            trained.total_steps += f.steps_used;
            continue;
        }
        if (p.extension() != ".json") continue;
        const std::string text = read_text(p.string());
        if (text.find("\"success_reports\"") != std::string::npos) {
            auto r = parse_success_json(text);
            success.insert(success.end(), r.begin(), r.end());
        } else if (text.find("\"complexity_reports\"") != std::string::npos) {
            auto r = parse_complexity_json(text);
            complexity.insert(complexity.end(), r.begin(), r.end());
        }
    }
    if (complexity.empty() && !trained.per_option_steps.empty()) complexity.push_back(trained);
    if (success.empty() && complexity.empty()) throw PreconditionError("no reports found in '" + in + "'");

    std::string text;
    if (format == ReportFormat::Json) {
        // Two JSON documents would not parse as one; keep them as separate files.
        if (out.empty()) throw ConfigError("--format json needs --out <dir>");
        ensure_dir(out);
        if (!success.empty()) write_text(out + "/success.json", render_success(success, format));
        if (!complexity.empty()) write_text(out + "/complexity.json", render_complexity(complexity, format));
        return 0;
    }
    if (!success.empty()) text += render_success(success, format);
    if (!success.empty() && !complexity.empty()) text += "\n";
    if (!complexity.empty()) text += render_complexity(complexity, format);
    if (out.empty())
        std::cout << text;
    else
        write_text(out_file(out), text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optseq: train, analyze and adapt option sequences in the tabletop surrogate"};
    app.require_subcommand(1);
    int code = 0;

    Common train_c, sample_c, adapt_c, eval_c;

    auto* train = app.add_subcommand("train", "train one option from its configured start region");
    add_common(train, train_c);
    std::string option, train_out;
    std::uint64_t train_seed = 0;
    train->add_option("--option", option, "option name")->required();
    train->add_option("--seed", train_seed, "training seed");
    train->add_option("--out", train_out, "output directory")->required();
    train->callback([&] { code = run_train(train_c, option, train_seed, train_out); });

    auto* sample = app.add_subcommand("sample", "draw an origin or result set from a trained option");
    add_common(sample, sample_c);
    std::string policy, kind, sample_out;
    std::size_t n = 1000;
    std::uint64_t sample_seed = 0;
    sample->add_option("--policy", policy, "<dir>/<option>.policy")->required();
    sample->add_option("--kind", kind, "origin or result")->required()->check(CLI::IsMember({"origin", "result"}));
    sample->add_option("--n", n, "number of samples or rollouts");
    sample->add_option("--seed", sample_seed, "sampling seed");
    sample->add_option("--out", sample_out, "output CSV")->required();
    sample->callback([&] { code = run_sample(sample_c, policy, kind, n, sample_seed, sample_out); });

    auto* analyze = app.add_subcommand("analyze", "overlap between a result set and an origin set");
    std::string result, origin, analyze_out;
    OverlapParams params;
    analyze->add_option("--result", result, "result set CSV")->required();
    analyze->add_option("--origin", origin, "origin set CSV")->required();
    analyze->add_option("--eps", params.epsilon, "containment radius");
    analyze->add_option("--voxel", params.voxel, "voxel edge for the Jaccard distance");
    analyze->add_option("--omega-r", params.omega_r, "rotation weight in the pose distance");
    analyze->add_option("--threshold", params.containment_threshold, "containment needed to call a pair composable");
    analyze->add_option("--out", analyze_out, "report (.json, .csv or .md)")->required();
    analyze->callback([&] {
        if (!(params.epsilon >= 0.0) || !(params.voxel > 0.0)) throw ConfigError("--eps must be >= 0 and --voxel > 0");
        code = run_analyze(result, origin, params, analyze_out);
    });

    auto* adapt = app.add_subcommand("adapt", "adapt a trained chain with one method");
    add_common(adapt, adapt_c);
    std::string method, chain_dir, adapt_names, adapt_out;
    std::uint64_t adapt_seed = 0;
    adapt->add_option("--method", method, "origin, rm-centroid or rm-density")
        ->required()
        ->check(CLI::IsMember({"origin", "rm-centroid", "rm-density"}));
    adapt->add_option("--chain", chain_dir, "directory holding the trained options")->required();
    adapt->add_option("--options", adapt_names, "comma-separated chain (default: the full sequence)");
    adapt->add_option("--seed", adapt_seed, "adaptation seed");
    adapt->add_option("--out", adapt_out, "output directory")->required();
    adapt->callback([&] { code = run_adapt(adapt_c, method, chain_dir, adapt_names, adapt_seed, adapt_out); });

    auto* evaluate = app.add_subcommand("evaluate", "measure chained success rates");
    add_common(evaluate, eval_c);
    std::string names, policies, eval_out, label = "independent";
    std::optional<int> sets, episodes;
    std::optional<std::uint64_t> master_seed;
    bool subchains = false;
    evaluate->add_option("--chain", names, "comma-separated option names")->required();
    evaluate->add_option("--policies", policies, "directory holding the trained options")->required();
    evaluate->add_option("--sets", sets, "number of sets (default from config)");
    evaluate->add_option("--episodes", episodes, "episodes per set (default from config)");
    evaluate->add_option("--seed", master_seed, "master seed (default from config)");
    evaluate->add_option("--method", label, "label recorded in the report");
    evaluate->add_flag("--subchains", subchains, "evaluate every contiguous subchain of length >= 2");
    evaluate->add_option("--out", eval_out, "report (.json, .csv or .md)")->required();
    evaluate->callback(
        [&] { code = run_evaluate(eval_c, names, policies, sets, episodes, master_seed, subchains, label, eval_out); });

    auto* report = app.add_subcommand("report", "tabulate the reports in a directory");
    std::string in, format = "md", report_out;
    report->add_option("--in", in, "directory of reports")->required();
    report->add_option("--format", format, "csv, md or json")->check(CLI::IsMember({"csv", "md", "json"}));
    report->add_option("--out", report_out, "output file (stdout when omitted; a directory for json)");
    report->callback([&] { code = run_report(in, format, report_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::Config);
    } catch (const Error& e) {
        std::fprintf(stderr, "optseq: %s\n", e.what());
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "optseq: %s\n", e.what());
        return 1;
    }
    return code;
}
