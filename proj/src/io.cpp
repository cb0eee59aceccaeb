#include "optseq/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "optseq/errors.hpp"
#include "optseq/harness.hpp"

namespace optseq {

namespace {

constexpr const char* kSampleHeader = "px,py,pz,qw,qx,qy,qz,gripper,attached,episode";
constexpr const char* kStateHeader =
    "ee_px,ee_py,ee_pz,ee_qw,ee_qx,ee_qy,ee_qz,gripper,attached,cup_px,cup_py,cup_pz,cup_qw,cup_qx,cup_qy,cup_qz,"
    "target_x,target_y,target_z,table_z,context";

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double to_double(const std::string& s, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw ConfigError(where + ": '" + s + "' is not a number");
    return v;
}

std::int64_t to_int(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": '" + s + "' is not an integer");
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

// Quaternions are stored as read; Pose's constructor would renormalize them.
Pose raw_pose(double px, double py, double pz, double qw, double qx, double qy, double qz) {
    Pose p;
    p.position = Vec3(px, py, pz);
    p.orientation = Quat(qw, qx, qy, qz);
    return p;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path, const char* header, std::size_t columns) {
    const auto lines = lines_of(read_text(path));
    if (lines.empty() || lines.front() != header) throw ConfigError(path + ": unexpected CSV header");
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto cells = split(lines[i], ',');
        if (cells.size() != columns)
            throw ConfigError(path + ":" + std::to_string(i + 1) + ": expected " + std::to_string(columns) + " fields");
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

void write_sample_set(const std::string& path, const SampleSet& set) {
    std::ostringstream out;
    out << kSampleHeader << "\n";
    for (const auto& s : set.samples) {
        const auto& p = s.pose.position;
        const auto& q = s.pose.orientation;
        out << g17(p.x()) << "," << g17(p.y()) << "," << g17(p.z()) << "," << g17(q.w()) << "," << g17(q.x()) << ","
            << g17(q.y()) << "," << g17(q.z()) << "," << g17(s.gripper_aperture) << "," << (s.attached ? 1 : 0) << ","
            << s.source_episode << "\n";
    }
    write_text(path, out.str());
    const nlohmann::ordered_json meta{
        {"kind", to_string(set.kind)}, {"option", set.option_name}, {"count", set.samples.size()}};
    write_text(path + ".json", meta.dump(2) + "\n");
}

SampleSet read_sample_set(const std::string& path) {
    SampleSet set;
    try {
        const auto meta = nlohmann::json::parse(read_text(path + ".json"));
        set.kind = set_kind_from_string(meta.at("kind").get<std::string>());
        set.option_name = meta.at("option").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ".json: " + e.what());
    }
    for (const auto& c : read_csv(path, kSampleHeader, 10)) {
        PoseSample s;
        std::vector<double> v;
        for (int i = 0; i < 8; ++i) v.push_back(to_double(c[static_cast<std::size_t>(i)], path));
        s.pose = raw_pose(v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
        if (!s.pose.is_valid()) throw ConfigError(path + ": invalid pose in sample set");
        s.gripper_aperture = v[7];
        s.attached = to_int(c[8], path) != 0;
        s.source_episode = to_int(c[9], path);
        set.samples.push_back(s);
    }
    return set;
}

void write_states(const std::string& path, const std::vector<WorldState>& states) {
    std::ostringstream out;
    out << kStateHeader << "\n";
    auto pose = [&](const Pose& p) {
        out << g17(p.position.x()) << "," << g17(p.position.y()) << "," << g17(p.position.z()) << ","
            << g17(p.orientation.w()) << "," << g17(p.orientation.x()) << "," << g17(p.orientation.y()) << ","
            << g17(p.orientation.z());
    };
    for (const auto& s : states) {
        pose(s.ee);
        out << "," << g17(s.gripper_aperture) << "," << (s.attached ? 1 : 0) << ",";
        pose(s.cup);
        out << "," << g17(s.target_position.x()) << "," << g17(s.target_position.y()) << ","
            << g17(s.target_position.z()) << "," << g17(s.table_z) << "," << s.context << "\n";
    }
    write_text(path, out.str());
}

std::vector<WorldState> read_states(const std::string& path) {
    std::vector<WorldState> out;
    for (const auto& c : read_csv(path, kStateHeader, 21)) {
        std::vector<double> v;
        for (const auto& cell : c) v.push_back(to_double(cell, path));
        WorldState s;
        s.ee = raw_pose(v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
        s.gripper_aperture = v[7];
        s.attached = to_int(c[8], path) != 0;
        s.cup = raw_pose(v[9], v[10], v[11], v[12], v[13], v[14], v[15]);
        s.target_position = Vec3(v[16], v[17], v[18]);
        s.table_z = v[19];
        s.context = static_cast<int>(to_int(c[20], path));
        out.push_back(s);
    }
    return out;
}

bool PolicyFile::operator==(const PolicyFile& o) const {
    return option == o.option && policy == o.policy && steps_used == o.steps_used &&
           seeding_steps == o.seeding_steps && seed == o.seed && converged == o.converged && goal == o.goal;
}

std::string format_policy_file(const PolicyFile& f) {
    std::ostringstream out;
    out << "optseq-policy 1\n";
    out << "option " << f.option << "\n";
    out << "feature_spec " << f.policy.feature_spec << "\n";
    out << "steps_used " << f.steps_used << "\n";
    out << "seeding_steps " << f.seeding_steps << "\n";
    out << "seed " << f.seed << "\n";
    out << "converged " << (f.converged ? 1 : 0) << "\n";
    if (f.goal) {
        const auto& p = f.goal->pose;
        out << "goal " << hex(p.position.x()) << " " << hex(p.position.y()) << " " << hex(p.position.z()) << " "
            << hex(p.orientation.w()) << " " << hex(p.orientation.x()) << " " << hex(p.orientation.y()) << " "
            << hex(p.orientation.z()) << " " << hex(f.goal->tolerance) << " " << hex(f.goal->omega_r) << "\n";
    } else {
        out << "goal none\n";
    }
    out << "weights " << kActionSize << " " << kFeatureSize << "\n";
    for (int r = 0; r < kActionSize; ++r) {
        for (int c = 0; c < kFeatureSize; ++c) out << (c ? " " : "") << hex(f.policy.weights(r, c));
        out << "\n";
    }
    out << "bias " << kActionSize << "\n";
    for (int r = 0; r < kActionSize; ++r) out << (r ? " " : "") << hex(f.policy.bias[r]);
    out << "\n";
    return out.str();
}

PolicyFile parse_policy_file(const std::string& text) {
    const auto lines = lines_of(text);
    std::size_t i = 0;
    auto next = [&](const std::string& key) {
        if (i >= lines.size()) throw ConfigError("policy file ends before '" + key + "'");
        auto words = split(lines[i++], ' ');
        if (words.empty() || words[0] != key) throw ConfigError("policy file: expected '" + key + "'");
        words.erase(words.begin());
        return words;
    };
    auto one = [&](const std::string& key) {
        auto w = next(key);
        if (w.size() != 1) throw ConfigError("policy file: '" + key + "' takes one value");
        return w[0];
    };

    if (one("optseq-policy") != "1") throw ConfigError("unsupported policy file version");
    PolicyFile f;
    f.option = one("option");
    f.policy.feature_spec = one("feature_spec");
    f.steps_used = to_int(one("steps_used"), "steps_used");
    f.seeding_steps = to_int(one("seeding_steps"), "seeding_steps");
    try {
        f.seed = std::stoull(one("seed"));
    } catch (const std::logic_error&) {
        throw ConfigError("policy file: bad seed");
    }
    f.converged = to_int(one("converged"), "converged") != 0;
    auto goal = next("goal");
    if (!(goal.size() == 1 && goal[0] == "none")) {
        if (goal.size() != 9) throw ConfigError("policy file: goal takes 9 values");
        std::vector<double> v;
        for (const auto& w : goal) v.push_back(to_double(w, "goal"));
        f.goal = GoalCondition{raw_pose(v[0], v[1], v[2], v[3], v[4], v[5], v[6]), v[7], v[8]};
    }
    auto dims = next("weights");
    if (dims.size() != 2 || to_int(dims[0], "weights") != kActionSize || to_int(dims[1], "weights") != kFeatureSize)
        throw ConfigError("policy file: weight matrix must be " + std::to_string(kActionSize) + "x" +
                          std::to_string(kFeatureSize));
    for (int r = 0; r < kActionSize; ++r) {
        if (i >= lines.size()) throw ConfigError("policy file: missing weight rows");
        const auto row = split(lines[i++], ' ');
        if (row.size() != static_cast<std::size_t>(kFeatureSize)) throw ConfigError("policy file: short weight row");
        for (int c = 0; c < kFeatureSize; ++c) f.policy.weights(r, c) = to_double(row[static_cast<std::size_t>(c)], "weights");
    }
    if (one("bias") != std::to_string(kActionSize)) throw ConfigError("policy file: bad bias size");
    if (i >= lines.size()) throw ConfigError("policy file: missing bias row");
    const auto bias = split(lines[i++], ' ');
    if (bias.size() != static_cast<std::size_t>(kActionSize)) throw ConfigError("policy file: short bias row");
    for (int r = 0; r < kActionSize; ++r) f.policy.bias[r] = to_double(bias[static_cast<std::size_t>(r)], "bias");
    return f;
}

void save_trained_option(const std::string& dir, const TrainedOption& option) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
    const PolicyFile f{option.spec.name, option.policy,      option.steps_used, option.seeding_steps,
                       option.seed,      option.converged,   option.goal};
    write_text(dir + "/" + option.spec.name + ".policy", format_policy_file(f));
    write_states(dir + "/" + option.spec.name + ".starts.csv", option.origin_log);
}

TrainedOption load_trained_option(const std::string& dir, const OptionSpec& spec) {
    const PolicyFile f = parse_policy_file(read_text(dir + "/" + spec.name + ".policy"));
    if (f.option != spec.name)
        throw ProvenanceError("policy file in '" + dir + "' belongs to '" + f.option + "', not '" + spec.name + "'");
    TrainedOption t;
    t.spec = spec;
    t.policy = f.policy;
    t.steps_used = f.steps_used;
    t.seeding_steps = f.seeding_steps;
    t.seed = f.seed;
    t.converged = f.converged;
    t.goal = f.goal;
    t.origin_log = read_states(dir + "/" + spec.name + ".starts.csv");
    return t;
}

}  // namespace optseq
