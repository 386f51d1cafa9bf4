// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include "fasisac/config.hpp"

#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace fasisac {

std::string to_string(GainMode mode) { return mode == GainMode::fas ? "fas" : "los"; }

GainMode parse_gain_mode(const std::string& text) {
    if (text == "fas") return GainMode::fas;
    if (text == "los") return GainMode::los;
    throw std::invalid_argument("unknown gain mode '" + text + "' (expected fas or los)");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

// Shortest %.Ng form that reads back to the same double.
std::string format_real(double v) {
    char buf[64];
    for (int digits = 6; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

double to_real(const std::string& s) {
    const std::string t = trim(s);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || errno == ERANGE) throw std::invalid_argument("expected a real number, got '" + s + "'");
    return v;
}

long long to_integer(const std::string& s) {
    const std::string t = trim(s);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0' || errno == ERANGE) throw std::invalid_argument("expected an integer, got '" + s + "'");
    return v;
}

template <class T>
T to_integral(const std::string& s) {
    const long long v = to_integer(s);
    if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) {
        throw std::invalid_argument("integer out of range: '" + s + "'");
    }
    return static_cast<T>(v);
}

bool to_bool(const std::string& s) {
    const std::string t = trim(s);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw std::invalid_argument("expected true or false, got '" + s + "'");
}

template <class T, class Fmt>
std::string join(const std::vector<T>& v, Fmt fmt) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt(v[i]);
    }
    return out;
}

struct Field {
    std::string section;
    std::string key;
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
};

template <class T>
Field int_field(const char* section, const char* key, T& ref) {
    return {section, key, [&ref](const std::string& v) { ref = to_integral<T>(v); },
            [&ref] { return std::to_string(ref); }};
}

Field real_field(const char* section, const char* key, double& ref) {
    return {section, key, [&ref](const std::string& v) { ref = to_real(v); }, [&ref] { return format_real(ref); }};
}

Field bool_field(const char* section, const char* key, bool& ref) {
    return {section, key, [&ref](const std::string& v) { ref = to_bool(v); },
            [&ref] { return std::string(ref ? "true" : "false"); }};
}

// Single source of truth for parsing, dumping and hashing.
std::vector<Field> fields(ExperimentConfig& c) {
    auto& sy = c.system;
    auto& ch = c.channel;
    auto& se = c.sensing;
    auto& ta = c.targets;
    auto& sw = c.sweep;
    auto& mc = c.mc;
    auto& orc = c.oracle;
    const auto longs = [](std::vector<long>& ref) {
        return std::make_pair([&ref](const std::string& v) { ref = parse_integer_list(v); },
                              [&ref] { return join(ref, [](long x) { return std::to_string(x); }); });
    };
    const auto reals = [](std::vector<double>& ref) {
        return std::make_pair([&ref](const std::string& v) { ref = parse_real_list(v); },
                              [&ref] { return join(ref, format_real); });
    };
    const auto users_list = longs(sw.users);
    const auto antennas_list = longs(sw.antennas);
    const auto m_list = longs(sw.m);
    const auto snr_list = reals(sw.snr_db);
    const auto oracle_snr = reals(orc.snr_db);

    return {
        int_field("system", "bits_c", sy.bits_c),
        int_field("system", "bits_s", sy.bits_s),
        int_field("system", "users", sy.users),
        real_field("system", "cu_share", sy.cu_share),
        int_field("system", "blocklength", sy.blocklength),
        int_field("system", "antennas", sy.antennas),
        real_field("system", "noise_var", sy.noise_var),
        {"system", "gain_mode", [&sy](const std::string& v) { sy.gain_mode = parse_gain_mode(trim(v)); },
         [&sy] { return to_string(sy.gain_mode); }},
        {"system", "gain_scope", [&sy](const std::string& v) { sy.gain_scope = parse_gain_scope(trim(v)); },
         [&sy] { return to_string(sy.gain_scope); }},

        real_field("channel", "rice_factor", ch.rice_factor),
        int_field("channel", "scatterers", ch.scatterers),
        real_field("channel", "strength", ch.strength),
        int_field("channel", "gain_trials", ch.gain_trials),

        int_field("sensing", "samples", se.samples),
        int_field("sensing", "sparsity", se.sparsity),
        int_field("sensing", "iterations", se.iterations),
        {"sensing", "algorithms",
         [&se](const std::string& v) {
             std::vector<Algorithm> algs;
             for (const auto& name : split(v, ',')) algs.push_back(parse_algorithm(name));
             se.algorithms = algs;
         },
         [&se] { return join(se.algorithms, [](Algorithm a) { return to_string(a); }); }},
        {"sensing", "observation",
         [&se](const std::string& v) {
             const std::string t = trim(v);
             if (t == "expectation") se.observation = ObservationMode::expectation;
             else if (t == "sampled") se.observation = ObservationMode::sampled;
             else throw std::invalid_argument("expected expectation or sampled, got '" + t + "'");
         },
         [&se] { return std::string(se.observation == ObservationMode::expectation ? "expectation" : "sampled"); }},
        bool_field("sensing", "ula", se.ula),
        int_field("sensing", "mra_cap", se.mra_cap),
        bool_field("sensing", "full_search", se.full_search),

        real_field("targets", "pupe", ta.pupe),
        real_field("targets", "mseaoa", ta.mseaoa),
        real_field("targets", "cons_share", ta.cons_share),

        {"sweep", "users", users_list.first, users_list.second},
        {"sweep", "antennas", antennas_list.first, antennas_list.second},
        {"sweep", "m", m_list.first, m_list.second},
        {"sweep", "snr_db", snr_list.first, snr_list.second},

        {"mc", "seed",
         [&mc](const std::string& v) {
             const std::string t = trim(v);
             char* end = nullptr;
             errno = 0;
             const unsigned long long s = std::strtoull(t.c_str(), &end, 10);
             if (t.empty() || t[0] == '-' || *end != '\0' || errno == ERANGE) {
                 throw std::invalid_argument("expected an unsigned integer, got '" + v + "'");
             }
             mc.seed = s;
         },
         [&mc] { return std::to_string(mc.seed); }},
        int_field("mc", "trials", mc.trials),
        int_field("mc", "capacity_trials", mc.capacity_trials),
        int_field("mc", "threads", mc.threads),

        int_field("oracle", "bits_c", orc.bits_c),
        int_field("oracle", "bits_s", orc.bits_s),
        int_field("oracle", "users_c", orc.users_c),
        int_field("oracle", "users_s", orc.users_s),
        int_field("oracle", "blocklength", orc.blocklength),
        int_field("oracle", "antennas", orc.antennas),
        {"oracle", "snr_db", oracle_snr.first, oracle_snr.second},
        int_field("oracle", "trials", orc.trials),
    };
}

Field* find_field(std::vector<Field>& table, const std::string& section, const std::string& key) {
    for (auto& f : table) {
        if (f.section == section && f.key == key) return &f;
    }
    return nullptr;
}

bool known_section(const std::vector<Field>& table, const std::string& section) {
    for (const auto& f : table) {
        if (f.section == section) return true;
    }
    return false;
}

} // namespace

std::vector<double> parse_real_list(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty list");
    if (t.find(':') != std::string::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3) throw std::invalid_argument("range must be lo:hi:step, got '" + t + "'");
        const double lo = to_real(parts[0]);
        const double hi = to_real(parts[1]);
        const double step = to_real(parts[2]);
        if (!(step > 0.0) || hi < lo) throw std::invalid_argument("range needs lo <= hi and step > 0: '" + t + "'");
        std::vector<double> out;
        const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
        return out;
    }
    std::vector<double> out;
    for (const auto& item : split(t, ',')) out.push_back(to_real(item));
    return out;
}

std::vector<long> parse_integer_list(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty list");
    if (t.find(':') != std::string::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3) throw std::invalid_argument("range must be lo:hi:step, got '" + t + "'");
        const long long lo = to_integer(parts[0]);
        const long long hi = to_integer(parts[1]);
        const long long step = to_integer(parts[2]);
        if (step <= 0 || hi < lo) throw std::invalid_argument("range needs lo <= hi and step > 0: '" + t + "'");
        std::vector<long> out;
        for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<long>(v));
        return out;
    }
    std::vector<long> out;
    for (const auto& item : split(t, ',')) out.push_back(static_cast<long>(to_integer(item)));
    return out;
}

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig c;
    if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
        try {
            set_config_value(c, "mc.seed", env);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(kSeedEnvVar) + ": " + e.what());
        }
    }
    return c;
}

long ExperimentConfig::cu_users(long total) const { return std::lround(static_cast<double>(total) * system.cu_share); }

void ExperimentConfig::validate() const {
    const auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("invalid configuration: " + what);
    };
    require(system.bits_c >= 1 && system.bits_s >= 1, "system.bits_c and system.bits_s must be >= 1");
    require(system.users >= 1, "system.users must be >= 1");
    require(system.cu_share >= 0.0 && system.cu_share <= 1.0, "system.cu_share must be in [0, 1]");
    require(system.blocklength >= 1, "system.blocklength must be >= 1");
    require(system.antennas >= 2 && system.antennas <= 11, "system.antennas must be in [2, 11]");
    require(system.noise_var > 0.0, "system.noise_var must be > 0");
    require(channel.rice_factor >= 0.0, "channel.rice_factor must be >= 0");
    require(channel.scatterers >= 1, "channel.scatterers must be >= 1");
    require(channel.strength > 0.0, "channel.strength must be > 0");
    require(channel.gain_trials >= 1, "channel.gain_trials must be >= 1");
    require(sensing.samples >= 1, "sensing.samples must be >= 1");
    require(sensing.sparsity >= 1, "sensing.sparsity must be >= 1");
    require(sensing.iterations >= 1, "sensing.iterations must be >= 1");
    require(!sensing.algorithms.empty(), "sensing.algorithms must not be empty");
    require(sensing.mra_cap >= 0, "sensing.mra_cap must be >= 0");
    require(targets.pupe > 0.0 && targets.pupe < 1.0, "targets.pupe must be in (0, 1)");
    require(targets.mseaoa > 0.0, "targets.mseaoa must be > 0");
    require(targets.cons_share > 0.0 && targets.cons_share < 1.0, "targets.cons_share must be in (0, 1)");
    for (long u : sweep.users) require(u >= 1, "sweep.users entries must be >= 1");
    for (long m : sweep.antennas) require(m >= 2 && m <= 11, "sweep.antennas entries must be in [2, 11]");
    for (long m : sweep.m) require(m >= 1 && m <= 11, "sweep.m entries must be in [1, 11]");
    require(mc.trials >= 1 && mc.capacity_trials >= 1, "mc trial counts must be >= 1");
    require(mc.threads >= 0, "mc.threads must be >= 0");
    require(oracle.trials >= 1, "oracle.trials must be >= 1");
    require(oracle.antennas >= 1 && oracle.antennas <= 11, "oracle.antennas must be in [1, 11]");
}

void set_config_value(ExperimentConfig& cfg, const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos) throw ConfigError("expected section.key, got '" + dotted_key + "'");
    auto table = fields(cfg);
    Field* f = find_field(table, dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
    if (f == nullptr) throw ConfigError("unknown key '" + dotted_key + "'");
    try {
        f->set(value);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("key '" + dotted_key + "': " + e.what());
    }
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
    auto table = fields(base);
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_section(table, section)) throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (section.empty()) throw ConfigError(where + "key '" + key + "' appears before any section");
        Field* f = find_field(table, section, key);
        if (f == nullptr) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
        try {
            f->set(trim(line.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + "key '" + section + "." + key + "': " + e.what());
        }
    }
    return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

std::string dump_config(const ExperimentConfig& cfg) {
    ExperimentConfig copy = cfg;
    std::string out;
    std::string section;
    for (const auto& f : fields(copy)) {
        if (f.section != section) {
            if (!section.empty()) out += "\n";
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += f.key + " = " + f.get() + "\n";
    }
    return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
    ExperimentConfig copy = cfg;
    std::uint64_t h = 14695981039346656037ULL;
    const auto feed = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& f : fields(copy)) {
        if (f.section == "mc" && f.key == "threads") continue;
        feed(f.section + "." + f.key + "=" + f.get() + "\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

} // namespace fasisac
