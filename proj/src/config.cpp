#include "vmhs/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>

#include "vmhs/errors.hpp"

namespace vmhs {

namespace {

struct RawValue {
    std::string text;
    int line = 0;
};

using SectionMap = std::map<std::string, std::map<std::string, RawValue>>;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

SectionMap read_sections(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    SectionMap sections;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(path + ":" + std::to_string(lineno) +
                                  ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(path + ":" + std::to_string(lineno) + ": empty section name");
            sections.try_emplace(section);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value, got '" +
                              line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed key = value");
        if (section.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": key '" + key +
                              "' outside any [section]");
        auto [it, fresh] = sections[section].try_emplace(key, RawValue{value, lineno});
        if (!fresh)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" + section +
                              "." + key + "'");
    }
    return sections;
}

// Typed access with consumed-key tracking so leftovers can be named.
class ConfigReader {
public:
    ConfigReader(SectionMap sections, std::string path)
        : sections_(std::move(sections)), path_(std::move(path)) {}

    bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

    bool has(const std::string& section, const std::string& key) const {
        auto it = sections_.find(section);
        return it != sections_.end() && it->second.count(key) > 0;
    }

    double number(const std::string& section, const std::string& key, double fallback) {
        const RawValue* raw = consume(section, key);
        if (!raw) return fallback;
        char* end = nullptr;
        const double v = std::strtod(raw->text.c_str(), &end);
        if (end == raw->text.c_str() || *end != '\0')
            throw ConfigError(where(section, key, raw) + ": expected a number, got '" + raw->text +
                              "'");
        return v;
    }

    long long integer(const std::string& section, const std::string& key, long long fallback) {
        const RawValue* raw = consume(section, key);
        if (!raw) return fallback;
        char* end = nullptr;
        const long long v = std::strtoll(raw->text.c_str(), &end, 10);
        if (end == raw->text.c_str() || *end != '\0')
            throw ConfigError(where(section, key, raw) + ": expected an integer, got '" +
                              raw->text + "'");
        return v;
    }

    std::uint64_t unsigned_integer(const std::string& section, const std::string& key,
                                   std::uint64_t fallback) {
        const RawValue* raw = consume(section, key);
        if (!raw) return fallback;
        char* end = nullptr;
        const unsigned long long v = std::strtoull(raw->text.c_str(), &end, 10);
        if (end == raw->text.c_str() || *end != '\0' || raw->text.front() == '-')
            throw ConfigError(where(section, key, raw) + ": expected an unsigned integer, got '" +
                              raw->text + "'");
        return v;
    }

    std::string string(const std::string& section, const std::string& key,
                       const std::string& fallback) {
        const RawValue* raw = consume(section, key);
        if (!raw) return fallback;
        std::string v = raw->text;
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
        return v;
    }

    // Everything must have been consumed; otherwise report the first stray key.
    void finish(const std::set<std::string>& known_sections) const {
        for (const auto& [section, keys] : sections_) {
            if (!known_sections.count(section))
                throw ConfigError(path_ + ": unknown section [" + section + "]");
            for (const auto& [key, raw] : keys)
                if (!consumed_.count(section + "." + key))
                    throw ConfigError(path_ + ":" + std::to_string(raw.line) + ": unknown key '" +
                                      section + "." + key + "'");
        }
    }

private:
    const RawValue* consume(const std::string& section, const std::string& key) {
        auto it = sections_.find(section);
        if (it == sections_.end()) return nullptr;
        auto kit = it->second.find(key);
        if (kit == it->second.end()) return nullptr;
        consumed_.insert(section + "." + key);
        return &kit->second;
    }

    std::string where(const std::string& section, const std::string& key,
                      const RawValue* raw) const {
        return path_ + ":" + std::to_string(raw->line) + ": " + section + "." + key;
    }

    SectionMap sections_;
    std::string path_;
    mutable std::set<std::string> consumed_;
};

growth::GrowthConfig parse_growth(ConfigReader& reader, const std::string& path) {
    growth::GrowthConfig cfg;
    const std::string model = reader.string("growth", "model", "reduced1d");
    if (model == "reduced1d")
        cfg.model = growth::GrowthConfig::Model::reduced1d;
    else if (model == "cellular2d")
        cfg.model = growth::GrowthConfig::Model::cellular2d;
    else
        throw ConfigError(path + ": growth.model must be reduced1d or cellular2d, got '" + model +
                          "'");
    cfg.n = static_cast<int>(reader.integer("growth", "n", cfg.n));
    cfg.t_max = reader.number("growth", "t_max", cfg.t_max);
    cfg.dt = reader.number("growth", "dt", cfg.dt);
    cfg.fit_lo = reader.number("growth", "fit_lo", cfg.fit_lo);
    cfg.fit_hi = reader.number("growth", "fit_hi", cfg.fit_hi);
    reader.finish({"growth"});
    cfg.validate();
    return cfg;
}

RelaxationConfig parse_relaxation(ConfigReader& reader, const std::string& path) {
    RelaxationConfig cfg;
    cfg.n = static_cast<int>(reader.integer("grid", "n", cfg.n));
    cfg.params.alpha = reader.number("physics", "alpha", cfg.params.alpha);
    cfg.params.nu = reader.number("physics", "nu", cfg.params.nu);
    cfg.params.cfl = reader.number("time", "cfl", cfg.params.cfl);
    cfg.params.dt_override = reader.number("time", "dt", cfg.params.dt_override);
    cfg.t_max = reader.number("time", "t_max", cfg.t_max);
    cfg.sample_interval = reader.number("time", "sample_interval", cfg.sample_interval);

    const std::string kind = reader.string("init", "kind", "abc");
    if (kind == "abc")
        cfg.init.kind = InitialCondition::Kind::abc;
    else if (kind == "random" || kind == "random_solenoidal")
        cfg.init.kind = InitialCondition::Kind::random_solenoidal;
    else
        throw ConfigError(path + ": init.kind must be abc or random_solenoidal, got '" + kind +
                          "'");
    cfg.init.seed = reader.unsigned_integer("init", "seed", cfg.init.seed);
    cfg.init.spectrum_peak = static_cast<int>(reader.integer("init", "k0", cfg.init.spectrum_peak));
    cfg.init.amplitude = reader.number("init", "amplitude", cfg.init.amplitude);
    cfg.init.abc_a = reader.number("init.abc", "a", cfg.init.abc_a);
    cfg.init.abc_b = reader.number("init.abc", "b", cfg.init.abc_b);
    cfg.init.abc_c = reader.number("init.abc", "c", cfg.init.abc_c);

    cfg.defect_tolerance = reader.number("relax", "defect_tolerance", cfg.defect_tolerance);
    cfg.convergence_factor = reader.number("relax", "convergence_factor", cfg.convergence_factor);

    cfg.output_dir = reader.string("output", "dir", cfg.output_dir);
    cfg.checkpoint_interval =
        reader.number("output", "checkpoint_interval", cfg.checkpoint_interval);

    reader.finish({"grid", "physics", "time", "init", "init.abc", "relax", "output"});
    cfg.validate();
    return cfg;
}

}  // namespace

std::variant<RelaxationConfig, growth::GrowthConfig> parse_config(const std::string& path) {
    ConfigReader reader(read_sections(path), path);
    if (reader.has_section("growth")) return parse_growth(reader, path);
    return parse_relaxation(reader, path);
}

}  // namespace vmhs
