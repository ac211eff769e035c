#include "susyeta/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <set>
#include <sstream>

#include "susyeta/errors.hpp"

namespace susyeta {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> k = {
        {"experiment", {"entry", "seed", "tests"}},
        {"params", {"d", "b", "a", "c"}},
        {"grid", {"n", "x_max"}},
        {"k_grid", {"k_min", "k_max", "n_k"}},
        {"probe", {"b", "d_sequence"}},
        {"output", {"dir", "format"}},
        {"tolerances", {}},
    };
    return k;
}

// property_tree keeps no positions, so keys are located in the raw text for
// diagnostics
class Locator {
public:
    explicit Locator(const std::string& text) {
        std::istringstream in(text);
        std::string line, section;
        int no = 0;
        while (std::getline(in, line)) {
            ++no;
            std::string t = boost::trim_copy(line);
            if (t.empty() || t[0] == ';' || t[0] == '#') continue;
            if (t.front() == '[' && t.back() == ']') {
                section = boost::trim_copy(t.substr(1, t.size() - 2));
                lines_.emplace(section, no);
                continue;
            }
            const auto eq = t.find('=');
            if (eq != std::string::npos) lines_.emplace(section + "." + boost::trim_copy(t.substr(0, eq)), no);
        }
    }
    int line(const std::string& key) const {
        const auto it = lines_.find(key);
        return it == lines_.end() ? 0 : it->second;
    }

private:
    std::map<std::string, int> lines_;
};

struct Reader {
    const pt::ptree& tree;
    const Locator& loc;
    const std::string& origin;

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        std::ostringstream os;
        os << origin;
        if (const int l = loc.line(key); l > 0) os << ":" << l;
        os << ": " << key << ": " << msg;
        throw ConfigError(os.str());
    }

    template <class T>
    void get(const std::string& key, T& out) const {
        const auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'));
        if (!v) return;
        try {
            out = boost::lexical_cast<T>(boost::trim_copy(*v));
        } catch (const boost::bad_lexical_cast&) {
            fail(key, "cannot read '" + *v + "'");
        }
    }
};

std::vector<double> parse_list(const Reader& r, const std::string& key, const std::string& raw) {
    std::vector<std::string> parts;
    boost::split(parts, raw, boost::is_any_of(","));
    std::vector<double> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (p.empty()) continue;
        try {
            out.push_back(boost::lexical_cast<double>(p));
        } catch (const boost::bad_lexical_cast&) {
            r.fail(key, "cannot read list element '" + p + "'");
        }
    }
    return out;
}

}  // namespace

ConfigRequirements verify_requirements() {
    return {{"experiment.entry", "params.d", "params.b", "grid.n", "grid.x_max"}};
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin, const ConfigRequirements& req) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        std::ostringstream os;
        os << origin << ":" << e.line() << ": " << e.message();
        throw ConfigError(os.str());
    }
    const Locator loc(text);
    const Reader r{tree, loc, origin};

    for (const auto& [section, body] : tree) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) {
            if (body.empty()) r.fail(section, "key outside of any section");
            r.fail(section, "unknown section");
        }
        for (const auto& kv : body) {
            const std::string key = section + "." + kv.first;
            if (section == "tolerances") {
                if (!default_tolerances().count(kv.first)) r.fail(key, "no check with this name");
            } else if (!it->second.count(kv.first)) {
                r.fail(key, "unknown key");
            }
        }
    }
    for (const auto& key : req.keys)
        if (!tree.get_optional<std::string>(pt::ptree::path_type(key, '.')))
            throw ConfigError(origin + ": missing required field '" + key + "'");

    ExperimentConfig c;
    r.get("experiment.entry", c.entry);
    r.get("experiment.seed", c.seed);
    r.get("experiment.tests", c.n_tests);
    r.get("params.d", c.params.d);
    r.get("params.b", c.params.b);
    r.get("params.a", c.params.a);
    r.get("params.c", c.params.c);
    r.get("grid.n", c.n);
    r.get("grid.x_max", c.x_max);
    r.get("k_grid.k_min", c.k_min);
    r.get("k_grid.k_max", c.k_max);
    r.get("k_grid.n_k", c.n_k);
    r.get("probe.b", c.probe_b);
    if (const auto v = tree.get_optional<std::string>("probe.d_sequence"))
        c.d_sequence = parse_list(r, "probe.d_sequence", *v);
    r.get("output.dir", c.out_dir);
    r.get("output.format", c.format);
    if (const auto t = tree.get_child_optional("tolerances")) {
        // check names contain dots, so no path lookups here
        for (const auto& kv : *t) {
            const std::string key = "tolerances." + kv.first;
            double v = 0.0;
            try {
                v = boost::lexical_cast<double>(boost::trim_copy(kv.second.data()));
            } catch (const boost::bad_lexical_cast&) {
                r.fail(key, "cannot read '" + kv.second.data() + "'");
            }
            if (!(v >= 0.0)) r.fail(key, "tolerance must be non-negative");
            c.tolerance_overrides[kv.first] = v;
        }
    }
    try {
        validate(c);
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + std::string(e.what()).substr(std::string("ConfigError: ").size()));
    }
    return c;
}

ExperimentConfig load_config(const std::string& path, const ConfigRequirements& req) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path, req);
}

void validate(const ExperimentConfig& cfg) {
    try {
        catalogue(cfg.entry, cfg.params);
        HalfLineGrid(cfg.x_max, cfg.n);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("format must be csv or json, got '" + cfg.format + "'");
    if (!(cfg.k_min > 0.0) || !(cfg.k_max > cfg.k_min) || cfg.n_k < 2)
        throw ConfigError("k grid needs 0 < k_min < k_max and n_k >= 2");
    if (cfg.n_tests < 2) throw ConfigError("need at least 2 test functions");
    for (std::size_t i = 0; i < cfg.d_sequence.size(); ++i) {
        const double d = cfg.d_sequence[i];
        if (!(d < 0.0)) throw ConfigError("probe d_sequence entries must be negative");
        if (i > 0 && !(std::abs(d) < std::abs(cfg.d_sequence[i - 1])))
            throw ConfigError("probe d_sequence must approach 0 from below");
    }
}

SuiteOptions suite_options(const ExperimentConfig& cfg) {
    SuiteOptions o;
    o.seed = cfg.seed;
    o.n_tests = cfg.n_tests;
    for (const auto& [k, v] : cfg.tolerance_overrides) o.tolerances[k] = v;
    return o;
}

}  // namespace susyeta
