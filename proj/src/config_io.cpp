#include "fragnet/config_io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fragnet/csv.hpp"
#include "fragnet/version.hpp"

namespace fragnet {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

const std::array<const char*, 32> known_keys = {
    "model.family",      "model.alpha",     "model.a",
    "kernels.family",    "kernels.gamma",   "kernels.lambda_d",
    "kernels.lambda_b",  "kernels.lambda_s", "kernels.c_d",
    "kernels.c_b",       "kernels.c_s",
    "run.mode",          "run.decay",       "run.phi",
    "run.n",             "run.horizon",     "run.seed",
    "run.replicas",      "run.eps",         "run.type_ratio",
    "run.strict_dissimilar", "run.mf_reference",
    "sweep.alpha",       "sweep.lambda_d",  "sweep.lambda_b",
    "sweep.lambda_s",    "sweep.gamma",     "sweep.phi",
    "sweep.mode",        "sweep.n",         "sweep.horizon",
    "sweep.replicas",
};

// sweep.cap sits outside the array so the array size stays a round 32
constexpr const char* cap_key = "sweep.cap";

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        fail(key + ": not a number '" + value + "'");
    }
    if (pos != value.size())
        fail(key + ": trailing characters in '" + value + "'");
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &pos);
    } catch (const std::exception&) {
        fail(key + ": not an integer '" + value + "'");
    }
    if (pos != value.size())
        fail(key + ": trailing characters in '" + value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &pos);
    } catch (const std::exception&) {
        fail(key + ": not an unsigned integer '" + value + "'");
    }
    if (pos != value.size() || value.find('-') != std::string::npos)
        fail(key + ": not an unsigned integer '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true")
        return true;
    if (value == "false")
        return false;
    fail(key + ": expected true or false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& key, const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            fail(key + ": empty list element");
        items.push_back(item);
    }
    if (items.empty())
        fail(key + ": empty list");
    return items;
}

class Lookup {
public:
    explicit Lookup(const std::map<std::string, std::string>& raw) : raw_(raw) {}

    bool has(const std::string& key) const { return raw_.count(key) != 0; }

    std::string str(const std::string& key, const std::string& fallback) const {
        auto it = raw_.find(key);
        return it == raw_.end() ? fallback : it->second;
    }

    double num(const std::string& key, double fallback) const {
        auto it = raw_.find(key);
        return it == raw_.end() ? fallback : parse_double(key, it->second);
    }

    long long integer(const std::string& key, long long fallback) const {
        auto it = raw_.find(key);
        return it == raw_.end() ? fallback : parse_int(key, it->second);
    }

private:
    const std::map<std::string, std::string>& raw_;
};

}  // namespace

bool SweepSpec::any() const {
    return !alpha.empty() || !lambda_d.empty() || !lambda_b.empty() || !lambda_s.empty() ||
           !gamma.empty() || !phi.empty() || !mode.empty() || !n.empty() || !horizon.empty();
}

std::size_t SweepSpec::cell_count() const {
    std::size_t count = 1;
    const auto mul = [&count](std::size_t k) { count *= std::max<std::size_t>(k, 1); };
    mul(alpha.size());
    mul(lambda_d.size());
    mul(lambda_b.size());
    mul(lambda_s.size());
    mul(gamma.size());
    mul(phi.size());
    mul(mode.size());
    mul(n.size());
    mul(horizon.size());
    return count;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> raw;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("line " + std::to_string(line_no) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail("line " + std::to_string(line_no) + " has an empty key");
        if (key.rfind("manifest.", 0) == 0)
            continue;
        if (!raw.emplace(key, value).second)
            fail("duplicate key '" + key + "'");
    }
    return raw;
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::base: return "base";
        case Mode::weak_ties: return "weak-ties";
        case Mode::bias: return "bias";
    }
    return "base";
}

Mode mode_from_name(const std::string& name) {
    if (name == "base")
        return Mode::base;
    if (name == "weak-ties")
        return Mode::weak_ties;
    if (name == "bias")
        return Mode::bias;
    throw std::invalid_argument("unknown mode '" + name + "', expected base, weak-ties or bias");
}

ConfigDoc build_config(const std::map<std::string, std::string>& raw) {
    for (const auto& [key, value] : raw) {
        (void)value;
        const bool known = key == cap_key ||
                           std::find_if(known_keys.begin(), known_keys.end(), [&key](const char* k) {
                               return key == k;
                           }) != known_keys.end();
        if (!known)
            fail("unknown key '" + key + "'");
    }

    ConfigDoc doc;
    Lookup look(raw);
    auto& e = doc.entries;
    const auto keep = [&raw, &e](const std::string& key, const std::string& fallback) {
        auto it = raw.find(key);
        e[key] = it == raw.end() ? fallback : it->second;
        return e[key];
    };

    // homophily response
    const std::string family = keep("model.family", "power");
    if (family == "power") {
        if (look.has("model.a"))
            fail("model.a only applies to model.family=log");
        const double alpha = parse_double("model.alpha", keep("model.alpha", "0.5"));
        try {
            doc.sim.f = HomophilyFunction::power(alpha);
        } catch (const std::invalid_argument& ex) {
            fail(std::string("model.alpha: ") + ex.what());
        }
    } else if (family == "log") {
        if (look.has("model.alpha"))
            fail("model.alpha only applies to model.family=power");
        const double a = parse_double("model.a", keep("model.a", "4"));
        try {
            doc.sim.f = HomophilyFunction::log_saturating(a);
        } catch (const std::invalid_argument& ex) {
            fail(std::string("model.a: ") + ex.what());
        }
    } else {
        fail("model.family must be power or log, got '" + family + "'");
    }

    // retention kernels
    const std::string kfamily = keep("kernels.family", "weibull");
    if (kfamily == "weibull") {
        for (const char* key : {"kernels.c_d", "kernels.c_b", "kernels.c_s"})
            if (look.has(key))
                fail(std::string(key) + " only applies to kernels.family=constant");
        const double gamma = parse_double("kernels.gamma", keep("kernels.gamma", "0.5"));
        const double lam_d = parse_double("kernels.lambda_d", keep("kernels.lambda_d", "1.2"));
        const double lam_b = parse_double("kernels.lambda_b", keep("kernels.lambda_b", "1.5"));
        const double lam_s = parse_double("kernels.lambda_s", keep("kernels.lambda_s", "2"));
        try {
            doc.sim.kernels = KernelTriple::weibull(lam_d, lam_b, lam_s, gamma);
        } catch (const std::invalid_argument& ex) {
            fail(std::string("kernels.lambda_d/lambda_b/lambda_s/gamma: ") + ex.what());
        }
    } else if (kfamily == "constant") {
        for (const char* key :
             {"kernels.gamma", "kernels.lambda_d", "kernels.lambda_b", "kernels.lambda_s"})
            if (look.has(key))
                fail(std::string(key) + " only applies to kernels.family=weibull");
        const double c_d = parse_double("kernels.c_d", keep("kernels.c_d", "0.5"));
        const double c_b = parse_double("kernels.c_b", keep("kernels.c_b", "0.5"));
        const double c_s = parse_double("kernels.c_s", keep("kernels.c_s", "0.5"));
        try {
            doc.sim.kernels = KernelTriple::constant(c_d, c_b, c_s);
        } catch (const std::invalid_argument& ex) {
            fail(std::string("kernels.c_d/c_b/c_s: ") + ex.what());
        }
    } else {
        fail("kernels.family must be weibull or constant, got '" + kfamily + "'");
    }

    // run block
    try {
        doc.sim.mode = mode_from_name(keep("run.mode", "base"));
    } catch (const std::invalid_argument& ex) {
        fail(std::string("run.mode: ") + ex.what());
    }
    const std::string decay = keep("run.decay", "per-step");
    if (decay == "per-step")
        doc.sim.decay_mode = DecayMode::per_step;
    else if (decay == "cohort")
        doc.sim.decay_mode = DecayMode::cohort;
    else
        fail("run.decay must be per-step or cohort, got '" + decay + "'");
    doc.sim.phi = parse_double("run.phi", keep("run.phi", "0"));
    doc.sim.n = static_cast<int>(parse_int("run.n", keep("run.n", "1000")));
    doc.sim.horizon = static_cast<int>(parse_int("run.horizon", keep("run.horizon", "200")));
    doc.sim.seed = parse_u64("run.seed", keep("run.seed", "1"));
    doc.sim.replicas = static_cast<int>(parse_int("run.replicas", keep("run.replicas", "1")));
    doc.sim.eps = parse_double("run.eps", keep("run.eps", "0.01"));
    doc.sim.type_ratio = parse_double("run.type_ratio", keep("run.type_ratio", "0.5"));
    doc.sim.strict_dissimilar =
        parse_bool("run.strict_dissimilar", keep("run.strict_dissimilar", "false"));
    doc.sim.mf_reference = parse_bool("run.mf_reference", keep("run.mf_reference", "false"));
    doc.sim.validate();

    // sweep block; entries are kept verbatim only when given
    const auto doubles = [&raw](const char* key) {
        std::vector<double> out;
        auto it = raw.find(key);
        if (it == raw.end())
            return out;
        for (const auto& item : split_list(key, it->second))
            out.push_back(parse_double(key, item));
        return out;
    };
    doc.sweep.alpha = doubles("sweep.alpha");
    doc.sweep.lambda_d = doubles("sweep.lambda_d");
    doc.sweep.lambda_b = doubles("sweep.lambda_b");
    doc.sweep.lambda_s = doubles("sweep.lambda_s");
    doc.sweep.gamma = doubles("sweep.gamma");
    doc.sweep.phi = doubles("sweep.phi");
    if (look.has("sweep.mode")) {
        for (const auto& item : split_list("sweep.mode", look.str("sweep.mode", ""))) {
            try {
                doc.sweep.mode.push_back(mode_from_name(item));
            } catch (const std::invalid_argument& ex) {
                fail(std::string("sweep.mode: ") + ex.what());
            }
        }
    }
    const auto ints = [&raw](const char* key) {
        std::vector<int> out;
        auto it = raw.find(key);
        if (it == raw.end())
            return out;
        for (const auto& item : split_list(key, it->second))
            out.push_back(static_cast<int>(parse_int(key, item)));
        return out;
    };
    doc.sweep.n = ints("sweep.n");
    doc.sweep.horizon = ints("sweep.horizon");
    if (!doc.sweep.alpha.empty() && doc.sim.f.family() != HomophilyFamily::power)
        fail("sweep.alpha requires model.family=power");
    if ((!doc.sweep.lambda_d.empty() || !doc.sweep.lambda_b.empty() ||
         !doc.sweep.lambda_s.empty() || !doc.sweep.gamma.empty()) &&
        doc.sim.kernels.similar().family() != KernelFamily::weibull)
        fail("sweep.lambda_* and sweep.gamma require kernels.family=weibull");

    doc.sweep.replicas =
        static_cast<int>(look.integer("sweep.replicas", doc.sim.replicas));
    if (doc.sweep.replicas < 1)
        fail("sweep.replicas must be >= 1");
    const long long cap = look.integer(cap_key, 4096);
    if (cap < 1)
        fail("sweep.cap must be >= 1");
    doc.sweep.cap = static_cast<std::size_t>(cap);
    doc.has_sweep = doc.sweep.any();
    if (doc.has_sweep && doc.sweep.cell_count() > doc.sweep.cap)
        fail("sweep grid has " + std::to_string(doc.sweep.cell_count()) +
             " cells, exceeding sweep.cap=" + std::to_string(doc.sweep.cap));
    for (const char* key : {"sweep.alpha", "sweep.lambda_d", "sweep.lambda_b", "sweep.lambda_s",
                            "sweep.gamma", "sweep.phi", "sweep.mode", "sweep.n", "sweep.horizon",
                            "sweep.replicas", cap_key}) {
        auto it = raw.find(key);
        if (it != raw.end())
            e[key] = it->second;
    }
    return doc;
}

ConfigDoc parse_config_text(const std::string& text) { return build_config(parse_key_values(text)); }

ConfigDoc load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("config: cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string render_manifest(const ConfigDoc& doc, const ManifestInfo& info) {
    std::string out = "# run manifest; also a valid config (manifest.* keys are ignored)\n";
    for (const auto& [key, value] : doc.entries)
        out += key + " = " + value + "\n";
    out += std::string("manifest.engine = ") + engine_version + "\n";
    out += "manifest.master_seed = " + std::to_string(info.master_seed) + "\n";
    for (std::size_t r = 0; r < info.replica_seeds.size(); ++r)
        out += "manifest.seed_replica_" + std::to_string(r) + " = " +
               std::to_string(info.replica_seeds[r]) + "\n";
    for (std::size_t i = 0; i < info.outputs.size(); ++i)
        out += "manifest.output_" + std::to_string(i) + " = " + info.outputs[i] + "\n";
    return out;
}

}  // namespace fragnet
