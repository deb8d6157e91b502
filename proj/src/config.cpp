#include "coevo/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace coevo {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!known.count(key)) throw ConfigError(where + key + ": unknown key");
}

template <class T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + key + ": wrong type");
    }
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.at(key).is_number()) throw ConfigError(where + key + ": expected a number");
    return obj.at(key).get<double>();
}

std::uint64_t get_count(const json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0))
        throw ConfigError(where + key + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

void parse_layer(const json& obj, TopologySpec& spec, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    reject_unknown(obj, {"family", "d", "p"}, where + ".");
    if (obj.contains("family")) {
        try {
            spec.family = parse_family(get_as<std::string>(obj, "family", where + "."));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ".family: " + e.what());
        }
    }
    if (obj.contains("d")) spec.d = get_count(obj, "d", where + ".");
    if (obj.contains("p")) spec.p = get_number(obj, "p", where + ".");
}

std::vector<double> parse_grid(const json& v, const std::string& key) {
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array()) {
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(key + ": grid entries must be numbers");
            out.push_back(e.get<double>());
        }
        if (out.empty()) throw ConfigError(key + ": grid must be nonempty");
        return out;
    }
    if (v.is_object()) {
        reject_unknown(v, {"start", "stop", "step"}, key + ".");
        for (const char* k : {"start", "stop", "step"})
            if (!v.contains(k)) throw ConfigError(key + "." + k + ": missing");
        return make_grid(get_number(v, "start", key + "."), get_number(v, "stop", key + "."),
                         get_number(v, "step", key + "."));
    }
    throw ConfigError(key + ": expected a number, a list or {start, stop, step}");
}

}  // namespace

Rationality parse_rationality(const json& value) {
    if (value.is_string()) {
        if (value.get<std::string>() == "inf") return Rationality::infinite();
        throw ConfigError("beta: the only accepted string is \"inf\"");
    }
    if (!value.is_number()) throw ConfigError("beta: expected a number or \"inf\"");
    try {
        return Rationality::finite(value.get<double>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("beta: ") + e.what());
    }
}

nlohmann::ordered_json rationality_json(Rationality beta) {
    if (beta.is_infinite()) return "inf";
    return beta.value();
}

RunConfig parse_run_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(doc,
                   {"n", "influence", "communication", "innovator", "alpha", "beta", "lambda", "mu", "horizon",
                    "seed", "replicates", "initial_opinion", "freeze_network", "plateau_band",
                    "max_network_attempts", "lambda_grid", "mu_grid", "snapshot_every", "out_dir", "threads",
                    "verbose", "derived"},
                   "");
    RunConfig cfg;
    auto& sc = cfg.scenario;
    if (doc.contains("n")) sc.influence.n = sc.communication.n = get_count(doc, "n", "");
    if (doc.contains("influence")) parse_layer(doc.at("influence"), sc.influence, "influence");
    if (doc.contains("communication")) parse_layer(doc.at("communication"), sc.communication, "communication");
    if (doc.contains("innovator")) {
        if (doc.at("innovator").is_null())
            sc.innovator.reset();
        else
            sc.innovator = static_cast<NodeId>(get_count(doc, "innovator", ""));
    }
    if (doc.contains("alpha")) sc.alpha = get_number(doc, "alpha", "");
    if (doc.contains("beta")) sc.beta = parse_rationality(doc.at("beta"));
    if (doc.contains("lambda")) sc.lambda = get_number(doc, "lambda", "");
    if (doc.contains("mu")) sc.mu = get_number(doc, "mu", "");
    if (doc.contains("horizon") && !doc.at("horizon").is_null()) sc.horizon = get_count(doc, "horizon", "");
    if (doc.contains("seed")) sc.master_seed = get_count(doc, "seed", "");
    if (doc.contains("replicates")) sc.replicates = get_count(doc, "replicates", "");
    if (doc.contains("initial_opinion")) sc.initial_opinion = get_number(doc, "initial_opinion", "");
    if (doc.contains("freeze_network")) sc.freeze_network = get_as<bool>(doc, "freeze_network", "");
    if (doc.contains("plateau_band")) sc.plateau_band = get_number(doc, "plateau_band", "");
    if (doc.contains("max_network_attempts")) sc.max_network_attempts = get_count(doc, "max_network_attempts", "");
    cfg.lambda_grid = doc.contains("lambda_grid") ? parse_grid(doc.at("lambda_grid"), "lambda_grid")
                                                  : make_grid(0.0, 0.6, 0.02);
    cfg.mu_grid = doc.contains("mu_grid") ? parse_grid(doc.at("mu_grid"), "mu_grid") : std::vector<double>{sc.mu};
    if (doc.contains("snapshot_every")) cfg.snapshot_every = get_count(doc, "snapshot_every", "");
    if (doc.contains("out_dir")) cfg.out_dir = get_as<std::string>(doc, "out_dir", "");
    if (doc.contains("threads")) cfg.threads = get_count(doc, "threads", "");
    if (doc.contains("verbose")) cfg.verbose = get_as<bool>(doc, "verbose", "");
    sc.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }
    return parse_run_config(doc);
}

nlohmann::ordered_json to_json(const RunConfig& config) {
    const auto& sc = config.scenario;
    auto layer = [](const TopologySpec& s) {
        nlohmann::ordered_json j;
        j["family"] = std::string(to_string(s.family));
        j["d"] = s.d;
        j["p"] = s.p;
        return j;
    };
    nlohmann::ordered_json j;
    j["n"] = sc.n();
    j["influence"] = layer(sc.influence);
    j["communication"] = layer(sc.communication);
    if (sc.innovator)
        j["innovator"] = *sc.innovator;
    else
        j["innovator"] = nullptr;
    j["alpha"] = sc.alpha;
    j["beta"] = rationality_json(sc.beta);
    j["lambda"] = sc.lambda;
    j["mu"] = sc.mu;
    j["horizon"] = sc.resolved_horizon();
    j["seed"] = sc.master_seed;
    j["replicates"] = sc.replicates;
    j["initial_opinion"] = sc.initial_opinion;
    j["freeze_network"] = sc.freeze_network;
    j["plateau_band"] = sc.plateau_band;
    j["max_network_attempts"] = sc.max_network_attempts;
    j["lambda_grid"] = config.lambda_grid;
    j["mu_grid"] = config.mu_grid;
    j["snapshot_every"] = config.snapshot_every == 0 ? sc.n() : config.snapshot_every;
    return j;
}

}  // namespace coevo
