#include "config.hpp"

#include <cstdlib>
#include <fstream>

#include "summakit/errors.hpp"
#include "summakit/io/csv.hpp"

namespace summakit::cli {

namespace {

const Json& at(const Json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError("missing config key '" + key + "'");
    return j.at(key);
}

bool has(const Json& j, const std::string& key) { return j.is_object() && j.contains(key) && !j.at(key).is_null(); }

// Rule strings "name" or "name(k)".
std::pair<std::string, std::optional<std::int64_t>> split_call(const std::string& text) {
    const auto open = text.find('(');
    if (open == std::string::npos) return {text, std::nullopt};
    if (text.back() != ')') throw ConfigError("malformed rule '" + text + "'");
    const std::string inner = text.substr(open + 1, text.size() - open - 2);
    try {
        std::size_t used = 0;
        const auto v = std::stoll(inner, &used);
        if (used != inner.size()) throw std::invalid_argument(inner);
        return {text.substr(0, open), v};
    } catch (const std::logic_error&) {
        throw ConfigError("malformed rule argument in '" + text + "'");
    }
}

}  // namespace

double get_double(const Json& j, const std::string& key) {
    const auto& v = at(j, key);
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

std::int64_t get_int(const Json& j, const std::string& key) {
    const auto& v = at(j, key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == static_cast<double>(static_cast<std::int64_t>(d))) return static_cast<std::int64_t>(d);
    }
    throw ConfigError("config key '" + key + "' must be an integer");
}

std::string get_string(const Json& j, const std::string& key) {
    const auto& v = at(j, key);
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

bool get_bool(const Json& j, const std::string& key) {
    const auto& v = at(j, key);
    if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
    return v.get<bool>();
}

Json default_config(const std::string& command) {
    Json c = {
        {"seed", 1},
        {"horizon", 10000},
        {"jobs", 1},
        {"sequence", {{"generator", "spike"}, {"support", "squares"}, {"spike", 1.0}, {"base", 0.0}}},
        {"family", {{"kind", "identity"}, {"rho", 1.0}}},
    };
    if (command == "norm") {
        c["norm"] = {{"tol", 1e-9}};
    } else if (command == "conjugate") {
        c["conjugate"] = {{"v", {0.5, 1.0, 2.0}}, {"search_cap", 100.0}, {"tol", 1e-9}};
    } else if (command == "density") {
        c["ideal"] = {{"kind", "density_zero"}, {"tol", 0.01}};
        c["density"] = {{"support", "squares"}};
    } else if (command == "converge") {
        c["ideal"] = {{"kind", "density_zero"}, {"tol", 0.01}};
        c["windows"] = {{"mode", "lambda"}, {"lambda", "identity"}, {"alpha", 1.0}};
        c["theta"] = nullptr;
        c["converge"] = {{"tester", "slambda"}, {"reading", "canonical"}, {"target", 0.0}, {"gamma", 0.01},
                         {"xi", 0.05},          {"eps", 0.5},              {"tol", 0.01},   {"normalization", "h"},
                         {"radius", nullptr}};
    } else if (command == "verify") {
        c.erase("sequence");
        c.erase("family");
        c["ideal"] = {{"kind", "density_zero"}, {"tol", 0.01}};
        c["verify"] = {{"theorem", "T1"},  {"alpha", 1.0},         {"beta", 1.0},       {"instances", 200},
                       {"gamma", 0.5},     {"xi", 0.1},            {"gamma_w", 0.25},   {"negative_control", false},
                       {"converse", false}, {"regime", nullptr},   {"family", nullptr}, {"theta", nullptr},
                       {"refined", nullptr}};
    } else if (command == "gen") {
        c.erase("family");
        c["gen"] = {{"what", "sequence"}, {"regime", {{"kind", "liminf_positive"}}}, {"alpha", 1.0}, {"beta", 1.0},
                    {"base", 2}};
    }
    return c;
}

Json load_config_file(const std::string& path) {
    const auto text = io::read_text_file(path);
    try {
        auto j = Json::parse(text);
        if (!j.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
        return j;
    } catch (const Json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

void set_dotted(Json& config, const std::string& path, const std::string& text) {
    Json value;
    try {
        value = Json::parse(text);
    } catch (const Json::parse_error&) {
        value = text;
    }
    Json* node = &config;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const auto key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("malformed config path '" + path + "'");
        if (!node->is_object()) *node = Json::object();
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    *node = std::move(value);
}

std::int64_t horizon_of(const Json& config) {
    const auto h = get_int(config, "horizon");
    if (h < 1) throw ConfigError("horizon must be >= 1");
    return h;
}

std::uint64_t seed_of(const Json& config) {
    const auto s = get_int(config, "seed");
    if (s < 0) throw ConfigError("seed must be non-negative");
    return static_cast<std::uint64_t>(s);
}

orlicz::OrliczSpec build_spec(const Json& j) {
    const auto kind = get_string(j, "kind");
    auto cap_or = [&](double fallback) { return has(j, "cap") ? get_double(j, "cap") : fallback; };
    if (kind == "identity") return orlicz::OrliczSpec::identity(cap_or(orlicz::kDefaultPolynomialCap));
    if (kind == "power") return orlicz::OrliczSpec::power(get_double(j, "p"), cap_or(orlicz::kDefaultPolynomialCap));
    if (kind == "power_over_p") {
        return orlicz::OrliczSpec::power_over_p(get_double(j, "p"), cap_or(orlicz::kDefaultPolynomialCap));
    }
    if (kind == "exp_minus_one") return orlicz::OrliczSpec::exp_minus_one(cap_or(orlicz::kDefaultExpCap));
    if (kind == "tabulated") {
        std::vector<orlicz::GridPoint> grid;
        if (has(j, "csv")) {
            grid = io::read_grid_csv(get_string(j, "csv"));
        } else {
            const auto& rows = at(j, "grid");
            if (!rows.is_array()) throw ConfigError("tabulated grid must be a list of [u, M] pairs");
            for (const auto& row : rows) {
                if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
                    throw ConfigError("tabulated grid rows must be [u, M] number pairs");
                }
                grid.push_back({row[0].get<double>(), row[1].get<double>()});
            }
        }
        return has(j, "cap") ? orlicz::OrliczSpec::tabulated(std::move(grid), get_double(j, "cap"))
                             : orlicz::OrliczSpec::tabulated(std::move(grid));
    }
    throw ConfigError("unknown Orlicz kind '" + kind + "'");
}

orlicz::MusielakFamily build_family(const Json& j) {
    const auto kind = get_string(j, "kind");
    const double rho = has(j, "rho") ? get_double(j, "rho") : 1.0;
    if (!(rho > 0.0)) throw ConfigError("family rho must be positive");
    if (kind == "alternating") return orlicz::MusielakFamily::alternating(build_spec(at(j, "odd")), build_spec(at(j, "even")), rho);
    if (kind == "power_ramp") {
        return orlicz::MusielakFamily::power_ramp(get_double(j, "p_inf"), get_double(j, "amplitude"), rho);
    }
    return orlicz::MusielakFamily::uniform(build_spec(j), rho);
}

ideals::IdealOracle build_ideal(const Json& j, std::int64_t horizon) {
    const auto kind = get_string(j, "kind");
    if (kind == "finite") return ideals::IdealOracle::finite(horizon);
    if (kind == "density_zero") return ideals::IdealOracle::density_zero(get_double(j, "tol"), horizon);
    if (kind == "summable") {
        return ideals::IdealOracle::summable_power(get_double(j, "power"), get_double(j, "bound"), horizon);
    }
    throw ConfigError("unknown ideal kind '" + kind + "'");
}

convergence::WindowLengthRule build_window_rule(const Json& j) {
    using convergence::WindowLengthRule;
    if (j.is_array()) {
        std::vector<std::int64_t> values;
        for (const auto& v : j) {
            if (!v.is_number_integer()) throw ConfigError("window length table must hold integers");
            values.push_back(v.get<std::int64_t>());
        }
        return WindowLengthRule::table(std::move(values));
    }
    if (!j.is_string()) throw ConfigError("window rule must be a string or a list of integers");
    const auto [name, arg] = split_call(j.get<std::string>());
    auto need = [&, &name = name, &arg = arg] {
        if (!arg) throw ConfigError("window rule '" + name + "' needs an argument");
        return *arg;
    };
    if (name == "identity") return WindowLengthRule::identity();
    if (name == "ceil_div") return WindowLengthRule::ceil_div(need());
    if (name == "capped") return WindowLengthRule::capped(need());
    if (name == "minus_sqrt") return WindowLengthRule::minus_sqrt();
    if (name == "ceil_sqrt") return WindowLengthRule::ceil_sqrt();
    throw ConfigError("unknown window rule '" + name + "'");
}

lacunary::LacunaryTheta build_theta(const Json& j) {
    using lacunary::LacunaryTheta;
    if (j.is_array()) return LacunaryTheta::validate(j.get<std::vector<std::int64_t>>());
    if (has(j, "csv")) return LacunaryTheta::validate(io::read_theta_csv(get_string(j, "csv")));
    const auto rule = get_string(j, "rule");
    if (rule == "geometric") {
        return LacunaryTheta::geometric(get_int(j, "base"), get_int(j, "count"),
                                        has(j, "scale") ? get_int(j, "scale") : 1);
    }
    if (rule == "factorial_gaps") return LacunaryTheta::factorial_gaps(get_int(j, "count"));
    if (rule == "list") return LacunaryTheta::validate(at(j, "boundaries").get<std::vector<std::int64_t>>());
    throw ConfigError("unknown theta rule '" + rule + "'");
}

convergence::WindowScheme build_scheme(const Json& windows, const Json& theta, std::int64_t horizon) {
    const auto mode = get_string(windows, "mode");
    const double alpha = get_double(windows, "alpha");
    if (mode == "lambda") return convergence::LambdaWindows{build_window_rule(at(windows, "lambda")), alpha};
    if (mode == "blocks") {
        auto t = theta.is_null() ? lacunary::LacunaryTheta::geometric_within(2, horizon) : build_theta(theta);
        return convergence::LacunaryBlocks{std::move(t), alpha};
    }
    throw ConfigError("unknown window mode '" + mode + "'");
}

gen::GeneratorSpec build_generator(const Json& j, std::uint64_t seed, std::int64_t horizon) {
    gen::GeneratorSpec spec;
    spec.seed = has(j, "seed") ? static_cast<std::uint64_t>(get_int(j, "seed")) : seed;
    spec.horizon = horizon;
    if (has(j, "values")) {
        const auto& v = at(j, "values");
        if (!v.is_array()) throw ConfigError("sequence values must be a list of numbers");
        std::vector<double> values;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError("sequence values must be numbers");
            values.push_back(e.get<double>());
        }
        spec.horizon = static_cast<std::int64_t>(values.size());
        spec.kind = gen::Custom{std::move(values)};
        return spec;
    }
    const auto kind = get_string(j, "generator");
    if (kind == "spike") {
        spec.kind = gen::SpikeOnSet{gen::support_from_string(get_string(j, "support")),
                                    has(j, "spike") ? get_double(j, "spike") : 1.0,
                                    has(j, "base") ? get_double(j, "base") : 0.0};
    } else if (kind == "oscillating") {
        spec.kind = gen::Oscillating{has(j, "period") ? get_int(j, "period") : 2};
    } else if (kind == "convergent") {
        spec.kind = gen::ConvergentPlusNoise{get_double(j, "limit"), has(j, "amplitude") ? get_double(j, "amplitude") : 1.0,
                                             has(j, "power") ? get_double(j, "power") : 1.0};
    } else if (kind == "bounded_random") {
        spec.kind = gen::BoundedRandom{has(j, "bound") ? get_double(j, "bound") : 1.0};
    } else {
        throw ConfigError("unknown generator '" + kind + "'");
    }
    return spec;
}

orlicz::SequencePrefix build_sequence(const Json& j, std::uint64_t seed, std::int64_t horizon) {
    if (has(j, "csv")) return io::read_sequence_csv(get_string(j, "csv"));
    return gen::gen_sequence(build_generator(j, seed, horizon));
}

gen::Regime build_regime(const Json& j, double alpha, double beta) {
    const auto kind = get_string(j, "kind");
    if (kind == "liminf_positive") {
        return gen::LiminfPositive{alpha, beta, has(j, "k") ? get_int(j, "k") : 2, has(j, "cap") ? get_int(j, "cap") : 16};
    }
    if (kind == "lim_ratio_one") return gen::LimRatioOne{alpha, beta};
    if (kind == "violating_liminf") return gen::ViolatingLiminf{alpha, beta};
    if (kind == "explicit") {
        return gen::ExplicitPair{build_window_rule(at(j, "lambda")), build_window_rule(at(j, "mu")), alpha, beta};
    }
    throw ConfigError("unknown regime '" + kind + "'");
}

lab::TheoremCase build_theorem_case(const Json& config) {
    const auto& v = at(config, "verify");
    lab::TheoremCase c;
    c.id = lab::theorem_from_string(get_string(v, "theorem"));
    c.alpha = get_double(v, "alpha");
    c.beta = get_double(v, "beta");
    if (has(v, "regime")) c.regime = build_regime(at(v, "regime"), c.alpha, c.beta);
    if (has(v, "family")) c.family = build_family(at(v, "family"));
    c.horizon = horizon_of(config);
    c.ideal = build_ideal(at(config, "ideal"), std::max<std::int64_t>(c.horizon, 10)).kind();
    c.gamma = get_double(v, "gamma");
    c.xi = get_double(v, "xi");
    c.gamma_w = get_double(v, "gamma_w");
    c.instances = get_int(v, "instances");
    c.seed = seed_of(config);
    // theta! need not pass the lacunarity evidence check: refinement shortens blocks.
    if (has(v, "theta")) c.theta = lacunary::LacunaryTheta::structural(at(v, "theta").get<std::vector<std::int64_t>>());
    if (has(v, "refined")) {
        c.refined = lacunary::LacunaryTheta::structural(at(v, "refined").get<std::vector<std::int64_t>>());
    }
    c.negative_control = get_bool(v, "negative_control");
    return c;
}

}  // namespace summakit::cli
