#include "commands.hpp"

#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "report.hpp"
#include "summakit/errors.hpp"
#include "summakit/io/csv.hpp"

namespace summakit::cli {

namespace {

// Flag name -> dotted config path. Values pass through set_dotted, so numbers
// and lists may be given in JSON syntax.
using FlagMap = std::vector<std::pair<std::string, std::string>>;

const FlagMap& common_flags() {
    static const FlagMap flags{{"--seed", "seed"}, {"--horizon", "horizon"}, {"--jobs", "jobs"}};
    return flags;
}

const std::map<std::string, FlagMap>& command_flags() {
    static const std::map<std::string, FlagMap> flags{
        {"norm", {{"--csv", "sequence.csv"}, {"--family", "family.kind"}, {"--p", "family.p"}, {"--tol", "norm.tol"}}},
        {"conjugate",
         {{"--family", "family.kind"},
          {"--p", "family.p"},
          {"--v", "conjugate.v"},
          {"--search-cap", "conjugate.search_cap"},
          {"--tol", "conjugate.tol"}}},
        {"density", {{"--support", "density.support"}, {"--ideal", "ideal.kind"}, {"--ideal-tol", "ideal.tol"}}},
        {"converge",
         {{"--tester", "converge.tester"},
          {"--reading", "converge.reading"},
          {"--target", "converge.target"},
          {"--gamma", "converge.gamma"},
          {"--xi", "converge.xi"},
          {"--eps", "converge.eps"},
          {"--tol", "converge.tol"},
          {"--radius", "converge.radius"},
          {"--normalization", "converge.normalization"},
          {"--alpha", "windows.alpha"},
          {"--lambda", "windows.lambda"},
          {"--mode", "windows.mode"},
          {"--csv", "sequence.csv"},
          {"--generator", "sequence.generator"},
          {"--support", "sequence.support"},
          {"--period", "sequence.period"},
          {"--family", "family.kind"},
          {"--p", "family.p"},
          {"--ideal", "ideal.kind"},
          {"--ideal-tol", "ideal.tol"}}},
        {"verify",
         {{"--theorem", "verify.theorem"},
          {"--instances", "verify.instances"},
          {"--alpha", "verify.alpha"},
          {"--beta", "verify.beta"},
          {"--gamma", "verify.gamma"},
          {"--xi", "verify.xi"},
          {"--gamma-w", "verify.gamma_w"},
          {"--theta", "verify.theta"},
          {"--refined", "verify.refined"},
          {"--ideal", "ideal.kind"},
          {"--ideal-tol", "ideal.tol"}}},
        {"gen",
         {{"--what", "gen.what"},
          {"--generator", "sequence.generator"},
          {"--support", "sequence.support"},
          {"--period", "sequence.period"},
          {"--regime", "gen.regime.kind"},
          {"--alpha", "gen.alpha"},
          {"--beta", "gen.beta"},
          {"--base", "gen.base"},
          {"--count", "gen.count"}}},
    };
    return flags;
}

const char* command_help(const std::string& name) {
    if (name == "norm") return "Modular, Luxemburg and Orlicz norms of a sequence prefix";
    if (name == "conjugate") return "Complementary function values N(v)";
    if (name == "density") return "Exact natural density of a support set and its ideal verdict";
    if (name == "converge") return "Run a convergence tester on a sequence prefix";
    if (name == "verify") return "Check an inclusion theorem on generated instances";
    return "Generate sequences, window pairs or theta pairs";
}

struct Invocation {
    std::string config_path;
    std::string output;
    std::string dump_windows;
    std::vector<std::string> sets;
    bool negative_control = false;
    bool converse = false;
    std::map<std::string, std::string> values;
};

void emit(const std::string& text, const std::string& output, std::ostream& out) {
    if (output.empty()) {
        out << text;
    } else {
        io::write_file_atomic(output, text);
    }
}

Json effective_config(const std::string& command, const Invocation& inv) {
    Json config = default_config(command);
    if (!inv.config_path.empty()) config.merge_patch(load_config_file(inv.config_path));
    if (const char* seed = std::getenv("SUMMAKIT_SEED"); seed != nullptr && *seed != '\0') {
        set_dotted(config, "seed", seed);
    }
    for (const auto& [flag, path] : common_flags()) {
        if (auto it = inv.values.find(flag); it != inv.values.end()) set_dotted(config, path, it->second);
    }
    for (const auto& [flag, path] : command_flags().at(command)) {
        if (auto it = inv.values.find(flag); it != inv.values.end()) set_dotted(config, path, it->second);
    }
    if (inv.negative_control) config["verify"]["negative_control"] = true;
    if (inv.converse) config["verify"]["converse"] = true;
    for (const auto& s : inv.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key.path=value, got '" + s + "'");
        set_dotted(config, s.substr(0, eq), s.substr(eq + 1));
    }
    return config;
}

int cmd_norm(const Json& config, const Invocation& inv, std::ostream& out) {
    const auto x = build_sequence(config.at("sequence"), seed_of(config), horizon_of(config));
    const auto family = build_family(config.at("family"));
    const double tol = get_double(config.at("norm"), "tol");
    Json result = {{"horizon", x.horizon()},
                   {"modular", orlicz::modular(family, x, 1.0)},
                   {"luxemburg", to_json(orlicz::luxemburg_norm(family, x, tol))},
                   {"orlicz", to_json(orlicz::orlicz_norm(family, x, tol))}};
    emit(render(envelope("norm", config, std::move(result))), inv.output, out);
    return kExitOk;
}

int cmd_conjugate(const Json& config, const Invocation& inv, std::ostream& out) {
    const auto spec = build_spec(config.at("family"));
    const auto& section = config.at("conjugate");
    const double cap = get_double(section, "search_cap");
    const double tol = get_double(section, "tol");
    Json values = Json::array();
    const auto& vs = section.at("v");
    if (!vs.is_array()) throw ConfigError("conjugate.v must be a list of numbers");
    for (const auto& v : vs) {
        if (!v.is_number()) throw ConfigError("conjugate.v must be a list of numbers");
        auto entry = to_json(orlicz::conjugate_eval(spec, v.get<double>(), cap, tol));
        entry["v"] = v;
        values.push_back(std::move(entry));
    }
    Json result = {{"spec", spec.describe()}, {"values", std::move(values)}};
    emit(render(envelope("conjugate", config, std::move(result))), inv.output, out);
    return kExitOk;
}

int cmd_density(const Json& config, const Invocation& inv, std::ostream& out) {
    const auto n = horizon_of(config);
    const auto support = gen::support_from_string(get_string(config.at("density"), "support"));
    const auto seed = seed_of(config);
    auto indicator = [&](std::int64_t j) { return support.contains(j, seed); };
    const auto density = convergence::natural_density_prefix(indicator, n);
    const auto ideal = build_ideal(config.at("ideal"), n);
    Json result = {{"support", support.describe()},
                   {"n", n},
                   {"density", density.str()},
                   {"density_value", density.to_double()},
                   {"ideal", ideal.describe()},
                   {"membership", to_json(ideals::membership(ideal, indicator))}};
    emit(render(envelope("density", config, std::move(result))), inv.output, out);
    return kExitOk;
}

int cmd_converge(const Json& config, const Invocation& inv, std::ostream& out) {
    const auto x = build_sequence(config.at("sequence"), seed_of(config), horizon_of(config));
    const auto& c = config.at("converge");
    const auto tester = get_string(c, "tester");
    const auto reading = get_string(c, "reading");
    const double target = get_double(c, "target");
    const auto ideal = build_ideal(config.at("ideal"), x.horizon());

    convergence::ConvergenceVerdict verdict;
    bool summation = false;
    if (tester == "statistical") {
        verdict = convergence::statistical_test(x, target, get_double(c, "eps"), ideal);
    } else if (tester == "ntheta") {
        const auto& t = config.at("theta");
        const auto theta =
            t.is_null() ? lacunary::LacunaryTheta::geometric_within(2, std::max<std::int64_t>(x.horizon(), 2))
                        : build_theta(t);
        const auto norm = get_string(c, "normalization");
        if (norm != "h" && norm != "j") throw ConfigError("converge.normalization must be 'h' or 'j'");
        verdict = convergence::ntheta_test(x, target, theta,
                                           norm == "h" ? convergence::NThetaNormalization::ByH
                                                       : convergence::NThetaNormalization::ByJ,
                                           get_double(c, "tol"));
        summation = true;
    } else {
        if (reading != "canonical" && reading != "literal") {
            throw ConfigError("converge.reading must be 'canonical' or 'literal'");
        }
        const auto& theta_json = config.at("theta");
        convergence::ConvergenceQuery q{x,
                                        target,
                                        build_family(config.at("family")),
                                        build_scheme(config.at("windows"), theta_json, x.horizon()),
                                        ideal,
                                        get_double(c, "gamma"),
                                        get_double(c, "xi"),
                                        reading == "canonical" ? convergence::Reading::Canonical
                                                               : convergence::Reading::Literal,
                                        theta_json.is_null() ? std::nullopt
                                                             : std::optional(build_theta(theta_json))};
        if (tester == "slambda") {
            verdict = convergence::slambda_alpha_test(q);
        } else if (tester == "wlambda") {
            verdict = convergence::wlambda_alpha_test(q);
            summation = reading == "canonical";
        } else if (tester == "neighborhood") {
            const auto& r = c.at("radius");
            const auto nbhd = r.is_null() ? convergence::Neighborhood::ball(q.gamma)
                                          : convergence::Neighborhood::ball(get_double(c, "radius"));
            verdict = convergence::neighborhood_test(q, nbhd);
        } else {
            throw ConfigError("unknown tester '" + tester + "'");
        }
    }
    if (!inv.dump_windows.empty()) io::write_file_atomic(inv.dump_windows, io::format_windows_csv(verdict, summation));
    emit(render(envelope("converge", config, to_json(verdict))), inv.output, out);
    return kExitOk;
}

int cmd_verify(const Json& config, const Invocation& inv, std::ostream& out, std::ostream& err) {
    const auto& v = config.at("verify");
    const bool converse = get_bool(v, "converse");
    const auto jobs = static_cast<int>(get_int(config, "jobs"));
    if (jobs < 1) throw ConfigError("jobs must be >= 1");

    std::vector<lab::TheoremId> ids;
    if (get_string(v, "theorem") == "all") {
        ids = lab::all_theorems();
    } else {
        ids.push_back(lab::theorem_from_string(get_string(v, "theorem")));
    }
    Json reports = Json::array();
    std::int64_t counterexamples = 0;
    for (auto id : ids) {
        Json single = config;
        single["verify"]["theorem"] = std::string(lab::to_string(id));
        const auto theorem = build_theorem_case(single);
        const auto report = converse ? lab::converse_probe(theorem, jobs) : lab::verify_theorem(theorem, jobs);
        counterexamples += report.totals.counterexamples;
        err << report.summary() << "\n";
        reports.push_back(to_json(report));
    }
    Json result = {{"counterexamples", counterexamples}, {"reports", std::move(reports)}};
    emit(render(envelope("verify", config, std::move(result))), inv.output, out);
    return counterexamples > 0 ? kExitFailure : kExitOk;
}

int cmd_gen(const Json& config, const Invocation& inv, std::ostream& out) {
    const auto& g = config.at("gen");
    const auto what = get_string(g, "what");
    const auto horizon = horizon_of(config);
    const auto seed = seed_of(config);
    if (what == "sequence") {
        emit(io::format_sequence_csv(build_sequence(config.at("sequence"), seed, horizon)), inv.output, out);
        return kExitOk;
    }
    Json result;
    if (what == "pair") {
        const auto pair = gen::gen_lambda_mu_pair(
            build_regime(g.at("regime"), get_double(g, "alpha"), get_double(g, "beta")), horizon);
        result = {{"regime", gen::regime_name(pair.regime)},
                  {"lambda", pair.lambda.describe()},
                  {"mu", pair.mu.describe()},
                  {"alpha", pair.alpha},
                  {"beta", pair.beta},
                  {"certificate", to_json(pair.certificate)}};
    } else if (what == "theta_pair") {
        const auto pair = gen::gen_theta_pair(get_int(g, "base"), horizon);
        result = {{"theta", pair.theta.boundaries()},
                  {"refined", pair.refined.boundaries()},
                  {"is_refinement", lacunary::is_refinement(pair.refined, pair.theta)}};
    } else if (what == "corpus") {
        const auto count = g.contains("count") ? get_int(g, "count") : 10;
        Json items = Json::array();
        for (std::int64_t i = 0; i < count; ++i) {
            items.push_back(gen::describe(gen::corpus_instance(seed, static_cast<std::uint64_t>(i), horizon)));
        }
        result = {{"instances", std::move(items)}};
    } else {
        throw ConfigError("gen.what must be sequence, pair, theta_pair or corpus");
    }
    emit(render(envelope("gen", config, std::move(result))), inv.output, out);
    return kExitOk;
}

int dispatch(const std::string& command, const Json& config, const Invocation& inv, std::ostream& out,
             std::ostream& err) {
    if (command == "norm") return cmd_norm(config, inv, out);
    if (command == "conjugate") return cmd_conjugate(config, inv, out);
    if (command == "density") return cmd_density(config, inv, out);
    if (command == "converge") return cmd_converge(config, inv, out);
    if (command == "verify") return cmd_verify(config, inv, out, err);
    return cmd_gen(config, inv, out);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"summakit: Orlicz norms, lacunary and ideal convergence testers, inclusion checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", toolkit_version());

    std::map<std::string, Invocation> invocations;
    std::map<std::string, CLI::App*> subcommands;
    for (const auto& [name, flags] : command_flags()) {
        auto* sub = app.add_subcommand(name, command_help(name));
        auto& inv = invocations[name];
        sub->add_option("--config", inv.config_path, "JSON config file");
        sub->add_option("--output,-o", inv.output, "Write the report here instead of stdout");
        sub->add_option("--set", inv.sets, "Override any config value: key.path=value");
        auto add_value = [sub, &inv](const std::string& flag, const std::string& path) {
            sub->add_option_function<std::string>(
                flag, [&inv, flag](const std::string& v) { inv.values[flag] = v; }, "Sets " + path);
        };
        for (const auto& [flag, path] : common_flags()) add_value(flag, path);
        for (const auto& [flag, path] : flags) add_value(flag, path);
        if (name == "converge") sub->add_option("--dump-windows", inv.dump_windows, "CSV dump of per-window statistics");
        if (name == "verify") {
            sub->add_flag("--negative-control", inv.negative_control, "Swap the inclusion on crafted instances");
            sub->add_flag("--converse", inv.converse, "Search for strictness witnesses instead");
        }
        subcommands[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    for (const auto& [name, sub] : subcommands) {
        if (!sub->parsed()) continue;
        try {
            const auto config = effective_config(name, invocations[name]);
            return dispatch(name, config, invocations[name], out, err);
        } catch (const Error& e) {
            err << "summakit " << name << ": " << e.what() << "\n";
            return e.category() == Error::Category::Numeric ? kExitFailure : kExitInvalid;
        } catch (const nlohmann::json::exception& e) {
            err << "summakit " << name << ": config: " << e.what() << "\n";
            return kExitInvalid;
        } catch (const std::exception& e) {
            err << "summakit " << name << ": " << e.what() << "\n";
            return kExitFailure;
        }
    }
    return kExitInvalid;
}

}  // namespace summakit::cli
