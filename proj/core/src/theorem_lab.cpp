#include "summakit/theorem_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "summakit/errors.hpp"
#include "summakit/random.hpp"

namespace summakit::lab {

namespace {

using convergence::ConvergenceQuery;
using convergence::LambdaWindows;
using convergence::WindowLengthRule;
using ideals::VerdictState;

enum class Tester { S, W, N };
enum class Side { Lambda, Mu };

struct Shape {
    Tester ante;
    Side ante_side;
    Tester cons;
    Side cons_side;
    bool liminf_regime;  // otherwise the ratio-one regime
    bool plain_w;        // w spaces without the ideal: Finite on the witness set
    const char* statement;
};

Shape shape_of(TheoremId id) {
    switch (id) {
        case TheoremId::T1:
            return {Tester::S, Side::Mu, Tester::S, Side::Lambda, true, false, "S[mu,beta] subset S[lambda,alpha]"};
        case TheoremId::T2:
            return {Tester::S, Side::Lambda, Tester::S, Side::Mu, false, false, "S[lambda,alpha] subset S[mu,beta]"};
        case TheoremId::T3a:
            return {Tester::W, Side::Mu, Tester::W, Side::Lambda, true, true, "w[mu,beta] subset w[lambda,alpha]"};
        case TheoremId::T3b:
            return {Tester::W, Side::Lambda, Tester::W, Side::Mu, false, true,
                    "bounded w[lambda,alpha] subset w[mu,beta]"};
        case TheoremId::T4:
            return {Tester::W, Side::Mu, Tester::S, Side::Lambda, true, false, "wI[mu,beta] subset S[lambda,alpha]"};
        case TheoremId::T5:
            return {Tester::S, Side::Lambda, Tester::W, Side::Mu, false, false,
                    "bounded S[lambda,alpha](theta) subset wI[mu,beta](theta!)"};
        case TheoremId::T6:
            return {Tester::N, Side::Mu, Tester::N, Side::Lambda, true, false,
                    "S[mu,beta](X) subset S[lambda,alpha](X)"};
        case TheoremId::T7:
            return {Tester::N, Side::Lambda, Tester::N, Side::Mu, false, false,
                    "S[lambda,alpha](X) subset S[mu,beta](X)"};
        case TheoremId::C1:
            break;
    }
    return {Tester::W, Side::Mu, Tester::S, Side::Lambda, true, false,
            "pointwise convergent family: wI[mu,beta](theta!) subset S[lambda,alpha](theta)"};
}

std::string tester_name(Tester t) {
    switch (t) {
        case Tester::S:
            return "slambda";
        case Tester::W:
            return "wlambda";
        case Tester::N:
            break;
    }
    return "neighborhood";
}

std::string number(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

// Thresholds handed to the antecedent are shrunk by this factor so that the
// rounding of lambda^alpha and mu^beta cannot turn a transferred inclusion
// into a spurious counterexample.
constexpr double kShrink = 1.0 - 1e-9;

struct Plan {
    TheoremCase config;
    Shape shape;
    std::string mode;
    gen::LambdaMuPair pair;
    orlicz::MusielakFamily family = orlicz::MusielakFamily::uniform(orlicz::OrliczSpec::identity());
    ideals::IdealOracle s_ideal = ideals::IdealOracle::finite(10);
    ideals::IdealOracle w_ideal = ideals::IdealOracle::finite(10);
    lacunary::LacunaryTheta theta = lacunary::LacunaryTheta::geometric(2, 1);
};

void check_thresholds(const TheoremCase& c) {
    if (!(c.gamma > 0.0) || !(c.xi > 0.0) || !(c.gamma_w > 0.0)) {
        throw ConfigError("lab thresholds gamma, xi, gamma_w must be positive");
    }
    if (c.instances < 0) throw ConfigError("instance count must be non-negative");
    if (c.horizon < 20) throw ConfigError("lab horizon must be >= 20");
}

Plan make_plan(const TheoremCase& theorem, std::string mode) {
    check_thresholds(theorem);
    Plan plan;
    plan.config = theorem;
    plan.shape = shape_of(theorem.id);
    plan.mode = std::move(mode);
    const auto h = theorem.horizon;

    if (theorem.family) {
        plan.family = *theorem.family;
    } else if (theorem.id == TheoremId::C1) {
        plan.family = orlicz::MusielakFamily::power_ramp(2.0, 1.0);
    }
    const auto family_report = plan.family.validate_sample(std::min<std::int64_t>(h, 64));
    if (!family_report.ok()) throw CertificateError("family fails validation: " + family_report.failures());

    plan.s_ideal = ideals::IdealOracle(theorem.ideal, h);
    plan.w_ideal = plan.shape.plain_w ? ideals::IdealOracle::finite(h) : plan.s_ideal;

    if (plan.mode == "negative_control") {
        plan.pair = gen::gen_lambda_mu_pair(
            gen::ExplicitPair{WindowLengthRule::ceil_div(2), WindowLengthRule::identity(), 1.0, 1.0}, h);
        // Roles swapped: the consequent's tester now reads the short windows.
        std::swap(plan.shape.ante, plan.shape.cons);
        plan.shape.ante_side = Side::Lambda;
        plan.shape.cons_side = Side::Mu;
        return plan;
    }

    const auto regime = theorem.regime.value_or(default_regime(theorem.id, theorem.alpha, theorem.beta));
    if (plan.mode == "forward" && std::holds_alternative<gen::ViolatingLiminf>(regime)) {
        throw CertificateError(std::string(to_string(theorem.id)) +
                               " hypothesis certificate failed: the violating_liminf regime breaks the window condition");
    }
    const auto range = (plan.shape.cons == Tester::W ? plan.w_ideal : plan.s_ideal).inspected_range();
    const auto range_a = (plan.shape.ante == Tester::W ? plan.w_ideal : plan.s_ideal).inspected_range();
    const std::pair<std::int64_t, std::int64_t> covered{std::min(range.first, range_a.first),
                                                        std::max(range.second, range_a.second)};
    plan.pair = gen::gen_lambda_mu_pair(regime, h, covered);
    const auto& cert = plan.pair.certificate;
    if (!cert.windows_ok || !cert.passed) {
        throw CertificateError(std::string(to_string(theorem.id)) + " hypothesis certificate failed: " + cert.detail);
    }
    if (plan.shape.liminf_regime && !(cert.min_ratio > 0.0)) {
        throw CertificateError("liminf ratio certificate is not positive");
    }
    if (!plan.shape.liminf_regime && cert.ratio_envelope_late > cert.ratio_envelope) {
        throw CertificateError("ratio envelope does not shrink over the tail");
    }
    if (theorem.id == TheoremId::T2 || theorem.id == TheoremId::T7) {
        if (!(theorem.xi > cert.max_excess)) {
            throw CertificateError("xi " + number(theorem.xi) + " does not exceed the window excess " +
                                   number(cert.max_excess));
        }
    }
    if (theorem.id == TheoremId::T5 || theorem.id == TheoremId::C1) {
        auto generated = gen::gen_theta_pair(2, h);
        plan.theta = theorem.theta.value_or(generated.theta);
        const auto refined = theorem.refined.value_or(theorem.theta ? lacunary::refine_midpoints(*theorem.theta)
                                                                    : generated.refined);
        if (!lacunary::is_refinement(refined, plan.theta)) {
            throw CertificateError("theta! is not a refinement of theta");
        }
    }
    if (theorem.id == TheoremId::C1) {
        // lim_i M_i(nu / rho_i) > 0 for nu = 1, read at the horizon.
        const double limit_value = plan.family.term(h, 1.0);
        if (!(limit_value > 0.0)) throw CertificateError("family vanishes at the horizon for nu = 1");
    }
    return plan;
}

struct Thresholds {
    double ante_gamma;
    double ante_xi;
    double cons_gamma;
    double cons_xi;
};

Thresholds transfer(const Plan& plan, const InstanceCertificate& cert, bool same) {
    const auto& c = plan.config;
    const double b = cert.min_ratio;
    const double e = cert.max_excess;
    const double m = cert.term_bound;
    auto gamma_of = [&](Tester t) { return t == Tester::W ? c.gamma_w : c.gamma; };
    Thresholds t{gamma_of(plan.shape.ante), plan.shape.ante == Tester::W ? 1.0 : c.xi, gamma_of(plan.shape.cons),
                 plan.shape.cons == Tester::W ? 1.0 : c.xi};
    if (same) return t;
    switch (c.id) {
        case TheoremId::T1:
        case TheoremId::T6:
            // c_lambda <= c_mu, so D_lambda >= xi gives D_mu >= b xi.
            t.ante_xi = b * c.xi * kShrink;
            break;
        case TheoremId::T2:
        case TheoremId::T7:
            // c_mu <= c_lambda + (mu - lambda) and lambda^alpha <= mu^beta.
            t.ante_xi = (c.xi - e) * kShrink;
            break;
        case TheoremId::T3a:
            t.ante_gamma = b * c.gamma_w * kShrink;
            break;
        case TheoremId::T3b:
            if (!(c.gamma_w > e * m)) {
                throw CertificateError("gamma_w " + number(c.gamma_w) + " does not exceed excess * term bound " +
                                       number(e * m));
            }
            t.ante_gamma = (c.gamma_w - e * m) * kShrink;
            break;
        case TheoremId::T4:
        case TheoremId::C1:
            // S_mu >= gamma c_lambda / mu^beta >= gamma b D_lambda.
            t.ante_gamma = c.gamma * b * c.xi * kShrink;
            break;
        case TheoremId::T5: {
            // S_mu <= e M + M D_lambda + gamma_s r with r = max lambda / mu^beta.
            if (!(2.0 * e * m < c.gamma_w)) {
                throw CertificateError("excess * term bound " + number(e * m) + " is not below gamma_w / 2");
            }
            const double r = std::max(plan.pair.certificate.max_lambda_ratio, 1e-300);
            t.ante_gamma = c.gamma_w / (4.0 * r) * kShrink;
            t.ante_xi = m > 0.0 ? c.gamma_w / (4.0 * m) * kShrink : 1.0;
            break;
        }
    }
    if (!(t.ante_gamma > 0.0) || !(t.ante_xi > 0.0)) {
        throw CertificateError("transferred antecedent threshold is not positive");
    }
    return t;
}

SideResult run_side(const Plan& plan, Tester tester, Side side, const orlicz::SequencePrefix& x, double target,
                    double gamma, double xi) {
    const bool mu = side == Side::Mu;
    ConvergenceQuery q{x,
                       target,
                       plan.family,
                       LambdaWindows{mu ? plan.pair.mu : plan.pair.lambda, mu ? plan.pair.beta : plan.pair.alpha},
                       tester == Tester::W ? plan.w_ideal : plan.s_ideal,
                       gamma,
                       xi,
                       convergence::Reading::Canonical,
                       std::nullopt};
    convergence::ConvergenceVerdict v;
    switch (tester) {
        case Tester::S:
            v = convergence::slambda_alpha_test(q);
            break;
        case Tester::W:
            v = convergence::wlambda_alpha_test(q);
            break;
        case Tester::N: {
            // Closed interval [-gamma, gamma]: a term escapes when it exceeds gamma.
            const auto nbhd = convergence::Neighborhood::custom(
                [gamma](double t) { return std::fabs(t) <= gamma; }, "[-" + number(gamma) + ", " + number(gamma) + "]");
            v = convergence::neighborhood_test(q, nbhd);
            break;
        }
    }
    SideResult r;
    r.tester = tester_name(tester);
    r.windows = (mu ? "mu=" + plan.pair.mu.describe() + ",beta=" + number(plan.pair.beta)
                    : "lambda=" + plan.pair.lambda.describe() + ",alpha=" + number(plan.pair.alpha));
    r.state = v.state;
    r.statistic = v.ideal_verdict->statistic;
    r.tail_count = v.ideal_verdict->tail_count;
    r.tail_length = v.ideal_verdict->tail_length;
    return r;
}

struct InstanceData {
    gen::GeneratorSpec spec;
    double target = 0.0;
};

InstanceData instance_data(const Plan& plan, std::int64_t index) {
    const auto& c = plan.config;
    const auto idx = static_cast<std::uint64_t>(index);
    InstanceData d;
    if (plan.mode == "negative_control") {
        // A burst on [1, n] with h/5 <= n <= h/4: invisible to the half-length
        // windows over the tail, but a fifth of every full-length window.
        const CounterRng rng(c.seed, 0x4e43ULL + idx);
        const auto n = rng.integer(0, c.horizon / 5, c.horizon / 4);
        d.spec = gen::GeneratorSpec{gen::SpikeOnSet{{gen::Support::Kind::Prefix, static_cast<double>(n)},
                                                    1.5 + 1.5 * rng.uniform(1), 0.0},
                                    c.seed, c.horizon};
        d.target = 0.0;
        return d;
    }
    d.spec = gen::corpus_instance(c.seed, idx, c.horizon);
    const CounterRng rng(c.seed, 0x5a5aULL + idx);
    const double targets[] = {0.0, 0.0, 0.5, -1.0, 1.0};
    d.target = targets[rng.integer(0, 0, 4)];
    if (const auto* conv = std::get_if<gen::ConvergentPlusNoise>(&d.spec.kind)) {
        if (rng.uniform(1) < 0.5) d.target = conv->limit;
    }
    return d;
}

InstanceRecord evaluate(const Plan& plan, std::int64_t index) {
    const auto data = instance_data(plan, index);
    const auto x = gen::gen_sequence(data.spec);
    InstanceRecord rec;
    rec.id = index;
    rec.generator = gen::describe(data.spec);
    rec.target = data.target;

    auto& cert = rec.certificate;
    cert.min_ratio = plan.pair.certificate.min_ratio;
    cert.max_excess = plan.pair.certificate.max_excess;
    cert.sup_abs = x.sup_abs();
    const auto terms = convergence::modular_terms(x, data.target, plan.family);
    cert.term_bound = terms.empty() ? 0.0 : *std::max_element(terms.begin(), terms.end());
    if (plan.config.id == TheoremId::T3b || plan.config.id == TheoremId::T5) {
        if (!(cert.sup_abs <= gen::kCorpusBound)) {
            throw CertificateError("instance " + std::to_string(index) + " is not bounded by " +
                                   number(gen::kCorpusBound));
        }
    }

    const bool same = plan.mode != "forward";
    const auto t = transfer(plan, cert, same);
    cert.antecedent_gamma = t.ante_gamma;
    cert.antecedent_xi = t.ante_xi;
    cert.consequent_gamma = t.cons_gamma;
    cert.consequent_xi = t.cons_xi;

    rec.antecedent = run_side(plan, plan.shape.ante, plan.shape.ante_side, x, data.target, t.ante_gamma, t.ante_xi);
    rec.consequent = run_side(plan, plan.shape.cons, plan.shape.cons_side, x, data.target, t.cons_gamma, t.cons_xi);

    const auto a = rec.antecedent.state;
    const auto c = rec.consequent.state;
    if (a == VerdictState::Inconclusive || c == VerdictState::Inconclusive) {
        rec.classification = Classification::Inconclusive;
    } else if (plan.mode == "converse") {
        rec.classification =
            (c == VerdictState::In && a == VerdictState::Out) ? Classification::Strict : Classification::Consistent;
    } else {
        rec.classification = (a == VerdictState::In && c == VerdictState::Out) ? Classification::Counterexample
                                                                               : Classification::Consistent;
    }
    return rec;
}

LabReport run(const Plan& plan, int jobs) {
    LabReport report;
    report.config = plan.config;
    report.mode = plan.mode;
    report.statement = plan.shape.statement;
    if (plan.mode == "negative_control") report.statement = std::string("swapped: ") + report.statement;
    report.family = plan.family.description();
    report.ideal = plan.s_ideal.describe();
    report.lambda = plan.pair.lambda.describe();
    report.mu = plan.pair.mu.describe();
    report.pair_certificate = plan.pair.certificate;

    const auto n = plan.config.instances;
    report.records.resize(static_cast<std::size_t>(n));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (std::int64_t i = next++; i < n; i = next++) {
            try {
                report.records[static_cast<std::size_t>(i)] = evaluate(plan, i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    const int threads = std::clamp<int>(jobs, 1, static_cast<int>(std::max<std::int64_t>(n, 1)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    auto& totals = report.totals;
    totals.instances = n;
    for (const auto& r : report.records) {
        switch (r.classification) {
            case Classification::Consistent:
                ++totals.consistent;
                break;
            case Classification::Counterexample:
                ++totals.counterexamples;
                break;
            case Classification::Inconclusive:
                ++totals.inconclusive;
                break;
            case Classification::Strict:
                ++totals.strict;
                break;
        }
    }
    return report;
}

}  // namespace

std::string_view to_string(TheoremId id) noexcept {
    switch (id) {
        case TheoremId::T1:
            return "T1";
        case TheoremId::T2:
            return "T2";
        case TheoremId::T3a:
            return "T3a";
        case TheoremId::T3b:
            return "T3b";
        case TheoremId::T4:
            return "T4";
        case TheoremId::T5:
            return "T5";
        case TheoremId::T6:
            return "T6";
        case TheoremId::T7:
            return "T7";
        case TheoremId::C1:
            break;
    }
    return "C1";
}

TheoremId theorem_from_string(std::string_view text) {
    for (auto id : all_theorems()) {
        if (to_string(id) == text) return id;
    }
    throw ConfigError("unknown theorem '" + std::string(text) + "'");
}

const std::vector<TheoremId>& all_theorems() {
    static const std::vector<TheoremId> ids{TheoremId::T1, TheoremId::T2, TheoremId::T3a,
                                            TheoremId::T3b, TheoremId::T4, TheoremId::T5,
                                            TheoremId::T6, TheoremId::T7, TheoremId::C1};
    return ids;
}

gen::Regime default_regime(TheoremId id, double alpha, double beta) {
    if (shape_of(id).liminf_regime) return gen::LiminfPositive{alpha, beta, 2, 16};
    return gen::LimRatioOne{alpha, beta};
}

std::string_view to_string(Classification c) noexcept {
    switch (c) {
        case Classification::Consistent:
            return "consistent";
        case Classification::Counterexample:
            return "counterexample";
        case Classification::Inconclusive:
            return "inconclusive";
        case Classification::Strict:
            break;
    }
    return "strict";
}

std::string LabReport::summary() const {
    std::ostringstream out;
    out << to_string(config.id) << " [" << mode << "] " << statement << ": ";
    if (mode == "converse") {
        out << totals.strict << " strictness witnesses in " << totals.instances << " instances";
    } else {
        out << totals.counterexamples << " confident counterexamples in " << totals.instances << " instances";
    }
    out << " (" << totals.consistent << " consistent, " << totals.inconclusive << " inconclusive)";
    return out.str();
}

LabReport verify_theorem(const TheoremCase& theorem, int jobs) {
    return run(make_plan(theorem, theorem.negative_control ? "negative_control" : "forward"), jobs);
}

LabReport converse_probe(const TheoremCase& theorem, int jobs) {
    return run(make_plan(theorem, "converse"), jobs);
}

}  // namespace summakit::lab
