#include "summakit/sequence_gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "summakit/errors.hpp"
#include "summakit/random.hpp"

namespace summakit::gen {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Streams of the counter generator, one per use.
constexpr std::uint64_t kBernoulliStream = 1;
constexpr std::uint64_t kBoundedStream = 2;
constexpr std::uint64_t kCorpusStream = 3;

bool is_square(std::int64_t j) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(j)));
    while (r * r > j) --r;
    while ((r + 1) * (r + 1) <= j) ++r;
    return r * r == j;
}

bool is_cube(std::int64_t j) {
    auto r = static_cast<std::int64_t>(std::cbrt(static_cast<double>(j)));
    while (r * r * r > j) --r;
    while ((r + 1) * (r + 1) * (r + 1) <= j) ++r;
    return r * r * r == j;
}

std::string number(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

void check_exponents(double alpha, double beta) {
    if (!(alpha > 0.0) || !(alpha <= beta) || !(beta <= 1.0)) {
        throw ConfigError("window exponents need 0 < alpha <= beta <= 1 (got alpha=" + number(alpha) +
                          ", beta=" + number(beta) + ")");
    }
}

}  // namespace

bool Support::contains(std::int64_t j, std::uint64_t seed) const {
    switch (kind) {
        case Kind::Squares:
            return is_square(j);
        case Kind::Cubes:
            return is_cube(j);
        case Kind::PowersOfTwo:
            return (j & (j - 1)) == 0;
        case Kind::Evens:
            return j % 2 == 0;
        case Kind::Odds:
            return j % 2 == 1;
        case Kind::Multiples:
            return j % static_cast<std::int64_t>(parameter) == 0;
        case Kind::Bernoulli:
            return CounterRng(seed, kBernoulliStream).uniform(static_cast<std::uint64_t>(j)) < parameter;
        case Kind::Prefix:
            return j <= static_cast<std::int64_t>(parameter);
        case Kind::All:
            return true;
        case Kind::None:
            break;
    }
    return false;
}

std::string Support::describe() const {
    switch (kind) {
        case Kind::Squares:
            return "squares";
        case Kind::Cubes:
            return "cubes";
        case Kind::PowersOfTwo:
            return "powers_of_two";
        case Kind::Evens:
            return "evens";
        case Kind::Odds:
            return "odds";
        case Kind::Multiples:
            return "multiples(" + number(parameter) + ")";
        case Kind::Bernoulli:
            return "bernoulli(" + number(parameter) + ")";
        case Kind::Prefix:
            return "prefix(" + number(parameter) + ")";
        case Kind::All:
            return "all";
        case Kind::None:
            break;
    }
    return "none";
}

Support support_from_string(const std::string& text) {
    using K = Support::Kind;
    const auto open = text.find('(');
    const std::string name = text.substr(0, open);
    std::optional<double> arg;
    if (open != std::string::npos) {
        const auto close = text.find(')', open);
        if (close == std::string::npos || close + 1 != text.size()) {
            throw ConfigError("malformed support '" + text + "'");
        }
        try {
            std::size_t used = 0;
            const std::string inner = text.substr(open + 1, close - open - 1);
            arg = std::stod(inner, &used);
            if (used != inner.size()) throw std::invalid_argument(inner);
        } catch (const std::logic_error&) {
            throw ConfigError("malformed support argument in '" + text + "'");
        }
    }
    auto plain = [&](K kind) {
        if (arg) throw ConfigError("support '" + name + "' takes no argument");
        return Support{kind, 0.0};
    };
    auto with_arg = [&](K kind) {
        if (!arg) throw ConfigError("support '" + name + "' needs an argument");
        Support s{kind, *arg};
        if (kind == K::Multiples && (*arg < 1.0 || std::floor(*arg) != *arg)) {
            throw ConfigError("multiples(k) needs a positive integer k");
        }
        if (kind == K::Bernoulli && !(*arg >= 0.0 && *arg <= 1.0)) {
            throw ConfigError("bernoulli(p) needs 0 <= p <= 1");
        }
        if (kind == K::Prefix && !(*arg >= 0.0)) throw ConfigError("prefix(n) needs n >= 0");
        return s;
    };
    if (name == "squares") return plain(K::Squares);
    if (name == "cubes") return plain(K::Cubes);
    if (name == "powers_of_two") return plain(K::PowersOfTwo);
    if (name == "evens") return plain(K::Evens);
    if (name == "odds") return plain(K::Odds);
    if (name == "all") return plain(K::All);
    if (name == "none") return plain(K::None);
    if (name == "multiples") return with_arg(K::Multiples);
    if (name == "bernoulli") return with_arg(K::Bernoulli);
    if (name == "prefix") return with_arg(K::Prefix);
    throw ConfigError("unknown support '" + text + "'");
}

std::string describe(const GeneratorSpec& spec) {
    std::ostringstream out;
    std::visit(Overloaded{
                   [&](const SpikeOnSet& k) {
                       out << "spike(" << k.support.describe() << ", spike=" << k.spike << ", base=" << k.base << ")";
                   },
                   [&](const Oscillating& k) { out << "oscillating(period=" << k.period << ")"; },
                   [&](const ConvergentPlusNoise& k) {
                       out << "convergent(limit=" << k.limit << ", amplitude=" << k.amplitude << ", power=" << k.power
                           << ")";
                   },
                   [&](const BoundedRandom& k) { out << "bounded_random(bound=" << k.bound << ")"; },
                   [&](const Custom& k) { out << "custom(" << k.values.size() << " values)"; },
               },
               spec.kind);
    out << " seed=" << spec.seed << " horizon=" << spec.horizon;
    return out.str();
}

orlicz::SequencePrefix gen_sequence(const GeneratorSpec& spec) {
    if (spec.horizon < 1) throw ConfigError("generator horizon must be >= 1");
    const auto n = static_cast<std::size_t>(spec.horizon);
    std::vector<double> values(n);
    std::visit(Overloaded{
                   [&](const SpikeOnSet& k) {
                       for (std::size_t i = 0; i < n; ++i) {
                           const auto j = static_cast<std::int64_t>(i + 1);
                           values[i] = k.support.contains(j, spec.seed) ? k.spike : k.base;
                       }
                   },
                   [&](const Oscillating& k) {
                       if (k.period < 2) throw ConfigError("oscillating period must be >= 2");
                       for (std::size_t i = 0; i < n; ++i) {
                           values[i] = static_cast<std::int64_t>(i) % k.period < k.period / 2 ? -1.0 : 1.0;
                       }
                   },
                   [&](const ConvergentPlusNoise& k) {
                       if (!(k.power > 0.0)) throw ConfigError("noise decay power must be positive");
                       for (std::size_t i = 0; i < n; ++i) {
                           values[i] = k.limit + k.amplitude * std::pow(static_cast<double>(i + 1), -k.power);
                       }
                   },
                   [&](const BoundedRandom& k) {
                       if (!(k.bound >= 0.0)) throw ConfigError("random bound must be non-negative");
                       const CounterRng rng(spec.seed, kBoundedStream);
                       for (std::size_t i = 0; i < n; ++i) values[i] = k.bound * (2.0 * rng.uniform(i + 1) - 1.0);
                   },
                   [&](const Custom& k) {
                       if (k.values.size() < n) {
                           throw ConfigError("custom sequence has " + std::to_string(k.values.size()) +
                                             " values, horizon " + std::to_string(spec.horizon));
                       }
                       std::copy_n(k.values.begin(), n, values.begin());
                   },
               },
               spec.kind);
    return orlicz::SequencePrefix(std::move(values));
}

std::string regime_name(const Regime& regime) {
    return std::visit(Overloaded{
                          [](const LiminfPositive&) { return std::string("liminf_positive"); },
                          [](const LimRatioOne&) { return std::string("lim_ratio_one"); },
                          [](const ViolatingLiminf&) { return std::string("violating_liminf"); },
                          [](const ExplicitPair&) { return std::string("explicit"); },
                      },
                      regime);
}

PairCertificate certify_pair(const WindowLengthRule& lambda, const WindowLengthRule& mu, double alpha, double beta,
                             const Regime& regime, std::int64_t horizon, std::int64_t first, std::int64_t last) {
    PairCertificate c;
    c.first = first;
    c.last = last;
    if (first < 1 || last > horizon || first > last) {
        c.detail = "certificate range outside 1..horizon";
        return c;
    }
    std::vector<std::int64_t> l;
    std::vector<std::int64_t> m;
    try {
        l = lambda.realize(horizon);
        m = mu.realize(horizon);
    } catch (const ValidationError& e) {
        c.detail = e.what();
        return c;
    }
    c.windows_ok = true;
    for (std::int64_t i = 1; i <= horizon; ++i) {
        if (l[static_cast<std::size_t>(i - 1)] > m[static_cast<std::size_t>(i - 1)]) {
            c.windows_ok = false;
            c.detail = "lambda_" + std::to_string(i) + " > mu_" + std::to_string(i);
            return c;
        }
    }
    c.min_ratio = std::numeric_limits<double>::infinity();
    const std::int64_t late = first + (last - first + 1) / 2;
    for (std::int64_t i = first; i <= last; ++i) {
        const auto li = static_cast<double>(l[static_cast<std::size_t>(i - 1)]);
        const auto mi = static_cast<double>(m[static_cast<std::size_t>(i - 1)]);
        const double mb = std::pow(mi, beta);
        c.min_ratio = std::min(c.min_ratio, std::pow(li, alpha) / mb);
        c.max_excess = std::max(c.max_excess, (mi - li) / mb);
        c.max_lambda_ratio = std::max(c.max_lambda_ratio, li / mb);
        const double envelope = std::fabs(mi / std::pow(li, beta) - 1.0);
        c.ratio_envelope = std::max(c.ratio_envelope, envelope);
        if (i >= late) c.ratio_envelope_late = std::max(c.ratio_envelope_late, envelope);
    }

    std::visit(Overloaded{
                   [&](const LiminfPositive& r) {
                       if (r.alpha == r.beta) {
                           c.declared = std::pow(static_cast<double>(r.k), -r.alpha) - 1.0 / static_cast<double>(horizon);
                       } else {
                           const auto cap = static_cast<double>(r.cap);
                           c.declared = std::pow(cap, r.alpha) / std::pow(2.0 * cap, r.beta) * (1.0 - 1e-9);
                       }
                       c.passed = c.declared > 0.0 && c.min_ratio >= c.declared;
                       if (!c.passed) c.detail = "tail min ratio " + number(c.min_ratio) + " below " + number(c.declared);
                   },
                   [&](const LimRatioOne&) {
                       c.declared = 2.0 / std::sqrt(static_cast<double>(first));
                       c.passed = c.ratio_envelope <= c.declared && c.ratio_envelope_late <= c.ratio_envelope;
                       if (!c.passed) {
                           c.detail = "ratio envelope " + number(c.ratio_envelope) + " exceeds " + number(c.declared);
                       }
                   },
                   [&](const ViolatingLiminf& r) {
                       c.declared = 2.0 * std::pow(static_cast<double>(first), r.alpha / 2.0 - r.beta);
                       c.passed = c.min_ratio <= c.declared;
                       if (!c.passed) c.detail = "tail min ratio " + number(c.min_ratio) + " not small";
                   },
                   [&](const ExplicitPair&) { c.passed = true; },
               },
               regime);
    return c;
}

LambdaMuPair gen_lambda_mu_pair(const Regime& regime, std::int64_t horizon,
                                std::optional<std::pair<std::int64_t, std::int64_t>> range) {
    if (horizon < 2) throw ConfigError("pair horizon must be >= 2");
    LambdaMuPair pair;
    pair.regime = regime;
    std::visit(Overloaded{
                   [&](const LiminfPositive& r) {
                       check_exponents(r.alpha, r.beta);
                       pair.alpha = r.alpha;
                       pair.beta = r.beta;
                       if (r.alpha == r.beta) {
                           if (r.k < 1) throw ConfigError("liminf_positive needs k >= 1");
                           pair.lambda = WindowLengthRule::ceil_div(r.k);
                           pair.mu = WindowLengthRule::identity();
                       } else {
                           if (r.cap < 1) throw ConfigError("liminf_positive needs cap >= 1");
                           pair.lambda = WindowLengthRule::capped(r.cap);
                           pair.mu = WindowLengthRule::capped(2 * r.cap);
                       }
                   },
                   [&](const LimRatioOne& r) {
                       check_exponents(r.alpha, r.beta);
                       pair.alpha = r.alpha;
                       pair.beta = r.beta;
                       if (r.beta == 1.0) {
                           pair.lambda = WindowLengthRule::minus_sqrt();
                           pair.mu = WindowLengthRule::identity();
                       } else {
                           // mu <= i forces mu ~ lambda^beta <= lambda, so only constant 1 fits.
                           pair.lambda = WindowLengthRule::capped(1);
                           pair.mu = WindowLengthRule::capped(1);
                       }
                   },
                   [&](const ViolatingLiminf& r) {
                       check_exponents(r.alpha, r.beta);
                       pair.alpha = r.alpha;
                       pair.beta = r.beta;
                       pair.lambda = WindowLengthRule::ceil_sqrt();
                       pair.mu = WindowLengthRule::identity();
                   },
                   [&](const ExplicitPair& r) {
                       check_exponents(r.alpha, r.beta);
                       pair.alpha = r.alpha;
                       pair.beta = r.beta;
                       pair.lambda = r.lambda;
                       pair.mu = r.mu;
                   },
               },
               regime);
    const auto [first, last] = range.value_or(std::pair{horizon / 2 + 1, horizon});
    pair.certificate = certify_pair(pair.lambda, pair.mu, pair.alpha, pair.beta, regime, horizon, first, last);
    return pair;
}

ThetaPair gen_theta_pair(std::int64_t base, std::int64_t horizon) {
    if (base < 2 || horizon < base) throw ConfigError("theta pair needs base >= 2 and horizon >= base");
    std::int64_t count = 1;
    std::int64_t end = base;
    while (end < horizon) {
        end *= base;
        ++count;
    }
    auto theta = lacunary::LacunaryTheta::geometric(base, count);
    auto refined = lacunary::refine_midpoints(theta);
    return {std::move(theta), std::move(refined)};
}

GeneratorSpec corpus_instance(std::uint64_t seed, std::uint64_t index, std::int64_t horizon) {
    const CounterRng rng(seed, kCorpusStream + 8 * index);
    std::uint64_t k = 0;
    GeneratorSpec spec;
    spec.seed = rng.bits(k++);
    spec.horizon = horizon;
    const auto spike = 0.5 + 2.5 * rng.uniform(k++);
    using K = Support::Kind;
    switch (rng.integer(k++, 0, 5)) {
        case 0: {
            const K sparse[] = {K::Squares, K::Cubes, K::PowersOfTwo};
            spec.kind = SpikeOnSet{{sparse[rng.integer(k++, 0, 2)], 0.0}, spike, 0.0};
            break;
        }
        case 1:
            spec.kind = SpikeOnSet{{K::Bernoulli, 0.0002 + 0.004 * rng.uniform(k++)}, spike, 0.0};
            break;
        case 2: {
            switch (rng.integer(k++, 0, 3)) {
                case 0:
                    spec.kind = SpikeOnSet{{K::Evens, 0.0}, spike, 0.0};
                    break;
                case 1:
                    spec.kind = SpikeOnSet{{K::Multiples, static_cast<double>(rng.integer(k++, 2, 6))}, spike, 0.0};
                    break;
                case 2:
                    spec.kind = SpikeOnSet{{K::Bernoulli, 0.1 + 0.6 * rng.uniform(k++)}, spike, 0.0};
                    break;
                default:
                    spec.kind = SpikeOnSet{{K::Prefix, static_cast<double>(rng.integer(k++, 1, horizon))}, spike, 0.0};
                    break;
            }
            break;
        }
        case 3: {
            const std::int64_t periods[] = {2, 3, 4, 6, 10};
            spec.kind = Oscillating{periods[rng.integer(k++, 0, 4)]};
            break;
        }
        case 4:
            spec.kind = ConvergentPlusNoise{2.0 * rng.uniform(k) - 1.0, 0.1 + 1.9 * rng.uniform(k + 1),
                                            0.2 + 1.8 * rng.uniform(k + 2)};
            k += 3;
            break;
        default:
            spec.kind = BoundedRandom{0.05 + 1.95 * rng.uniform(k++)};
            break;
    }
    return spec;
}

}  // namespace summakit::gen
