#include "summakit/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "summakit/errors.hpp"

namespace summakit::convergence {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::int64_t isqrt(std::int64_t n) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

double length_power(std::int64_t length, double alpha) {
    const auto l = static_cast<double>(length);
    return alpha == 1.0 ? l : std::pow(l, alpha);
}

// Smallest geometric(2) sequence whose last boundary reaches the horizon.
LacunaryTheta covering_theta(std::int64_t horizon) {
    std::int64_t count = 1;
    while ((std::int64_t{1} << count) < horizon) ++count;
    return LacunaryTheta::geometric(2, count);
}

// What makes a term (Canonical) or a block average (Literal) escape: either
// value >= threshold, decided exactly, or leaving a neighborhood.
struct Escape {
    std::optional<double> threshold;
    const Neighborhood* nbhd = nullptr;

    [[nodiscard]] bool term(double t) const { return threshold ? t >= *threshold : !nbhd->contains(t); }
    // sum / length >= threshold, or sum / length outside V.
    [[nodiscard]] bool average(const ExactAccumulator& sum, std::int64_t length) const {
        if (threshold) return sum.geq_product(*threshold, static_cast<double>(length));
        return !nbhd->contains(sum.to_double() / static_cast<double>(length));
    }
};

// Sum of t over [lo, hi], maintained by moving both ends.
class SlidingSum {
public:
    explicit SlidingSum(const std::vector<double>& terms) : terms_(terms) {}

    const ExactAccumulator& over(std::int64_t lo, std::int64_t hi) {
        if (lo > hi_ || hi < lo_) {
            acc_ = ExactAccumulator{};
            lo_ = lo;
            hi_ = lo - 1;
        }
        while (hi_ < hi) acc_.add(at(++hi_));
        while (hi_ > hi) acc_.subtract(at(hi_--));
        while (lo_ > lo) acc_.add(at(--lo_));
        while (lo_ < lo) acc_.subtract(at(lo_++));
        return acc_;
    }

private:
    [[nodiscard]] double at(std::int64_t j) const { return terms_[static_cast<std::size_t>(j - 1)]; }

    const std::vector<double>& terms_;
    ExactAccumulator acc_;
    std::int64_t lo_ = 1;
    std::int64_t hi_ = 0;
};

IdealOracle witness_ideal(const ConvergenceQuery& query, std::int64_t window_count) {
    if (std::holds_alternative<LacunaryBlocks>(query.scheme)) {
        return query.ideal.at_horizon(window_count);
    }
    return query.ideal;
}

ConvergenceVerdict finish(std::string tester, std::vector<WindowStat> windows, const IdealOracle& ideal) {
    ConvergenceVerdict verdict;
    verdict.tester = std::move(tester);
    verdict.witness = IndexSet(ideal.horizon());
    for (const auto& w : windows) {
        if (w.witness) verdict.witness.insert(w.index);
    }
    verdict.windows = std::move(windows);
    verdict.ideal_verdict = ideals::membership(ideal, verdict.witness);
    verdict.state = verdict.ideal_verdict->state;
    return verdict;
}

// Literal reading: A_i = (1/h_{r(i)}) sum_{I_i} t; the displayed inner count
// is i when A_i escapes and 0 otherwise, then compared with xi * lambda^alpha.
std::vector<WindowStat> literal_windows(const ConvergenceQuery& query, const std::vector<double>& terms,
                                        const Escape& escape) {
    const auto spans = windows_for(query.scheme, query.x.horizon());
    const double alpha = scheme_alpha(query.scheme);
    const bool blocks = std::holds_alternative<LacunaryBlocks>(query.scheme);
    const LacunaryTheta theta = query.theta ? *query.theta : covering_theta(query.x.horizon());
    SlidingSum sliding(terms);
    std::vector<WindowStat> out;
    out.reserve(spans.size());
    for (const auto& s : spans) {
        const std::int64_t h = blocks ? s.length : theta.block(theta.block_of(s.index)).h;
        const auto& sum = sliding.over(s.lo, s.hi);
        WindowStat w{s.index, s.lo, s.hi, s.length, 0, sum.to_double() / static_cast<double>(h), 0.0, false};
        if (escape.average(sum, h)) w.count = s.index;
        const double norm = length_power(s.length, alpha);
        w.statistic = static_cast<double>(w.count) / norm;
        w.witness = w.count > 0 && geq_product(static_cast<double>(w.count), query.xi, norm);
        out.push_back(w);
    }
    return out;
}

std::vector<WindowStat> count_windows(const ConvergenceQuery& query, const std::vector<double>& terms,
                                      const Escape& escape) {
    std::vector<std::int64_t> prefix(terms.size() + 1, 0);
    for (std::size_t k = 0; k < terms.size(); ++k) prefix[k + 1] = prefix[k] + (escape.term(terms[k]) ? 1 : 0);
    const double alpha = scheme_alpha(query.scheme);
    const auto spans = windows_for(query.scheme, query.x.horizon());
    std::vector<WindowStat> out;
    out.reserve(spans.size());
    for (const auto& s : spans) {
        WindowStat w;
        w.index = s.index;
        w.lo = s.lo;
        w.hi = s.hi;
        w.length = s.length;
        w.count = prefix[static_cast<std::size_t>(s.hi)] - prefix[static_cast<std::size_t>(s.lo - 1)];
        const double norm = length_power(s.length, alpha);
        w.statistic = static_cast<double>(w.count) / norm;
        w.witness = w.count > 0 && geq_product(static_cast<double>(w.count), query.xi, norm);
        out.push_back(w);
    }
    return out;
}

ConvergenceVerdict counting_test(const ConvergenceQuery& query, const Escape& escape, std::string tester) {
    validate_query(query);
    const auto terms = modular_terms(query.x, query.target, query.family);
    auto windows = query.reading == Reading::Canonical ? count_windows(query, terms, escape)
                                                       : literal_windows(query, terms, escape);
    const auto ideal = witness_ideal(query, static_cast<std::int64_t>(windows.size()));
    return finish(std::move(tester), std::move(windows), ideal);
}

}  // namespace

WindowLengthRule WindowLengthRule::ceil_div(std::int64_t k) {
    if (k < 1) throw ConfigError("ceil_div window rule needs k >= 1");
    return {Kind::CeilDiv, k, {}};
}

WindowLengthRule WindowLengthRule::capped(std::int64_t c) {
    if (c < 1) throw ConfigError("capped window rule needs c >= 1");
    return {Kind::Capped, c, {}};
}

WindowLengthRule WindowLengthRule::table(std::vector<std::int64_t> values) {
    if (values.empty()) throw ConfigError("window length table is empty");
    return {Kind::Table, 0, std::move(values)};
}

std::int64_t WindowLengthRule::operator()(std::int64_t i) const {
    if (i < 1) throw ConfigError("window index must be >= 1");
    switch (kind_) {
        case Kind::Identity:
            return i;
        case Kind::CeilDiv:
            return (i + parameter_ - 1) / parameter_;
        case Kind::Capped:
            return std::min(i, parameter_);
        case Kind::MinusSqrt:
            return std::max<std::int64_t>(1, i - isqrt(i));
        case Kind::CeilSqrt: {
            const auto r = isqrt(i);
            return r * r == i ? r : r + 1;
        }
        case Kind::Table:
            break;
    }
    if (i > static_cast<std::int64_t>(table_.size())) {
        throw ValidationError("window length table has " + std::to_string(table_.size()) + " entries, index " +
                              std::to_string(i) + " requested");
    }
    return table_[static_cast<std::size_t>(i - 1)];
}

std::vector<std::int64_t> WindowLengthRule::realize(std::int64_t horizon) const {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(horizon, 0)));
    for (std::int64_t i = 1; i <= horizon; ++i) {
        const auto l = (*this)(i);
        if (l < 1 || l > i) {
            throw ValidationError("lambda_" + std::to_string(i) + " = " + std::to_string(l) + " outside 1.." +
                                  std::to_string(i));
        }
        if (!out.empty() && l < out.back()) {
            throw ValidationError("lambda decreases at index " + std::to_string(i));
        }
        out.push_back(l);
    }
    return out;
}

std::string WindowLengthRule::describe() const {
    switch (kind_) {
        case Kind::Identity:
            return "identity";
        case Kind::CeilDiv:
            return "ceil_div(" + std::to_string(parameter_) + ")";
        case Kind::Capped:
            return "capped(" + std::to_string(parameter_) + ")";
        case Kind::MinusSqrt:
            return "minus_sqrt";
        case Kind::CeilSqrt:
            return "ceil_sqrt";
        case Kind::Table:
            break;
    }
    return "table(" + std::to_string(table_.size()) + ")";
}

double scheme_alpha(const WindowScheme& scheme) noexcept {
    return std::visit([](const auto& s) { return s.alpha; }, scheme);
}

std::vector<WindowSpan> windows_for(const WindowScheme& scheme, std::int64_t horizon) {
    std::vector<WindowSpan> out;
    std::visit(Overloaded{
                   [&](const LambdaWindows& s) {
                       const auto lambda = s.lengths.realize(horizon);
                       out.reserve(lambda.size());
                       for (std::int64_t i = 1; i <= horizon; ++i) {
                           const auto l = lambda[static_cast<std::size_t>(i - 1)];
                           out.push_back({i, i - l + 1, i, l});
                       }
                   },
                   [&](const LacunaryBlocks& s) {
                       for (const auto& b : s.theta.blocks()) {
                           if (b.hi > horizon) break;
                           out.push_back({b.r, b.lo + 1, b.hi, b.h});
                       }
                   },
               },
               scheme);
    return out;
}

std::string_view to_string(Reading reading) noexcept {
    return reading == Reading::Canonical ? "canonical" : "literal";
}

void validate_query(const ConvergenceQuery& query) {
    if (!(query.gamma > 0.0) || !std::isfinite(query.gamma)) throw ConfigError("gamma must be positive");
    if (!(query.xi > 0.0) || !std::isfinite(query.xi)) throw ConfigError("xi must be positive");
    if (!std::isfinite(query.target)) throw ConfigError("target must be finite");
    const double alpha = scheme_alpha(query.scheme);
    if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("alpha must lie in (0, 1]");
    const auto horizon = query.x.horizon();
    if (horizon < 1) throw ConfigError("sequence prefix is empty");
    if (query.ideal.horizon() != horizon) {
        throw ConfigError("ideal horizon " + std::to_string(query.ideal.horizon()) + " differs from sequence horizon " +
                          std::to_string(horizon));
    }
    if (const auto* s = std::get_if<LambdaWindows>(&query.scheme)) {
        (void)s->lengths.realize(horizon);
    } else {
        const auto& theta = std::get<LacunaryBlocks>(query.scheme).theta;
        if (theta.boundaries()[1] > horizon) {
            throw ConfigError("horizon " + std::to_string(horizon) + " is smaller than j_1 = " +
                              std::to_string(theta.boundaries()[1]));
        }
    }
    if (query.reading == Reading::Literal && query.theta && query.theta->end() < horizon) {
        throw ConfigError("literal reading needs theta to cover the horizon (j_R = " +
                          std::to_string(query.theta->end()) + ")");
    }
}

Rational natural_density_prefix(const std::function<bool(std::int64_t)>& indicator, std::int64_t n) {
    if (n < 1) throw ConfigError("natural density needs n >= 1");
    std::int64_t count = 0;
    for (std::int64_t j = 1; j <= n; ++j) {
        if (indicator(j)) ++count;
    }
    return {count, n};
}

std::vector<double> modular_terms(const SequencePrefix& x, double target, const MusielakFamily& family) {
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(x.horizon()));
    for (std::int64_t j = 1; j <= x.horizon(); ++j) terms.push_back(family.term(j, x.at(j) - target));
    return terms;
}

ConvergenceVerdict statistical_test(const SequencePrefix& x, double target, double eps, const IdealOracle& ideal) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be positive");
    if (ideal.horizon() != x.horizon()) {
        throw ConfigError("ideal horizon " + std::to_string(ideal.horizon()) + " differs from sequence horizon " +
                          std::to_string(x.horizon()));
    }
    ConvergenceVerdict verdict;
    verdict.tester = "statistical";
    verdict.witness = IndexSet::from_predicate(x.horizon(),
                                               [&](std::int64_t j) { return std::fabs(x.at(j) - target) >= eps; });
    verdict.ideal_verdict = ideals::membership(ideal, verdict.witness);
    verdict.state = verdict.ideal_verdict->state;
    return verdict;
}

ConvergenceVerdict ntheta_test(const SequencePrefix& x, double target, const LacunaryTheta& theta,
                               NThetaNormalization normalization, double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("ntheta tolerance must be positive");
    const auto horizon = x.horizon();
    if (theta.boundaries()[1] > horizon) {
        throw ConfigError("horizon " + std::to_string(horizon) + " is smaller than j_1 = " +
                          std::to_string(theta.boundaries()[1]));
    }
    ConvergenceVerdict verdict;
    verdict.tester = normalization == NThetaNormalization::ByH ? "ntheta(h)" : "ntheta(j)";
    std::vector<bool> small;
    std::vector<bool> large;
    for (const auto& b : theta.blocks()) {
        if (b.hi > horizon) break;
        ExactAccumulator sum;
        for (std::int64_t j = b.lo + 1; j <= b.hi; ++j) sum.add(std::fabs(x.at(j) - target));
        const auto norm = static_cast<double>(normalization == NThetaNormalization::ByH ? b.h : b.hi);
        WindowStat w;
        w.index = b.r;
        w.lo = b.lo + 1;
        w.hi = b.hi;
        w.length = b.h;
        w.sum = sum.to_double();
        w.statistic = w.sum / norm;
        w.witness = !sum.leq_product(tol, norm);
        small.push_back(!w.witness);
        large.push_back(sum.geq_product(10.0 * tol, norm));
        verdict.windows.push_back(w);
    }
    const auto blocks = static_cast<std::int64_t>(verdict.windows.size());
    verdict.witness = IndexSet(blocks);
    for (const auto& w : verdict.windows) {
        if (w.witness) verdict.witness.insert(w.index);
    }
    const auto first = blocks * 3 / 4;  // blocks r > floor(3R/4), as 0-based positions
    const bool all_small = std::all_of(small.begin() + first, small.end(), [](bool b) { return b; });
    const bool all_large = std::all_of(large.begin() + first, large.end(), [](bool b) { return b; });
    verdict.state = all_small ? VerdictState::In : all_large ? VerdictState::Out : VerdictState::Inconclusive;
    return verdict;
}

ConvergenceVerdict slambda_alpha_test(const ConvergenceQuery& query) {
    return counting_test(query, Escape{query.gamma, nullptr}, "slambda");
}

ConvergenceVerdict wlambda_alpha_test(const ConvergenceQuery& query) {
    validate_query(query);
    const auto terms = modular_terms(query.x, query.target, query.family);
    if (query.reading == Reading::Literal) {
        auto windows = literal_windows(query, terms, Escape{query.gamma, nullptr});
        const auto ideal = witness_ideal(query, static_cast<std::int64_t>(windows.size()));
        return finish("wlambda", std::move(windows), ideal);
    }
    const double alpha = scheme_alpha(query.scheme);
    const auto spans = windows_for(query.scheme, query.x.horizon());
    SlidingSum sliding(terms);
    std::vector<WindowStat> windows;
    windows.reserve(spans.size());
    for (const auto& s : spans) {
        const auto& sum = sliding.over(s.lo, s.hi);
        const double norm = length_power(s.length, alpha);
        WindowStat w;
        w.index = s.index;
        w.lo = s.lo;
        w.hi = s.hi;
        w.length = s.length;
        w.sum = sum.to_double();
        w.statistic = w.sum / norm;
        w.witness = sum.geq_product(query.gamma, norm);
        windows.push_back(w);
    }
    const auto ideal = witness_ideal(query, static_cast<std::int64_t>(windows.size()));
    return finish("wlambda", std::move(windows), ideal);
}

Neighborhood Neighborhood::ball(double radius) {
    if (!(radius > 0.0)) throw ValidationError("neighborhood radius must be positive");
    std::ostringstream description;
    description << "ball(" << radius << ")";
    return {[radius](double t) { return std::fabs(t) < radius; }, description.str(), radius};
}

Neighborhood Neighborhood::custom(std::function<bool(double)> contains, std::string description) {
    if (!contains) throw ValidationError("neighborhood predicate is empty");
    if (!contains(0.0)) throw ValidationError("neighborhood " + description + " does not contain 0");
    for (int k = 1; k <= 400; ++k) {
        const double t = std::ldexp(static_cast<double>(k % 40 + 1), k / 40 - 6);
        if (contains(t) != contains(-t)) {
            std::ostringstream msg;
            msg << "neighborhood " << description << " is not symmetric at " << t;
            throw ValidationError(msg.str());
        }
    }
    return {std::move(contains), std::move(description), std::nullopt};
}

Neighborhood Neighborhood::everything() {
    return {[](double) { return true; }, "everything", std::nullopt};
}

ConvergenceVerdict neighborhood_test(const ConvergenceQuery& query, const Neighborhood& nbhd) {
    Escape escape;
    if (nbhd.radius()) {
        escape.threshold = *nbhd.radius();
    } else {
        escape.nbhd = &nbhd;
    }
    return counting_test(query, escape, "neighborhood");
}

ConvergenceQuery specialize(int case_id, const ConvergenceQuery& base) {
    ConvergenceQuery q = base;
    const auto horizon = base.x.horizon();
    auto set_alpha_one = [&q] { std::visit([](auto& s) { s.alpha = 1.0; }, q.scheme); };
    switch (case_id) {
        case 1:
            q.family = MusielakFamily::uniform(base.family.at(1), base.family.rho(1));
            break;
        case 2:
            q.scheme = LambdaWindows{WindowLengthRule::identity(), scheme_alpha(base.scheme)};
            break;
        case 3:
            set_alpha_one();
            break;
        case 4:
            q.theta = covering_theta(std::max<std::int64_t>(horizon, 2));
            if (auto* blocks = std::get_if<LacunaryBlocks>(&q.scheme)) blocks->theta = *q.theta;
            set_alpha_one();
            break;
        case 5:
            q.family = MusielakFamily::uniform(orlicz::OrliczSpec::identity(), 1.0);
            q.theta = covering_theta(std::max<std::int64_t>(horizon, 2));
            q.scheme = LambdaWindows{WindowLengthRule::identity(), 1.0};
            break;
        default:
            throw ConfigError("specialize case must be 1..5 (got " + std::to_string(case_id) + ")");
    }
    return q;
}

}  // namespace summakit::convergence
