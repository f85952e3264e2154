#include "summakit/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "summakit/errors.hpp"
#include "summakit/exact.hpp"

namespace summakit::orlicz {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_number(double value) {
    std::ostringstream out;
    out.precision(17);
    out << value;
    return out.str();
}

double interpolate(const std::vector<GridPoint>& grid, double u) noexcept {
    auto upper = std::upper_bound(grid.begin(), grid.end(), u,
                                  [](double lhs, const GridPoint& rhs) { return lhs < rhs.u; });
    if (upper == grid.end()) {
        return grid.back().value;
    }
    const auto lower = std::prev(upper);
    const double t = (u - lower->u) / (upper->u - lower->u);
    return lower->value + t * (upper->value - lower->value);
}

void check_grid(const std::vector<GridPoint>& grid) {
    if (grid.size() < 2) {
        throw ValidationError("tabulated Orlicz function needs at least two samples");
    }
    if (grid.front().u != 0.0) {
        throw ValidationError("tabulated Orlicz function must start at u = 0");
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!std::isfinite(grid[k].u) || !std::isfinite(grid[k].value) || grid[k].value < 0.0) {
            throw ValidationError("tabulated sample " + std::to_string(k + 1) + " is not finite and non-negative");
        }
        if (k > 0 && !(grid[k].u > grid[k - 1].u)) {
            throw ValidationError("tabulated abscissae must be strictly increasing (sample " + std::to_string(k + 1) +
                                  ")");
        }
    }
}

}  // namespace

OrliczSpec::OrliczSpec(Family family, double domain_cap) : family_(std::move(family)), domain_cap_(domain_cap) {
    if (!(domain_cap > 0.0) || !std::isfinite(domain_cap)) {
        throw ValidationError("domain_cap must be finite and positive");
    }
    effective_cap_ = domain_cap;
    std::visit(Overloaded{
                   [](const Identity&) {},
                   [](const Power& f) {
                       if (!(f.p >= 1.0) || !std::isfinite(f.p)) throw ValidationError("power family needs p >= 1");
                   },
                   [](const PowerOverP& f) {
                       if (!(f.p > 1.0) || !std::isfinite(f.p)) throw ValidationError("power_over_p needs p > 1");
                   },
                   [](const ExpMinusOne&) {},
                   [this](const Tabulated& f) {
                       if (!f.grid) throw ValidationError("tabulated Orlicz function without samples");
                       check_grid(*f.grid);
                       effective_cap_ = std::min(effective_cap_, f.grid->back().u);
                   },
               },
               family_);
}

OrliczSpec OrliczSpec::identity(double cap) { return {Identity{}, cap}; }
OrliczSpec OrliczSpec::power(double p, double cap) { return {Power{p}, cap}; }
OrliczSpec OrliczSpec::power_over_p(double p, double cap) { return {PowerOverP{p}, cap}; }
OrliczSpec OrliczSpec::exp_minus_one(double cap) { return {ExpMinusOne{}, cap}; }

OrliczSpec OrliczSpec::tabulated(std::vector<GridPoint> grid) {
    const double cap = grid.empty() ? 1.0 : std::max(grid.back().u, 1e-300);
    return tabulated(std::move(grid), cap);
}

OrliczSpec OrliczSpec::tabulated(std::vector<GridPoint> grid, double cap) {
    return {Tabulated{std::make_shared<const std::vector<GridPoint>>(std::move(grid))}, cap};
}

double OrliczSpec::operator()(double u) const {
    if (!(u >= 0.0) || u > effective_cap_) {
        throw DomainError("Orlicz argument " + format_number(u) + " outside [0, " + format_number(effective_cap_) +
                          "] for " + describe());
    }
    return eval_unchecked(u);
}

double OrliczSpec::eval_unchecked(double u) const noexcept {
    return std::visit(Overloaded{
                          [u](const Identity&) { return u; },
                          [u](const Power& f) { return f.p == 1.0 ? u : std::pow(u, f.p); },
                          [u](const PowerOverP& f) { return std::pow(u, f.p) / f.p; },
                          [u](const ExpMinusOne&) { return std::expm1(u); },
                          [u](const Tabulated& f) { return interpolate(*f.grid, u); },
                      },
                      family_);
}

std::string OrliczSpec::describe() const {
    return std::visit(Overloaded{
                          [](const Identity&) { return std::string("identity"); },
                          [](const Power& f) { return "power(p=" + format_number(f.p) + ")"; },
                          [](const PowerOverP& f) { return "power_over_p(p=" + format_number(f.p) + ")"; },
                          [](const ExpMinusOne&) { return std::string("exp_minus_one"); },
                          [](const Tabulated& f) { return "tabulated(n=" + std::to_string(f.grid->size()) + ")"; },
                      },
                      family_);
}

double eval_orlicz(const OrliczSpec& spec, double u) { return spec(u); }

bool ValidationReport::ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

const PropertyCheck* ValidationReport::find(std::string_view name) const noexcept {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::string ValidationReport::failures() const {
    std::string out;
    for (const auto& c : checks) {
        if (c.passed) continue;
        if (!out.empty()) out += "; ";
        out += c.name + ": " + c.detail;
    }
    return out;
}

ValidationReport validate_orlicz(const OrliczSpec& spec, int grid_size) {
    if (grid_size < 3) {
        throw ValidationError("validation grid needs at least 3 points");
    }
    const double cap = spec.effective_cap();
    std::vector<double> us;
    us.reserve(static_cast<std::size_t>(grid_size));
    for (int k = 0; k < grid_size; ++k) {
        us.push_back(cap * static_cast<double>(k) / static_cast<double>(grid_size - 1));
    }
    if (const auto* tab = std::get_if<Tabulated>(&spec.family())) {
        for (const auto& point : *tab->grid) {
            if (point.u <= cap) us.push_back(point.u);
        }
        std::sort(us.begin(), us.end());
        us.erase(std::unique(us.begin(), us.end()), us.end());
    }
    std::vector<double> ms;
    ms.reserve(us.size());
    for (double u : us) ms.push_back(spec.eval_unchecked(u));

    ValidationReport report;
    auto add = [&report](std::string name, bool passed, std::string detail) {
        report.checks.push_back({std::move(name), passed, std::move(detail)});
    };
    auto slack = [](double scale) { return 1e-12 * std::max(1.0, std::fabs(scale)); };

    {
        const bool finite = std::all_of(ms.begin(), ms.end(), [](double m) { return std::isfinite(m); });
        add("finite", finite, finite ? "" : "M overflows inside the domain cap");
    }
    add("zero_at_zero", ms.front() == 0.0, "M(0) = " + format_number(ms.front()));
    {
        std::string detail;
        for (std::size_t k = 1; k < us.size() && detail.empty(); ++k) {
            if (!(ms[k] > 0.0)) detail = "M(" + format_number(us[k]) + ") = " + format_number(ms[k]);
        }
        add("positivity", detail.empty(), detail);
    }
    {
        std::string detail;
        for (std::size_t k = 1; k < us.size() && detail.empty(); ++k) {
            if (!(ms[k] - ms[k - 1] >= -slack(ms[k]))) {
                detail = "decreases on [" + format_number(us[k - 1]) + ", " + format_number(us[k]) + "]";
            }
        }
        add("monotone", detail.empty(), detail);
    }
    {
        std::string detail;
        for (std::size_t k = 1; k + 1 < us.size() && detail.empty(); ++k) {
            const double left = us[k] - us[k - 1];
            const double right = us[k + 1] - us[k];
            const double slope_left = (ms[k] - ms[k - 1]) / left;
            const double slope_right = (ms[k + 1] - ms[k]) / right;
            if (!((slope_right - slope_left) * std::min(left, right) >= -slack(ms[k + 1]))) {
                detail = "slope drops at u = " + format_number(us[k]);
            }
        }
        add("convex", detail.empty(), detail);
    }
    {
        const double at_cap = spec.eval_unchecked(cap);
        const double at_half = spec.eval_unchecked(cap / 2.0);
        add("unbounded_trend", at_cap > at_half,
            "M(cap) = " + format_number(at_cap) + ", M(cap/2) = " + format_number(at_half));
    }
    return report;
}

ConjugateResult conjugate_eval(const OrliczSpec& spec, double v, double search_cap, double tol) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DomainError("conjugate argument must be finite and non-negative");
    }
    if (!(search_cap > 0.0) || !(tol > 0.0)) {
        throw ValidationError("conjugate search_cap and tol must be positive");
    }
    if (const auto report = validate_orlicz(spec, 65); !report.ok()) {
        throw ValidationError("invalid Orlicz function " + spec.describe() + ": " + report.failures());
    }
    const double upper = std::min(search_cap, spec.effective_cap());
    auto objective = [&](double u) { return v * u - spec.eval_unchecked(u); };

    ConjugateResult best{0.0, 0.0, false};
    auto consider = [&best, &objective](double u) {
        const double value = objective(u);
        if (value > best.value) {
            best.value = value;
            best.maximizer = u;
        }
    };

    if (const auto* tab = std::get_if<Tabulated>(&spec.family())) {
        // Concave and piecewise linear: the supremum sits on a knot or the bound.
        for (const auto& point : *tab->grid) {
            if (point.u <= upper) consider(point.u);
        }
    } else {
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = 0.0;
        double hi = upper;
        double c = hi - inv_phi * (hi - lo);
        double d = lo + inv_phi * (hi - lo);
        double fc = objective(c);
        double fd = objective(d);
        for (int iter = 0; iter < 400 && (hi - lo) > tol; ++iter) {
            if (fc >= fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - inv_phi * (hi - lo);
                fc = objective(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + inv_phi * (hi - lo);
                fd = objective(d);
            }
        }
        consider(c);
        consider(d);
        consider(0.5 * (lo + hi));
    }
    consider(upper);
    best.hit_cap = best.maximizer > 0.0 && best.maximizer >= upper - tol;
    return best;
}

MusielakFamily::MusielakFamily(Rule rule, Scale rho, std::string description)
    : rule_(std::move(rule)), rho_(std::move(rho)), description_(std::move(description)) {
    if (!rule_ || !rho_) {
        throw ValidationError("Musielak family needs both a rule and a scale sequence");
    }
}

MusielakFamily MusielakFamily::uniform(OrliczSpec spec, double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ValidationError("rho must be positive");
    }
    std::string description = "uniform " + spec.describe() + ", rho=" + format_number(rho);
    MusielakFamily family([spec](std::int64_t) { return spec; }, [rho](std::int64_t) { return rho; },
                          std::move(description));
    family.uniform_ = std::move(spec);
    family.constant_rho_ = rho;
    return family;
}

MusielakFamily MusielakFamily::alternating(OrliczSpec odd, OrliczSpec even, double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ValidationError("rho must be positive");
    }
    std::string description =
        "alternating odd=" + odd.describe() + " even=" + even.describe() + ", rho=" + format_number(rho);
    MusielakFamily family([odd, even](std::int64_t j) { return j % 2 != 0 ? odd : even; },
                          [rho](std::int64_t) { return rho; }, std::move(description));
    family.constant_rho_ = rho;
    return family;
}

MusielakFamily MusielakFamily::power_ramp(double p_inf, double amplitude, double rho) {
    if (!(p_inf >= 1.0) || !(amplitude >= 0.0) || !(rho > 0.0)) {
        throw ValidationError("power_ramp needs p_inf >= 1, amplitude >= 0, rho > 0");
    }
    std::string description = "power_ramp p_inf=" + format_number(p_inf) + " amplitude=" + format_number(amplitude) +
                              ", rho=" + format_number(rho);
    MusielakFamily family(
        [p_inf, amplitude](std::int64_t j) { return OrliczSpec::power(p_inf + amplitude / static_cast<double>(j)); },
        [rho](std::int64_t) { return rho; }, std::move(description));
    family.constant_rho_ = rho;
    return family;
}

OrliczSpec MusielakFamily::at(std::int64_t j) const {
    if (uniform_) return *uniform_;
    return rule_(j);
}

double MusielakFamily::rho(std::int64_t j) const {
    if (constant_rho_) return *constant_rho_;
    return rho_(j);
}

double MusielakFamily::term(std::int64_t j, double value) const {
    const double argument = std::fabs(value) / rho(j);
    try {
        return uniform_ ? (*uniform_)(argument) : rule_(j)(argument);
    } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " at index " + std::to_string(j), j);
    }
}

ValidationReport MusielakFamily::validate_sample(std::int64_t samples, int grid_size) const {
    ValidationReport report;
    std::string rho_detail;
    std::string spec_detail;
    for (std::int64_t j = 1; j <= samples; ++j) {
        const double r = rho(j);
        if (rho_detail.empty() && !(r > 0.0 && std::isfinite(r))) {
            rho_detail = "rho(" + std::to_string(j) + ") = " + format_number(r);
        }
        if (spec_detail.empty() && (!uniform_ || j == 1)) {
            const auto spec_report = validate_orlicz(at(j), grid_size);
            if (!spec_report.ok()) spec_detail = "M_" + std::to_string(j) + ": " + spec_report.failures();
        }
    }
    report.checks.push_back({"rho_positive", rho_detail.empty(), rho_detail});
    report.checks.push_back({"members_orlicz", spec_detail.empty(), spec_detail});
    return report;
}

SequencePrefix::SequencePrefix(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw ValidationError("sequence value at index " + std::to_string(k + 1) + " is not finite");
        }
    }
}

bool SequencePrefix::all_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double SequencePrefix::sup_abs() const noexcept {
    double best = 0.0;
    for (double v : values_) best = std::max(best, std::fabs(v));
    return best;
}

namespace {

// Returns the modular, or the 1-based index whose argument left the domain.
std::variant<double, std::int64_t> modular_or_index(const MusielakFamily& family, const SequencePrefix& x,
                                                    double scale) {
    CompensatedSum sum;
    const auto values = x.values();
    const auto& uniform = family.uniform_spec();
    for (std::size_t k = 0; k < values.size(); ++k) {
        const auto j = static_cast<std::int64_t>(k + 1);
        const double argument = scale * std::fabs(values[k]);
        if (uniform) {
            if (argument > uniform->effective_cap()) return j;
            sum.add(uniform->eval_unchecked(argument));
        } else {
            const OrliczSpec spec = family.at(j);
            if (argument > spec.effective_cap()) return j;
            sum.add(spec.eval_unchecked(argument));
        }
    }
    return sum.value();
}

}  // namespace

double modular(const MusielakFamily& family, const SequencePrefix& x, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ValidationError("modular scale must be finite and positive");
    }
    const auto result = modular_or_index(family, x, scale);
    if (const auto* index = std::get_if<std::int64_t>(&result)) {
        throw DomainError("modular argument exceeds domain_cap at index " + std::to_string(*index), *index);
    }
    return std::get<double>(result);
}

std::optional<double> try_modular(const MusielakFamily& family, const SequencePrefix& x, double scale) {
    const auto result = modular_or_index(family, x, scale);
    if (std::holds_alternative<std::int64_t>(result)) return std::nullopt;
    const double value = std::get<double>(result);
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

LuxemburgResult luxemburg_norm(const MusielakFamily& family, const SequencePrefix& x, double tol) {
    if (!(tol > 0.0)) {
        throw ValidationError("tolerance must be positive");
    }
    LuxemburgResult result;
    if (x.all_zero()) {
        return result;
    }
    // feasible(k): modular(x / k) <= 1; monotone in k since every M_j is non-decreasing.
    auto modular_at = [&](double k) { return try_modular(family, x, 1.0 / k); };
    auto feasible = [&](double k) {
        const auto m = modular_at(k);
        return m.has_value() && *m <= 1.0;
    };

    double hi = x.sup_abs();
    while (!feasible(hi)) {
        if (++result.doublings > 200) {
            throw NumericError("Luxemburg bracket did not close within 200 doublings");
        }
        hi *= 2.0;
    }
    double lo = hi / 2.0;
    int halvings = 0;
    while (feasible(lo)) {
        if (++halvings > 200) {
            throw NumericError("Luxemburg bracket did not open within 200 halvings");
        }
        hi = lo;
        lo /= 2.0;
    }
    while (hi - lo > tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        (feasible(mid) ? hi : lo) = mid;
        ++result.bisections;
    }
    result.norm = hi;
    result.achieved_modular = *modular_at(hi);
    result.bracket_width = hi - lo;
    return result;
}

OrliczNormResult orlicz_norm(const MusielakFamily& family, const SequencePrefix& x, double tol) {
    if (!(tol > 0.0)) {
        throw ValidationError("tolerance must be positive");
    }
    OrliczNormResult result;
    if (x.all_zero()) {
        return result;
    }
    constexpr double kInf = std::numeric_limits<double>::infinity();
    auto objective = [&](double k) {
        const auto m = try_modular(family, x, k);
        return m ? (1.0 + *m) / k : kInf;
    };

    constexpr int kMinExp = -64;
    constexpr int kMaxExp = 64;
    int best_exp = kMinExp;
    double best_value = kInf;
    int last_finite = kMinExp - 1;
    for (int e = kMinExp; e <= kMaxExp; ++e) {
        const double value = objective(std::ldexp(1.0, e));
        if (std::isfinite(value)) last_finite = e;
        if (value < best_value) {
            best_value = value;
            best_exp = e;
        }
    }
    if (!std::isfinite(best_value)) {
        throw NumericError("Orlicz norm objective is infinite at every scanned scale");
    }

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::ldexp(1.0, best_exp - 1);
    double hi = std::ldexp(1.0, best_exp + 1);
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = objective(c);
    double fd = objective(d);
    for (int iter = 0; iter < 500 && (hi - lo) > tol * std::max(1.0, hi); ++iter) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = objective(d);
        }
    }
    result.minimizer = std::ldexp(1.0, best_exp);
    result.norm = best_value;
    for (double k : {c, d, 0.5 * (lo + hi)}) {
        const double value = objective(k);
        if (value < result.norm) {
            result.norm = value;
            result.minimizer = k;
        }
    }
    result.bracket_width = hi - lo;
    result.boundary_minimizer = best_exp == last_finite || best_exp == kMaxExp;
    return result;
}

}  // namespace summakit::orlicz
