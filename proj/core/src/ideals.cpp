#include "summakit/ideals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "summakit/errors.hpp"
#include "summakit/exact.hpp"
#include "summakit/random.hpp"

namespace summakit::ideals {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::int64_t kMinHorizon = 10;

}  // namespace

std::string_view to_string(VerdictState state) noexcept {
    switch (state) {
        case VerdictState::In:
            return "In";
        case VerdictState::Out:
            return "Out";
        case VerdictState::Inconclusive:
            break;
    }
    return "Inconclusive";
}

VerdictState verdict_from_string(std::string_view text) {
    if (text == "In") return VerdictState::In;
    if (text == "Out") return VerdictState::Out;
    if (text == "Inconclusive") return VerdictState::Inconclusive;
    throw ConfigError("unknown verdict '" + std::string(text) + "'");
}

IdealOracle::IdealOracle(IdealKind kind, std::int64_t horizon) : kind_(std::move(kind)), horizon_(horizon) {
    if (horizon < 1) {
        throw ConfigError("ideal horizon must be positive");
    }
    std::visit(Overloaded{
                   [](const Finite&) {},
                   [](const DensityZero& k) {
                       if (!(k.tol > 0.0) || !(k.tol < 0.1)) {
                           throw ConfigError("density_zero tolerance must lie in (0, 0.1)");
                       }
                   },
                   [](const Summable& k) {
                       if (!k.weight) throw ConfigError("summable ideal needs a weight rule");
                       if (!(k.bound > 0.0)) throw ConfigError("summable ideal needs a positive bound");
                   },
               },
               kind_);
}

IdealOracle IdealOracle::summable_power(double power, double bound, std::int64_t horizon) {
    if (!(power > 0.0)) {
        throw ConfigError("summable weight exponent must be positive");
    }
    std::ostringstream description;
    description << "1/j^" << power;
    Summable kind{[power](std::int64_t j) { return std::pow(static_cast<double>(j), -power); }, bound,
                  description.str()};
    return {std::move(kind), horizon};
}

std::string IdealOracle::describe() const {
    std::ostringstream out;
    std::visit(Overloaded{
                   [&out](const Finite&) { out << "finite"; },
                   [&out](const DensityZero& k) { out << "density_zero(tol=" << k.tol << ")"; },
                   [&out](const Summable& k) {
                       out << "summable(weight=" << k.weight_description << ", bound=" << k.bound << ")";
                   },
               },
               kind_);
    out << " @ horizon " << horizon_;
    return out.str();
}

std::pair<std::int64_t, std::int64_t> IdealOracle::inspected_range() const noexcept {
    if (std::holds_alternative<Summable>(kind_)) {
        return {1, horizon_};
    }
    return {horizon_ / 2 + 1, horizon_};
}

IndexSet::IndexSet(std::int64_t horizon) {
    if (horizon < 0) {
        throw ConfigError("index set horizon must be non-negative");
    }
    bits_.assign(static_cast<std::size_t>(horizon), 0);
}

IndexSet IndexSet::from_predicate(std::int64_t horizon, const std::function<bool(std::int64_t)>& predicate) {
    IndexSet set(horizon);
    for (std::int64_t j = 1; j <= horizon; ++j) {
        if (predicate(j)) set.bits_[static_cast<std::size_t>(j - 1)] = 1;
    }
    return set;
}

IndexSet IndexSet::from_members(std::int64_t horizon, const std::vector<std::int64_t>& members) {
    IndexSet set(horizon);
    for (auto j : members) set.insert(j);
    return set;
}

void IndexSet::insert(std::int64_t j) {
    if (j < 1 || j > horizon()) {
        throw ConfigError("index " + std::to_string(j) + " outside 1.." + std::to_string(horizon()));
    }
    bits_[static_cast<std::size_t>(j - 1)] = 1;
}

void IndexSet::erase(std::int64_t j) {
    if (j >= 1 && j <= horizon()) bits_[static_cast<std::size_t>(j - 1)] = 0;
}

std::int64_t IndexSet::count() const noexcept { return std::count(bits_.begin(), bits_.end(), std::uint8_t{1}); }

std::int64_t IndexSet::count_in(std::int64_t lo, std::int64_t hi) const noexcept {
    lo = std::max<std::int64_t>(lo, 1);
    hi = std::min(hi, horizon());
    if (lo > hi) return 0;
    return std::count(bits_.begin() + (lo - 1), bits_.begin() + hi, std::uint8_t{1});
}

std::vector<std::int64_t> IndexSet::members() const {
    std::vector<std::int64_t> out;
    for (std::size_t k = 0; k < bits_.size(); ++k) {
        if (bits_[k] != 0) out.push_back(static_cast<std::int64_t>(k + 1));
    }
    return out;
}

bool IndexSet::is_subset_of(const IndexSet& other) const noexcept {
    for (std::int64_t j = 1; j <= horizon(); ++j) {
        if (contains(j) && !other.contains(j)) return false;
    }
    return true;
}

IndexSet IndexSet::united(const IndexSet& other) const {
    IndexSet out(std::max(horizon(), other.horizon()));
    for (std::int64_t j = 1; j <= out.horizon(); ++j) {
        if (contains(j) || other.contains(j)) out.bits_[static_cast<std::size_t>(j - 1)] = 1;
    }
    return out;
}

MembershipVerdict membership(const IdealOracle& ideal, const IndexSet& set) {
    const std::int64_t horizon = ideal.horizon();
    if (horizon < kMinHorizon) {
        throw ConfigError("ideal membership needs horizon >= 10 (got " + std::to_string(horizon) + ")");
    }
    if (set.horizon() != horizon) {
        throw ConfigError("index set horizon " + std::to_string(set.horizon()) + " differs from ideal horizon " +
                          std::to_string(horizon));
    }
    MembershipVerdict verdict;
    const auto [first, last] = ideal.inspected_range();
    verdict.tail_length = last - first + 1;
    verdict.tail_count = set.count_in(first, last);
    const auto count = static_cast<double>(verdict.tail_count);
    const auto length = static_cast<double>(verdict.tail_length);

    std::visit(Overloaded{
                   [&](const Finite&) {
                       verdict.statistic = count / length;
                       verdict.threshold_used = 1.0 / length;
                       verdict.out_threshold = 0.1;
                       if (verdict.tail_count <= 1) {
                           verdict.state = VerdictState::In;
                       } else if (10 * verdict.tail_count >= verdict.tail_length) {
                           verdict.state = VerdictState::Out;
                       } else {
                           verdict.state = VerdictState::Inconclusive;
                       }
                   },
                   [&](const DensityZero& k) {
                       verdict.statistic = count / length;
                       verdict.threshold_used = k.tol;
                       verdict.out_threshold = 10.0 * k.tol;
                       if (leq_product(count, k.tol, length)) {
                           verdict.state = VerdictState::In;
                       } else if (geq_product(count, k.tol, 10.0 * length)) {
                           verdict.state = VerdictState::Out;
                       } else {
                           verdict.state = VerdictState::Inconclusive;
                       }
                   },
                   [&](const Summable& k) {
                       CompensatedSum sum;
                       for (std::int64_t j = 1; j <= horizon; ++j) {
                           if (set.contains(j)) sum.add(k.weight(j));
                       }
                       verdict.statistic = sum.value();
                       verdict.threshold_used = k.bound;
                       verdict.out_threshold = k.bound;
                       verdict.state = verdict.statistic <= k.bound ? VerdictState::In : VerdictState::Out;
                   },
               },
               ideal.kind());
    return verdict;
}

MembershipVerdict membership(const IdealOracle& ideal, const std::function<bool(std::int64_t)>& indicator) {
    return membership(ideal, IndexSet::from_predicate(ideal.horizon(), indicator));
}

namespace {

// Candidate sets drawn from three families: a handful of early members plus at
// most one late member, a sparse Bernoulli set, and a half-density set.
IndexSet sample_set(const IdealOracle& ideal, std::uint64_t seed, std::uint64_t sample, std::uint64_t which) {
    const std::int64_t h = ideal.horizon();
    const CounterRng rng(seed, sample * 4 + which);
    IndexSet set(h);
    std::uint64_t cursor = 0;
    const auto family = rng.integer(cursor++, 0, 2);
    if (family == 0) {
        const auto members = rng.integer(cursor++, 0, 10);
        for (std::int64_t m = 0; m < members; ++m) set.insert(rng.integer(cursor++, 1, std::max<std::int64_t>(1, h / 2)));
        if (rng.uniform(cursor++) < 0.5) set.insert(rng.integer(cursor++, 1, h));
    } else {
        double p = 0.5;
        if (family == 1) {
            p = 0.001;
            if (const auto* dz = std::get_if<DensityZero>(&ideal.kind())) p = dz->tol / 4.0;
        }
        for (std::int64_t j = 1; j <= h; ++j) {
            if (rng.uniform(cursor++) < p) set.insert(j);
        }
    }
    return set;
}

}  // namespace

AdmissibilityReport admissibility_selfcheck(const IdealOracle& ideal, std::int64_t samples, std::uint64_t seed) {
    if (samples < 1) {
        throw ConfigError("admissibility self-check needs at least one sample");
    }
    AdmissibilityReport report;
    report.samples = samples;
    const std::int64_t h = ideal.horizon();
    auto note = [&report](std::string text) {
        if (report.examples.size() < 8) report.examples.push_back(std::move(text));
    };

    for (std::int64_t s = 0; s < samples; ++s) {
        const auto sample = static_cast<std::uint64_t>(s);
        const CounterRng rng(seed, sample * 4 + 3);

        const auto m = rng.integer(0, 1, h);
        const auto singleton = IndexSet::from_members(h, {m});
        if (membership(ideal, singleton).state != VerdictState::In) {
            ++report.singleton_violations;
            note("singleton {" + std::to_string(m) + "} not In");
        }

        const auto b1 = sample_set(ideal, seed, sample, 0);
        const auto b2 = sample_set(ideal, seed, sample, 1);
        const auto v1 = membership(ideal, b1).state;
        const auto v2 = membership(ideal, b2).state;
        if (v1 == VerdictState::In) {
            IndexSet subset(h);
            std::uint64_t cursor = 1;
            for (auto j : b1.members()) {
                if (rng.uniform(cursor++) < 0.5) subset.insert(j);
            }
            if (membership(ideal, subset).state == VerdictState::Out) {
                ++report.hereditary_violations;
                note("subset of an In set judged Out (sample " + std::to_string(s) + ")");
            }
        }
        if (v1 == VerdictState::In && v2 == VerdictState::In) {
            if (membership(ideal, b1.united(b2)).state == VerdictState::Out) {
                ++report.union_violations;
                note("union of two In sets judged Out (sample " + std::to_string(s) + ")");
            }
        }
    }
    return report;
}

}  // namespace summakit::ideals
