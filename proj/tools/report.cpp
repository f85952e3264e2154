#include "report.hpp"

#include <cmath>

namespace summakit::cli {

namespace {

// JSON has no infinities; non-finite values are written as strings.
Json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

const char* toolkit_version() noexcept { return SUMMAKIT_VERSION; }

Json envelope(const std::string& command, const Json& config, Json result) {
    return {{"schema_version", kSchemaVersion},
            {"version", toolkit_version()},
            {"command", command},
            {"config", config},
            {"result", std::move(result)}};
}

std::string render(const Json& report) { return report.dump(2) + "\n"; }

Json to_json(const ideals::MembershipVerdict& v) {
    return {{"state", std::string(ideals::to_string(v.state))},
            {"statistic", number(v.statistic)},
            {"threshold_used", number(v.threshold_used)},
            {"out_threshold", number(v.out_threshold)},
            {"tail_count", v.tail_count},
            {"tail_length", v.tail_length}};
}

Json to_json(const convergence::ConvergenceVerdict& v) {
    Json j = {{"state", std::string(ideals::to_string(v.state))},
              {"tester", v.tester},
              {"windows", v.windows.size()},
              {"witness_count", v.witness.count()}};
    double max_stat = 0.0;
    std::int64_t max_at = 0;
    for (const auto& w : v.windows) {
        if (w.statistic > max_stat || max_at == 0) {
            max_stat = w.statistic;
            max_at = w.index;
        }
    }
    j["max_statistic"] = {{"index", max_at}, {"value", number(max_stat)}};
    Json last = Json::array();
    for (auto it = v.windows.rbegin(); it != v.windows.rend() && last.size() < 5; ++it) {
        last.push_back({{"index", it->index},
                        {"lo", it->lo},
                        {"hi", it->hi},
                        {"length", it->length},
                        {"count", it->count},
                        {"sum", number(it->sum)},
                        {"statistic", number(it->statistic)},
                        {"witness", it->witness}});
    }
    j["last_windows"] = std::move(last);
    j["ideal_verdict"] = v.ideal_verdict ? to_json(*v.ideal_verdict) : Json(nullptr);
    return j;
}

Json to_json(const orlicz::LuxemburgResult& r) {
    return {{"norm", number(r.norm)},
            {"achieved_modular", number(r.achieved_modular)},
            {"bracket_width", number(r.bracket_width)},
            {"doublings", r.doublings},
            {"bisections", r.bisections}};
}

Json to_json(const orlicz::OrliczNormResult& r) {
    return {{"norm", number(r.norm)},
            {"minimizer", number(r.minimizer)},
            {"bracket_width", number(r.bracket_width)},
            {"boundary_minimizer", r.boundary_minimizer}};
}

Json to_json(const orlicz::ConjugateResult& r) {
    return {{"value", number(r.value)}, {"maximizer", number(r.maximizer)}, {"hit_cap", r.hit_cap}};
}

Json to_json(const gen::PairCertificate& c) {
    return {{"first", c.first},
            {"last", c.last},
            {"windows_ok", c.windows_ok},
            {"min_ratio", number(c.min_ratio)},
            {"max_excess", number(c.max_excess)},
            {"max_lambda_ratio", number(c.max_lambda_ratio)},
            {"ratio_envelope", number(c.ratio_envelope)},
            {"ratio_envelope_late", number(c.ratio_envelope_late)},
            {"declared", number(c.declared)},
            {"passed", c.passed},
            {"detail", c.detail}};
}

Json to_json(const lab::LabReport& r) {
    Json records = Json::array();
    for (const auto& rec : r.records) {
        auto side = [](const lab::SideResult& s) {
            return Json{{"tester", s.tester},
                        {"windows", s.windows},
                        {"state", std::string(ideals::to_string(s.state))},
                        {"statistic", number(s.statistic)},
                        {"tail_count", s.tail_count},
                        {"tail_length", s.tail_length}};
        };
        const auto& c = rec.certificate;
        records.push_back({{"id", rec.id},
                           {"generator", rec.generator},
                           {"target", number(rec.target)},
                           {"certificate",
                            {{"min_ratio", number(c.min_ratio)},
                             {"max_excess", number(c.max_excess)},
                             {"term_bound", number(c.term_bound)},
                             {"sup_abs", number(c.sup_abs)},
                             {"antecedent_gamma", number(c.antecedent_gamma)},
                             {"antecedent_xi", number(c.antecedent_xi)},
                             {"consequent_gamma", number(c.consequent_gamma)},
                             {"consequent_xi", number(c.consequent_xi)}}},
                           {"antecedent", side(rec.antecedent)},
                           {"consequent", side(rec.consequent)},
                           {"classification", std::string(lab::to_string(rec.classification))}});
    }
    return {{"theorem", std::string(lab::to_string(r.config.id))},
            {"mode", r.mode},
            {"statement", r.statement},
            {"family", r.family},
            {"ideal", r.ideal},
            {"lambda", r.lambda},
            {"mu", r.mu},
            {"pair_certificate", to_json(r.pair_certificate)},
            {"totals",
             {{"instances", r.totals.instances},
              {"consistent", r.totals.consistent},
              {"counterexamples", r.totals.counterexamples},
              {"inconclusive", r.totals.inconclusive},
              {"strict", r.totals.strict}}},
            {"summary", r.summary()},
            {"records", std::move(records)}};
}

}  // namespace summakit::cli
