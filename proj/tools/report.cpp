#include "report.hpp"

#include <mixvem/io.hpp>

#include <sstream>

namespace mixvem::cli {

namespace {

std::string_view provenance_label(Provenance p) { return p == Provenance::ClosedForm ? "Exact" : "Extrap"; }

std::string_view provenance_name(Provenance p) { return p == Provenance::ClosedForm ? "closed-form" : "extrapolated"; }

void row(std::ostream& os, std::string_view label, const std::vector<double>& values)
{
    os << label;
    for (double v : values)
        os << ',' << io::format_number(v);
    os << '\n';
}

} // namespace

std::string convergence_csv(const ConvergenceStudy& study)
{
    std::ostringstream os;
    os << 'N';
    for (std::size_t m = 0; m < study.lambda_series.size(); ++m)
        os << ",lambda_" << m + 1;
    os << '\n';
    for (std::size_t l = 0; l < study.n_values.size(); ++l) {
        std::vector<double> vals;
        for (const auto& series : study.lambda_series)
            vals.push_back(series[l]);
        row(os, std::to_string(study.n_values[l]), vals);
    }
    row(os, "Order", study.orders);
    row(os, provenance_label(study.reference_provenance), study.reference);
    return os.str();
}

std::string sweep_csv(const StabilizationSweep& sweep)
{
    std::ostringstream os;
    os << 'N';
    for (double w : sweep.w_values)
        os << ",w=" << io::format_number(w);
    os << '\n';
    for (std::size_t ni = 0; ni < sweep.n_values.size(); ++ni) {
        std::vector<double> vals;
        for (std::size_t wi = 0; wi < sweep.w_values.size(); ++wi)
            vals.push_back(sweep.at(wi, ni).lambdas.front());
        row(os, std::to_string(sweep.n_values[ni]), vals);
    }
    row(os, "Order", sweep.orders);
    row(os, provenance_label(sweep.reference_provenance), sweep.references);
    return os.str();
}

std::string eigenvalues_csv(int n, const EigenResult& result)
{
    std::ostringstream os;
    os << 'N';
    for (Eigen::Index m = 0; m < result.lambdas.size(); ++m)
        os << ",lambda_" << m + 1;
    os << '\n';
    row(os, std::to_string(n), std::vector<double>(result.lambdas.begin(), result.lambdas.end()));
    return os.str();
}

nlohmann::ordered_json to_json(const QualityReport& q)
{
    return {{"min_edge_to_diameter", q.min_edge_to_diameter},
            {"min_inradius_to_diameter", q.min_inradius_to_diameter},
            {"all_convex", q.all_convex}};
}

nlohmann::ordered_json to_json(const ConvergenceStudy& study)
{
    nlohmann::ordered_json j;
    j["n_values"] = study.n_values;
    j["h_values"] = study.h_values;
    j["lambda_series"] = study.lambda_series;
    j["reference"] = study.reference;
    j["reference_provenance"] = provenance_name(study.reference_provenance);
    j["orders"] = study.orders;
    auto& ex = j["extrapolated"] = nlohmann::ordered_json::array();
    for (const auto& e : study.extrapolated) {
        if (!e) {
            ex.push_back(nullptr);
            continue;
        }
        ex.push_back({{"lam_inf", e->lam_inf},
                      {"order", e->order},
                      {"constant", e->constant},
                      {"iterations", e->iterations}});
    }
    return j;
}

nlohmann::ordered_json to_json(const StabilizationSweep& sweep)
{
    nlohmann::ordered_json j;
    j["w_values"] = sweep.w_values;
    j["n_values"] = sweep.n_values;
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const SweepRow& r : sweep.rows)
        rows.push_back({{"w", r.w}, {"n", r.n}, {"lambdas", r.lambdas}});
    j["orders"] = sweep.orders;
    j["references"] = sweep.references;
    j["reference_provenance"] = provenance_name(sweep.reference_provenance);
    return j;
}

nlohmann::ordered_json to_json(const SpuriousReport& report, std::span<const double> computed,
                               const ExactSpectrum& exact)
{
    nlohmann::ordered_json j;
    j["computed"] = std::vector<double>(computed.begin(), computed.end());
    j["exact"] = exact.values;
    j["window"] = {0.0, report.window_max};
    j["expected_count"] = report.expected_count;
    j["computed_count"] = report.computed_count;
    j["flagged"] = report.flagged;
    j["flagged_count"] = report.flagged.size();
    j["match"] = report.match;
    return j;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + '\n'; }

} // namespace mixvem::cli
