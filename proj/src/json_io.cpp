#include "hrlab/json_io.hpp"

#include <cstdint>
#include <sstream>

namespace hrlab {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { fail(ErrorCode::ParseError, what); }

// nlohmann's double writer is shortest-round-trip and deterministic; reuse it
// for CSV so both formats agree on every digit.
std::string num_str(double x) { return Json(x).dump(); }

} // namespace

const Json& member(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        parse_fail(std::string("missing field '") + key + "'");
    return j.at(key);
}

double number_from(const Json& j, const std::string& who) {
    if (!j.is_number()) parse_fail(who + " must be a number");
    return j.get<double>();
}

int integer_from(const Json& j, const std::string& who) {
    if (!j.is_number_integer()) parse_fail(who + " must be an integer");
    return j.get<int>();
}

Json json_of(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from(const Json& j) {
    return {number_from(member(j, "re"), "re"), number_from(member(j, "im"), "im")};
}

Json json_of(const Turn& t) { return Json(t.str()); }

Turn turn_from(const Json& j) {
    if (!j.is_string()) parse_fail("turn must be a string \"a/b\"");
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= s.size())
        parse_fail("turn '" + s + "' is not of the form a/b");
    std::int64_t num = 0, den = 0;
    try {
        std::size_t used = 0;
        num = std::stoll(s.substr(0, slash), &used);
        if (used != slash) parse_fail("turn '" + s + "' has a malformed numerator");
        const std::string dpart = s.substr(slash + 1);
        den = std::stoll(dpart, &used);
        if (used != dpart.size()) parse_fail("turn '" + s + "' has a malformed denominator");
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        parse_fail("turn '" + s + "' is not of the form a/b");
    }
    if (den <= 0) parse_fail("turn '" + s + "' needs a positive denominator");
    return Turn(num, den);
}

Json json_of(const ExactPoint& p) {
    return Json{{"modulus", p.modulus}, {"turn", json_of(p.turn)}};
}

ExactPoint point_from(const Json& j) {
    const double mod = number_from(member(j, "modulus"), "modulus");
    if (!(mod >= 0.0)) parse_fail("point modulus must be >= 0");
    return ExactPoint(mod, turn_from(member(j, "turn")));
}

Json json_of(const ComplexMatrix& a) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(json_of(a(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from(const Json& j) {
    if (!j.is_array() || j.empty()) parse_fail("matrix must be a nonempty array of rows");
    const std::size_t rows = j.size();
    if (!j.at(0).is_array() || j.at(0).empty())
        parse_fail("matrix rows must be nonempty arrays");
    const std::size_t cols = j.at(0).size();
    ComplexMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        const Json& row = j.at(i);
        if (!row.is_array() || row.size() != cols) parse_fail("matrix rows have unequal lengths");
        for (std::size_t k = 0; k < cols; ++k)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                complex_from(row.at(k));
    }
    return a;
}

Json json_of(const PointSet& xs) {
    Json arr = Json::array();
    for (const auto& p : xs) arr.push_back(json_of(p));
    return arr;
}

PointSet points_from(const Json& j) {
    if (!j.is_array()) parse_fail("points must be an array");
    PointSet xs;
    for (const auto& e : j) xs.push_back(point_from(e));
    return xs;
}

Json json_of(const ExponentSet& xs) {
    Json arr = Json::array();
    for (const auto& [m, n] : xs) arr.push_back(Json::array({m, n}));
    return arr;
}

ExponentSet exponents_from(const Json& j) {
    if (!j.is_array()) parse_fail("exponents must be an array of [m, n] pairs");
    ExponentSet xs;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) parse_fail("each exponent must be a pair [m, n]");
        xs.emplace_back(integer_from(e.at(0), "exponent m"), integer_from(e.at(1), "exponent n"));
    }
    return xs;
}

Json json_of(const AtomicMeasure& mu) {
    Json atoms = Json::array();
    for (const auto& [p, w] : mu.atoms)
        atoms.push_back(Json{{"point", json_of(p)}, {"weight", w}});
    return Json{{"atoms", std::move(atoms)}};
}

AtomicMeasure measure_from(const Json& j) {
    const Json& atoms = member(j, "atoms");
    if (!atoms.is_array()) parse_fail("measure atoms must be an array");
    AtomicMeasure mu;
    for (const auto& e : atoms)
        mu.atoms.emplace_back(point_from(member(e, "point")),
                              number_from(member(e, "weight"), "weight"));
    return mu;
}

Json json_of(const Povm& f) {
    Json support = Json::array();
    for (const Complex& z : f.support) support.push_back(json_of(z));
    Json effects = Json::array();
    for (const ComplexMatrix& e : f.effects) effects.push_back(json_of(e));
    return Json{{"support", std::move(support)}, {"effects", std::move(effects)}};
}

Povm povm_from(const Json& j) {
    const Json& support = member(j, "support");
    const Json& effects = member(j, "effects");
    if (!support.is_array() || !effects.is_array() || support.size() != effects.size())
        parse_fail("povm needs support and effects arrays of equal length");
    Povm f;
    for (const auto& z : support) f.support.push_back(complex_from(z));
    for (const auto& e : effects) f.effects.push_back(matrix_from(e));
    return f;
}

Json json_of(const SigmaTriple& s) { return Json{{"p", s.p}, {"q", s.q}, {"r", s.r}}; }

Json json_of(const HyperrigidVerdict& v) {
    const char* kind = "Unknown";
    if (v.kind == HyperrigidVerdict::Kind::ByGcd) kind = "ByGcd";
    if (v.kind == HyperrigidVerdict::Kind::BySector) kind = "BySector";
    Json warnings = Json::array();
    for (const auto& w : v.warnings)
        warnings.push_back(Json{{"code", warning_code_name(w.code)}, {"message", w.message}});
    return Json{{"verdict", kind},
                {"witness", v.witness ? json_of(*v.witness) : Json(nullptr)},
                {"warnings", std::move(warnings)}};
}

Json json_of(const BoundaryResult& r) {
    return Json{{"in_boundary", r.in_boundary},
                {"optimal_weight", r.optimal_weight},
                {"witness", json_of(r.witness)},
                {"duality_gap", r.duality_gap},
                {"separates", r.separates}};
}

Json json_of(const RepresentingReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back(Json{{"m", row.m}, {"n", row.n}, {"residual", row.residual}});
    return Json{{"ok", r.ok}, {"rows", std::move(rows)}};
}

Json json_of(const IsnytosInstance& inst) {
    return Json{{"points", json_of(inst.x)},
                {"measure", json_of(inst.mu)},
                {"monomials", json_of(inst.monomials)},
                {"radii", inst.radii},
                {"alpha", inst.alpha}};
}

Json json_of(const Dilation& d) {
    Json projections = Json::array();
    for (const auto& e : d.projections) projections.push_back(json_of(e));
    return Json{{"big_dim", static_cast<std::int64_t>(d.big_dim)},
                {"isometry", json_of(d.isometry)},
                {"normal", json_of(d.normal.matrix)},
                {"projections", std::move(projections)},
                {"range_projection", json_of(d.projection_p)}};
}

Json json_of(const ConvergenceReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back(Json{{"f", row.f_label},
                            {"n", row.n},
                            {"weak_gap", row.weak_gap},
                            {"strong_gap", row.strong_gap},
                            {"weak_shift", row.weak_shift},
                            {"discarded_norm", row.discarded_norm}});
    return Json{{"rows", std::move(rows)},
                {"identity_residual", r.identity_residual},
                {"seq_norm_max", r.seq_norm_max},
                {"comparison_norm", r.comparison_norm},
                {"norm_bound_ok", r.norm_bound_ok}};
}

Json json_of(const Main2Report& r) {
    return Json{{"lambda0", json_of(r.lambda0)},
                {"lambda", json_of(r.lambda)},
                {"n_max", r.n_max},
                {"witness", json_of(r.witness)},
                {"sot_diverges", r.sot_diverges},
                {"sot_divergence_value", r.sot_divergence_value},
                {"sot_witness", r.sot_witness_label},
                {"weak_all_converge", r.weak_all_converge},
                {"weak_stationarity_defect", r.weak_stationarity_defect},
                {"weak_limit_matches_on_m", r.weak_limit_matches_on_m},
                {"weak_on_m_defect", r.weak_on_m_defect},
                {"mismatch_found", r.mismatch_found},
                {"mismatch_f", r.mismatch_label},
                {"mismatch_value", r.mismatch_value},
                {"gaps", json_of(r.gaps)}};
}

Json json_of(const HansenReport& r) {
    return Json{{"gap", r.gap}, {"diff_norm", r.diff_norm}, {"equality", r.equality}};
}

Json json_of(const LiebRuskaiReport& r) {
    return Json{{"gaps", r.gaps}, {"final_gap", r.final_gap}, {"monotone", r.monotone}};
}

Json json_of(const CommutationVerdict& v) {
    Json residuals = Json::object();
    for (const auto& [k, val] : v.residuals) residuals[k] = val;
    Json conditions = Json::object();
    for (const auto& [k, val] : v.conditions) conditions[k] = val;
    return Json{{"residuals", std::move(residuals)},
                {"conditions", std::move(conditions)},
                {"equivalent", v.equivalent}};
}

Json json_of(const Main1Report& r) {
    Json diag = Json::array();
    for (const auto& [n, res] : r.diagonal_residuals)
        diag.push_back(Json{{"n", n}, {"residual", res}});
    return Json{{"hypothesis_met", r.hypothesis_met},
                {"worst_hypothesis_residual", r.worst_hypothesis_residual},
                {"diagonal_residuals", std::move(diag)},
                {"d", r.d},
                {"commute_power_residual", r.commute_power_residual},
                {"commute_modulus_residual", r.commute_modulus_residual},
                {"kernel_split_residual", r.kernel_split_residual},
                {"conclusions_hold", r.conclusions_hold}};
}

Json json_of(const ScalarSearchResult& r) {
    return Json{{"found", r.found},
                {"measure", json_of(r.measure)},
                {"residual_low", r.residual_low},
                {"residual_high", r.residual_high},
                {"trials_used", r.trials_used}};
}

Json json_of(const PovmSearchResult& r) {
    return Json{{"best_residual", r.best_residual},
                {"best_defect", r.best_defect},
                {"witness", r.witness ? json_of(*r.witness) : Json(nullptr)},
                {"steps_used", r.steps_used}};
}

std::string choquet_csv(const PointSet& lambdas, const std::vector<BoundaryResult>& rows) {
    if (lambdas.size() != rows.size())
        fail(ErrorCode::ShapeMismatch, "choquet_csv: one row per query point required");
    std::ostringstream out;
    out << "lambda_modulus,lambda_turn,optimal_weight,in_boundary\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << num_str(lambdas[i].modulus) << ',' << lambdas[i].turn.str() << ','
            << num_str(rows[i].optimal_weight) << ',' << (rows[i].in_boundary ? "true" : "false")
            << '\n';
    }
    return out.str();
}

std::string converge_csv(const ConvergenceReport& r) {
    std::ostringstream out;
    out << "f,n,weakGap,strongGap\n";
    for (const auto& row : r.rows)
        out << row.f_label << ',' << row.n << ',' << num_str(row.weak_gap) << ','
            << num_str(row.strong_gap) << '\n';
    return out.str();
}

} // namespace hrlab
