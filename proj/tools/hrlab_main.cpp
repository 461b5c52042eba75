// hrlab: command-line driver exposing the verification and experiment
// routines as reproducible, seed-controlled commands. Identical invocations
// produce byte-identical reports; the report never mentions paths, times or
// thread counts, only the parsed input and the results.
//
// Exit codes: 0 verdict produced, 1 input error, 2 mathematical property
// violation (the alarm outcome for CI property suites).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "hrlab/choquet.hpp"
#include "hrlab/convergence.hpp"
#include "hrlab/exponents.hpp"
#include "hrlab/inequalities.hpp"
#include "hrlab/json_io.hpp"
#include "hrlab/povm.hpp"
#include "hrlab/rng.hpp"

namespace {

using hrlab::Biexponent;
using hrlab::BoundaryOptions;
using hrlab::BoundaryResult;
using hrlab::Complex;
using hrlab::ComplexMatrix;
using hrlab::ErrorCode;
using hrlab::ExactPoint;
using hrlab::ExponentSet;
using hrlab::Json;
using hrlab::NormalOperator;
using hrlab::PointSet;
using hrlab::Povm;
using hrlab::Rng;
using hrlab::ToleranceConfig;
using hrlab::Turn;

struct Outcome {
    Json input_echo;
    Json result;
    bool property_ok = true;
    std::string csv;  // empty = csv not available for this command
};

[[noreturn]] void input_fail(const std::string& what) {
    hrlab::fail(ErrorCode::ParseError, what);
}

std::vector<int> ints_from(const Json& j, const std::string& who) {
    if (!j.is_array()) input_fail(who + " must be an array of integers");
    std::vector<int> out;
    for (const auto& e : j) out.push_back(hrlab::integer_from(e, who + " entry"));
    return out;
}

std::vector<double> doubles_from(const Json& j, const std::string& who) {
    if (!j.is_array()) input_fail(who + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : j) out.push_back(hrlab::number_from(e, who + " entry"));
    return out;
}

// Fan out fn(0..count-1) over up to `threads` workers. Results must go into
// per-index slots; the first exception in index order is rethrown, so the
// parallel and serial paths fail identically.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    threads = std::clamp(threads, 1, std::max(1, count));
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    errs[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (int i = 0; i < count; ++i)
        if (errs[static_cast<std::size_t>(i)])
            std::rethrow_exception(errs[static_cast<std::size_t>(i)]);
}

Outcome cmd_generates(const Json& in) {
    const PointSet x = hrlab::points_from(hrlab::member(in, "points"));
    const ExponentSet xs = hrlab::exponents_from(hrlab::member(in, "exponents"));
    Outcome out;
    out.input_echo = Json{{"points", hrlab::json_of(x)}, {"exponents", hrlab::json_of(xs)}};
    out.result = Json{{"generates", hrlab::generates(xs, x)}};
    return out;
}

Outcome cmd_verdict(const Json& in) {
    const PointSet x = hrlab::points_from(hrlab::member(in, "points"));
    const ExponentSet xs = hrlab::exponents_from(hrlab::member(in, "exponents"));
    Outcome out;
    out.input_echo = Json{{"points", hrlab::json_of(x)}, {"exponents", hrlab::json_of(xs)}};
    out.result = hrlab::json_of(hrlab::hyperrigid_sufficient(xs, x));
    return out;
}

Outcome cmd_spectrality(const Json& in, const ToleranceConfig& tol) {
    const ComplexMatrix a = hrlab::matrix_from(hrlab::member(in, "matrix"));
    const ExponentSet xs = hrlab::exponents_from(hrlab::member(in, "exponents"));
    std::optional<Povm> given;
    if (in.contains("povm")) given = hrlab::povm_from(in.at("povm"));

    const NormalOperator t = hrlab::spectral_decompose(a, tol);
    const Povm f = given ? *given : hrlab::spectral_measure_of(t, tol);
    hrlab::validate_povm(f, tol);

    Outcome out;
    out.input_echo = Json{{"matrix", hrlab::json_of(a)}, {"exponents", hrlab::json_of(xs)}};
    if (given) out.input_echo["povm"] = hrlab::json_of(*given);

    const double tnorm = hrlab::op_norm(t.matrix);
    const bool spectral = hrlab::is_spectral_measure_of(f, t, tol);
    Json rows = Json::array();
    bool moments_ok = true;
    double worst = 0.0;
    for (const auto& [m, n] : xs) {
        const ComplexMatrix target =
            hrlab::func_calc(t, [m = m, n = n](Complex z) {
                return std::pow(std::conj(z), m) * std::pow(z, n);
            });
        const double res = hrlab::op_norm(hrlab::moment_operator(f, m, n) - target);
        const double scale = std::max(1.0, std::pow(tnorm, m + n));
        worst = std::max(worst, res / scale);
        moments_ok = moments_ok && res <= 1e-10 * scale;
        rows.push_back(Json{{"m", m}, {"n", n}, {"residual", res}});
    }
    out.result = Json{{"spectral", spectral},
                      {"defect", hrlab::spectrality_defect(f)},
                      {"residuals", std::move(rows)},
                      {"max_scaled_residual", worst}};
    // A spectral measure of T must reproduce T's moments exactly; a spectral
    // F with a moment mismatch is the alarm.
    out.property_ok = !spectral || moments_ok;
    return out;
}

Outcome cmd_dilate(const Json& in, const ToleranceConfig& tol) {
    const Povm f = hrlab::povm_from(hrlab::member(in, "povm"));
    const bool minimal = in.value("minimal", false);
    hrlab::validate_povm(f, tol);
    const hrlab::Dilation d = hrlab::naimark_dilate(f, minimal, tol);

    double effect_scale = 1.0, transport = 0.0;
    for (const auto& e : f.effects) effect_scale = std::max(effect_scale, hrlab::op_norm(e));
    for (std::size_t j = 0; j < f.effects.size(); ++j)
        transport = std::max(
            transport, hrlab::op_norm(d.isometry.adjoint() * d.projections[j] * d.isometry -
                                      f.effects[j]));

    double top = 0.0;
    for (const Complex& z : f.support) top = std::max(top, std::abs(z));
    double moment_worst = 0.0;
    for (int m = 0; m <= 3; ++m)
        for (int n = 0; n <= 3; ++n) {
            const ComplexMatrix big = hrlab::func_calc(d.normal, [m, n](Complex z) {
                return std::pow(std::conj(z), m) * std::pow(z, n);
            });
            const double res = hrlab::op_norm(d.isometry.adjoint() * big * d.isometry -
                                              hrlab::moment_operator(f, m, n));
            moment_worst = std::max(res / std::max(1.0, std::pow(top, m + n)), moment_worst);
        }

    const bool spectral = hrlab::is_spectral(f, tol);
    const bool min_dim_ok = !(spectral && minimal) || d.big_dim == f.dim();

    Outcome out;
    out.input_echo = Json{{"povm", hrlab::json_of(f)}, {"minimal", minimal}};
    out.result = Json{{"dilation", hrlab::json_of(d)},
                      {"transport_residual", transport},
                      {"moment_residual", moment_worst},
                      {"spectral", spectral},
                      {"min_dim_ok", min_dim_ok}};
    out.property_ok =
        transport <= 1e-10 * effect_scale && moment_worst <= 1e-9 && min_dim_ok;
    return out;
}

Outcome cmd_choquet(const Json& in, const ToleranceConfig& tol, int parallel) {
    const PointSet x = hrlab::points_from(hrlab::member(in, "points"));
    const hrlab::MonomialSpace m = hrlab::exponents_from(hrlab::member(in, "monomials"));
    BoundaryOptions opts;
    opts.tol = tol;
    if (in.contains("boundary_tol"))
        opts.boundary_tol = hrlab::number_from(in.at("boundary_tol"), "boundary_tol");
    if (in.contains("require_separation")) {
        if (!in.at("require_separation").is_boolean())
            input_fail("require_separation must be a boolean");
        opts.require_separation = in.at("require_separation").get<bool>();
    }

    std::vector<BoundaryResult> rows(x.size());
    parallel_for(static_cast<int>(x.size()), parallel, [&](int i) {
        rows[static_cast<std::size_t>(i)] =
            hrlab::boundary_membership(x, m, x[static_cast<std::size_t>(i)], opts);
    });

    Json jrows = Json::array();
    double max_gap = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        max_gap = std::max(max_gap, rows[i].duality_gap);
        jrows.push_back(Json{{"lambda", hrlab::json_of(x[i])},
                             {"in_boundary", rows[i].in_boundary},
                             {"optimal_weight", rows[i].optimal_weight},
                             {"duality_gap", rows[i].duality_gap},
                             {"separates", rows[i].separates}});
    }

    Outcome out;
    out.input_echo = Json{{"points", hrlab::json_of(x)}, {"monomials", hrlab::json_of(m)}};
    if (in.contains("boundary_tol")) out.input_echo["boundary_tol"] = opts.boundary_tol;
    if (in.contains("require_separation"))
        out.input_echo["require_separation"] = opts.require_separation;
    out.result = Json{{"rows", std::move(jrows)}, {"max_duality_gap", max_gap}};
    out.property_ok = max_gap <= 1e-8;  // primal/dual agreement is the LP's self-check
    out.csv = hrlab::choquet_csv(x, rows);
    return out;
}

Outcome cmd_isnytos(const Json& in, const ToleranceConfig& tol) {
    hrlab::IsnytosParams params;
    params.d = ints_from(hrlab::member(in, "d"), "d");
    params.pairs = hrlab::exponents_from(hrlab::member(in, "pairs"));
    params.beta = doubles_from(hrlab::member(in, "beta"), "beta");

    const hrlab::IsnytosInstance inst = hrlab::isnytos_instance(params);
    const ExactPoint one(1.0, Turn(0, 1));
    const hrlab::RepresentingReport rep =
        hrlab::verify_representing(inst.mu, inst.monomials, one, tol);
    BoundaryOptions bopts;
    bopts.tol = tol;
    const BoundaryResult bd = hrlab::boundary_membership(inst.x, inst.monomials, one, bopts);
    const bool gen = hrlab::generates(inst.monomials, inst.x);

    Outcome out;
    out.input_echo = Json{{"d", params.d},
                          {"pairs", hrlab::json_of(params.pairs)},
                          {"beta", params.beta}};
    out.result = Json{{"instance", hrlab::json_of(inst)},
                      {"representing", hrlab::json_of(rep)},
                      {"boundary_at_one", hrlab::json_of(bd)},
                      {"generates", gen}};
    out.property_ok = rep.ok && !bd.in_boundary && bd.optimal_weight <= 1e-8 && gen;
    return out;
}

Outcome cmd_converge(const Json& in, const ToleranceConfig& tol) {
    const PointSet x = hrlab::points_from(hrlab::member(in, "points"));
    const hrlab::MonomialSpace m = hrlab::exponents_from(hrlab::member(in, "monomials"));
    const ExactPoint lambda0 = hrlab::point_from(hrlab::member(in, "lambda0"));
    const ExactPoint lambda = hrlab::point_from(hrlab::member(in, "lambda"));
    const int padding = hrlab::integer_from(hrlab::member(in, "padding"), "padding");
    const int n_max = in.contains("n_max")
                          ? hrlab::integer_from(in.at("n_max"), "n_max")
                          : -1;
    std::vector<Biexponent> mismatch = {{0, 1}, {1, 1}};
    if (in.contains("mismatch")) mismatch = hrlab::exponents_from(in.at("mismatch"));

    const hrlab::Main2Report r =
        hrlab::main2_experiment(x, m, lambda0, lambda, padding, n_max, mismatch, tol);

    Outcome out;
    out.input_echo = Json{{"points", hrlab::json_of(x)},
                          {"monomials", hrlab::json_of(m)},
                          {"lambda0", hrlab::json_of(lambda0)},
                          {"lambda", hrlab::json_of(lambda)},
                          {"padding", padding}};
    if (in.contains("n_max")) out.input_echo["n_max"] = n_max;
    if (in.contains("mismatch")) out.input_echo["mismatch"] = hrlab::json_of(mismatch);
    out.result = hrlab::json_of(r);
    out.property_ok = r.gaps.identity_residual <= 1e-12 && r.gaps.norm_bound_ok;
    out.csv = hrlab::converge_csv(r.gaps);
    return out;
}

Outcome cmd_search_scalar(const Json& in, std::uint64_t seed) {
    const int p = hrlab::integer_from(hrlab::member(in, "p"), "p");
    const int q = hrlab::integer_from(hrlab::member(in, "q"), "q");
    const int r = hrlab::integer_from(hrlab::member(in, "r"), "r");
    const double t = hrlab::number_from(hrlab::member(in, "t"), "t");
    const int budget = in.value("budget", 1000);

    const hrlab::ScalarSearchResult res = hrlab::scalar_counterexample_search(p, q, r, t, budget, seed);

    Outcome out;
    out.input_echo = Json{{"p", p}, {"q", q}, {"r", r}, {"t", t}, {"budget", budget}};
    out.result = hrlab::json_of(res);
    const double scale = std::max({1.0, std::pow(std::abs(t), p + q), std::pow(std::abs(t), 2 * r)});
    out.property_ok = !res.found ||
                      (!res.measure.is_dirac() && res.residual_low <= 1e-12 * scale &&
                       res.residual_high <= 1e-12 * scale);
    return out;
}

Outcome cmd_search_povm(const Json& in, std::uint64_t seed, const ToleranceConfig& tol) {
    const ComplexMatrix a = hrlab::matrix_from(hrlab::member(in, "matrix"));
    const ExponentSet xs = hrlab::exponents_from(hrlab::member(in, "exponents"));
    hrlab::PovmSearchOptions opts;
    opts.seed = seed;
    opts.budget = in.value("budget", opts.budget);
    opts.extra_support = in.value("extra_support", opts.extra_support);
    if (in.contains("non_spectral_floor"))
        opts.non_spectral_floor = hrlab::number_from(in.at("non_spectral_floor"), "non_spectral_floor");
    if (in.contains("witness_tol"))
        opts.witness_tol = hrlab::number_from(in.at("witness_tol"), "witness_tol");
    if (in.contains("seed_candidate"))
        opts.seed_candidate = hrlab::povm_from(in.at("seed_candidate"));

    const NormalOperator t = hrlab::spectral_decompose(a, tol);
    const hrlab::PovmSearchResult res = hrlab::povm_perturbation_search(t, xs, opts, tol);

    bool rigid_regime = false;
    try {
        rigid_regime = hrlab::sigma_condition(xs).has_value() && hrlab::gcd_diffs(xs) == 1;
    } catch (const hrlab::Error&) {
        rigid_regime = false;
    }

    Outcome out;
    out.input_echo = Json{{"matrix", hrlab::json_of(a)},
                          {"exponents", hrlab::json_of(xs)},
                          {"budget", opts.budget},
                          {"extra_support", opts.extra_support},
                          {"non_spectral_floor", opts.non_spectral_floor},
                          {"witness_tol", opts.witness_tol}};
    if (opts.seed_candidate) out.input_echo["seed_candidate"] = hrlab::json_of(*opts.seed_candidate);
    out.result = hrlab::json_of(res);
    out.result["rigid_regime"] = rigid_regime;
    // A non-spectral measure matching the moments in the rigid regime would
    // contradict the rigidity statement; that is the alarm outcome.
    out.property_ok = !(rigid_regime && res.witness.has_value());
    return out;
}

Outcome cmd_inequalities_selftest(const Json& in, std::uint64_t seed, int parallel,
                                  const ToleranceConfig& tol) {
    const int hansen_trials = in.value("hansen_trials", 100);
    const int lr_trials = in.value("lieb_ruskai_trials", 50);
    const int comm_trials = in.value("commutation_trials", 100);
    if (hansen_trials < 1 || lr_trials < 1 || comm_trials < 1)
        input_fail("trial counts must be positive");

    // Hansen power inequality on random contractions.
    std::vector<double> hgaps(static_cast<std::size_t>(hansen_trials));
    parallel_for(hansen_trials, parallel, [&](int i) {
        Rng rng(Rng::mix(seed, 1000 + static_cast<std::uint64_t>(i)));
        const Eigen::Index d = 2 + i % 3;
        ComplexMatrix g = rng.gaussian_matrix(d, d);
        ComplexMatrix a = g * g.adjoint();
        a /= std::max(1.0, hrlab::op_norm(a));
        ComplexMatrix tm = rng.gaussian_matrix(d, d);
        tm /= 1.1 * hrlab::op_norm(tm);
        const double s = 0.25 * (1 + i % 3);
        hgaps[static_cast<std::size_t>(i)] = hrlab::hansen_check(a, tm, s, tol).gap;
    });
    double hansen_min = 0.0;
    for (double gp : hgaps) hansen_min = std::min(hansen_min, gp);

    // Curated dichotomy: a projection commuting with A gives exact equality,
    // a tilted one a strict defect.
    ComplexMatrix a2 = ComplexMatrix::Zero(2, 2);
    a2(0, 0) = 1.0;
    a2(1, 1) = 4.0;
    ComplexMatrix p_comm = ComplexMatrix::Zero(2, 2);
    p_comm(0, 0) = 1.0;
    ComplexMatrix p_tilt = ComplexMatrix::Constant(2, 2, Complex(0.5, 0.0));
    const hrlab::HansenReport rep_comm = hrlab::hansen_check(a2, p_comm, 0.5, tol);
    const hrlab::HansenReport rep_tilt = hrlab::hansen_check(a2, p_tilt, 0.5, tol);
    const bool curated_ok = rep_comm.equality && !rep_tilt.equality &&
                            rep_tilt.diff_norm > 0.05 && rep_tilt.gap >= -1e-9;

    // Congruence-map Schwarz bound with a decreasing epsilon schedule.
    const std::vector<double> schedule = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::vector<double> lr_gaps(static_cast<std::size_t>(lr_trials));
    std::vector<char> lr_monotone(static_cast<std::size_t>(lr_trials));
    parallel_for(lr_trials, parallel, [&](int i) {
        Rng rng(Rng::mix(seed, 2000 + static_cast<std::uint64_t>(i)));
        const Eigen::Index d = 2 + i % 3;
        auto unit = [&] {
            ComplexMatrix g = rng.gaussian_matrix(d, d);
            return ComplexMatrix(g / hrlab::op_norm(g));
        };
        const ComplexMatrix r = unit();
        const ComplexMatrix av = unit();
        const ComplexMatrix bv = (i % 2 == 0) ? unit() : av;
        const hrlab::LiebRuskaiReport rep = hrlab::lieb_ruskai_check(r, av, bv, schedule, tol);
        lr_gaps[static_cast<std::size_t>(i)] = rep.final_gap;
        lr_monotone[static_cast<std::size_t>(i)] = rep.monotone ? 1 : 0;
    });
    double lr_min = 0.0;
    bool lr_all_monotone = true;
    for (std::size_t i = 0; i < lr_gaps.size(); ++i) {
        lr_min = std::min(lr_min, lr_gaps[i]);
        lr_all_monotone = lr_all_monotone && lr_monotone[i] == 1;
    }

    // Commutation equivalences: reducing and commuting constructions must
    // come out all-true, generic draws all-false; either way the families
    // agree internally.
    std::vector<char> agree(static_cast<std::size_t>(comm_trials));
    parallel_for(comm_trials, parallel, [&](int i) {
        Rng rng(Rng::mix(seed, 3000 + static_cast<std::uint64_t>(i)));
        const Eigen::Index d = 3 + i % 2;
        const Eigen::Index rank = 1 + i % (d - 1);
        hrlab::CommutationVerdict v;
        switch (i % 4) {
            case 0: {
                const ComplexMatrix tmat = rng.gaussian_matrix(d, d);
                const ComplexMatrix proj = rng.random_projection(d, rank);
                v = hrlab::projection_commutation_check(tmat, proj, {}, tol);
                break;
            }
            case 1: {
                const ComplexMatrix proj = rng.random_projection(d, rank);
                const ComplexMatrix g = rng.gaussian_matrix(d, d);
                const ComplexMatrix rest = ComplexMatrix::Identity(d, d) - proj;
                const ComplexMatrix tmat = proj * g * proj + rest * g * rest;
                v = hrlab::projection_commutation_check(tmat, proj, {}, tol);
                break;
            }
            case 2: {
                const NormalOperator nop = rng.random_normal(d);
                const ComplexMatrix proj = rng.random_projection(d, rank);
                v = hrlab::projection_commutation_check(nop.matrix, proj,
                                                        Biexponent{1, 2}, tol);
                break;
            }
            default: {
                const NormalOperator nop = rng.random_normal(d);
                const ComplexMatrix cols = nop.eigenbasis.leftCols(rank);
                const ComplexMatrix proj = cols * cols.adjoint();
                v = hrlab::projection_commutation_check(nop.matrix, proj,
                                                        Biexponent{1, 2}, tol);
                break;
            }
        }
        agree[static_cast<std::size_t>(i)] = v.equivalent ? 1 : 0;
    });
    int disagreements = 0;
    for (char c : agree)
        if (c == 0) ++disagreements;

    const bool hansen_ok = hansen_min >= -1e-9 && curated_ok;
    const bool lr_ok = lr_min >= -1e-9 && lr_all_monotone;
    const bool comm_ok = disagreements == 0;

    Outcome out;
    out.input_echo = Json{{"hansen_trials", hansen_trials},
                          {"lieb_ruskai_trials", lr_trials},
                          {"commutation_trials", comm_trials}};
    out.result = Json{{"hansen",
                       Json{{"trials", hansen_trials},
                            {"min_gap", hansen_min},
                            {"curated_commuting_equality", rep_comm.equality},
                            {"curated_tilted_defect", rep_tilt.diff_norm},
                            {"ok", hansen_ok}}},
                      {"lieb_ruskai",
                       Json{{"trials", lr_trials},
                            {"min_final_gap", lr_min},
                            {"all_monotone", lr_all_monotone},
                            {"ok", lr_ok}}},
                      {"commutation",
                       Json{{"trials", comm_trials},
                            {"disagreements", disagreements},
                            {"ok", comm_ok}}}};
    out.property_ok = hansen_ok && lr_ok && comm_ok;
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperrigidity lab: verification and experiment driver"};
    app.require_subcommand(1);

    std::string input_path;
    std::string format = "json";
    std::string out_path;
    std::uint64_t seed = 0;
    double tol_value = 0.0;
    int parallel = 1;

    app.add_option("--input", input_path, "input JSON file for the command");
    app.add_option("--seed", seed, "seed for randomized routines (default 0)");
    auto* tol_opt = app.add_option("--tol", tol_value, "uniform abs/rel tolerance override")
                        ->envname("HRLAB_TOL");
    app.add_option("--format", format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_option("--parallel", parallel, "worker threads for trial fan-out")
        ->check(CLI::PositiveNumber);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"generates", "exact point-separation test for a monomial family"},
        {"verdict", "sufficiency verdict for hyperrigidity of the family"},
        {"spectrality", "spectral measure vs operator moments of a normal matrix"},
        {"dilate", "dilate a measure to a spectral one on a bigger space"},
        {"choquet", "boundary membership sweep over every point of X"},
        {"isnytos", "orbit-measure instance: non-extreme point with generating monomials"},
        {"converge", "truncated-shift convergence experiment"},
        {"search-scalar", "non-point measure matching two power moments"},
        {"search-povm", "randomized search for a non-spectral moment match"},
        {"inequalities-selftest", "randomized inequality and equivalence suites"},
    };
    for (const auto& [name, desc] : commands) app.add_subcommand(name, desc)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        ToleranceConfig tol;
        if (tol_opt->count() > 0) {
            if (!(tol_value > 0.0)) input_fail("--tol must be a positive number");
            tol = ToleranceConfig::uniform(tol_value);
        }

        Json in = Json::object();
        if (!input_path.empty()) {
            std::ifstream f(input_path);
            if (!f) input_fail("cannot open input file '" + input_path + "'");
            try {
                in = Json::parse(f);
            } catch (const std::exception& e) {
                input_fail(std::string("input is not valid JSON: ") + e.what());
            }
        } else if (cmd != "inequalities-selftest") {
            input_fail("command '" + cmd + "' requires --input");
        }

        Outcome outcome;
        if (cmd == "generates") outcome = cmd_generates(in);
        else if (cmd == "verdict") outcome = cmd_verdict(in);
        else if (cmd == "spectrality") outcome = cmd_spectrality(in, tol);
        else if (cmd == "dilate") outcome = cmd_dilate(in, tol);
        else if (cmd == "choquet") outcome = cmd_choquet(in, tol, parallel);
        else if (cmd == "isnytos") outcome = cmd_isnytos(in, tol);
        else if (cmd == "converge") outcome = cmd_converge(in, tol);
        else if (cmd == "search-scalar") outcome = cmd_search_scalar(in, seed);
        else if (cmd == "search-povm") outcome = cmd_search_povm(in, seed, tol);
        else outcome = cmd_inequalities_selftest(in, seed, parallel, tol);

        std::string payload;
        if (format == "json") {
            Json report{{"command", cmd},
                        {"seed", seed},
                        {"tolerance", Json{{"abs", tol.abs_tol}, {"rel", tol.rel_tol}}},
                        {"input", outcome.input_echo},
                        {"result", outcome.result},
                        {"property_ok", outcome.property_ok}};
            payload = report.dump(2) + "\n";
        } else {
            if (outcome.csv.empty())
                input_fail("csv output is only available for choquet and converge");
            payload = outcome.csv;
        }

        if (out_path.empty()) {
            std::cout << payload;
        } else {
            std::ofstream o(out_path, std::ios::binary);
            if (!o) input_fail("cannot open output file '" + out_path + "'");
            o << payload;
        }
        return outcome.property_ok ? 0 : 2;
    } catch (const hrlab::Error& e) {
        std::cerr << hrlab::error_code_name(e.code()) << ": " << e.what() << " (command "
                  << cmd << ")\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << " (command " << cmd << ")\n";
        return 1;
    }
}
