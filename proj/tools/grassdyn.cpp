// grassdyn: command-line front end for the supercyclicity toolkit.
//
// Exit codes: 0 pass, 1 verdict failure, 2 input error, 3 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "grassdyn/delta.hpp"
#include "grassdyn/io.hpp"
#include "grassdyn/orbit.hpp"
#include "grassdyn/recipes.hpp"
#include "grassdyn/reduction.hpp"
#include "grassdyn/rng.hpp"
#include "grassdyn/structure.hpp"
#include "grassdyn/version.hpp"

namespace {

using grassdyn::json;

int resolve_threads(int requested) {
    int n = requested;
    if (n <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        n = hw ? static_cast<int>(std::min(hw, 8u)) : 1;
    }
    if (const char* cap = std::getenv("GRASSDYN_THREADS")) {
        const int c = std::atoi(cap);
        if (c >= 1) n = std::min(n, c);
    }
    return n;
}

void emit(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << std::endl;
    } else {
        std::ofstream out(out_path);
        if (!out) throw grassdyn::parse_error("cannot write '" + out_path + "'");
        out << report.dump(2) << std::endl;
    }
}

json make_report(json config, json verdicts, json payload, double seconds) {
    json rep;
    rep["version"] = grassdyn::kVersion;
    rep["config"] = std::move(config);
    rep["verdicts"] = std::move(verdicts);
    rep["payload"] = std::move(payload);
    rep["timings"] = {{"seconds", seconds}};
    return rep;
}

/// Unwraps a whole-run report down to its payload, so the output of one
/// command can feed the next directly.
const json& unwrap_payload(const json& j) {
    if (j.is_object() && j.contains("payload") && j["payload"].is_object()) return j["payload"];
    return j;
}

/// Operator inputs may be a Jordan structure JSON (bare or inside a report),
/// a matrix JSON, or a CSV matrix.
grassdyn::JordanStructure load_structure_or_recover(const std::string& path, double tol) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        return grassdyn::recover_structure(grassdyn::load_matrix(path), tol);
    const std::string text = grassdyn::read_file(path);
    const json doc = grassdyn::parse_json(text, path);
    const json& j = unwrap_payload(doc);
    if (j.is_object() && j.contains("blocks")) return grassdyn::structure_from_json(j, path);
    return grassdyn::recover_structure(grassdyn::matrix_from_json(j, path), tol);
}

std::vector<double> parse_csv_doubles(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string cell;
    while (std::getline(is, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw grassdyn::parse_error(what + ": not a number: '" + cell + "'");
        }
    }
    if (out.empty()) throw grassdyn::parse_error(what + ": empty list");
    return out;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

/// When the operator is visibly a Jordan form with rotation blocks, record
/// the angles and flag the ones that look rationally dependent with pi:
/// density evidence from such operators should not be trusted.
void annotate_rotation_angles(json& payload, const grassdyn::Matrix& t) {
    std::vector<grassdyn::BlockSpec> layout;
    try {
        layout = grassdyn::jordan_layout_of(t);
    } catch (const grassdyn::invalid_input&) {
        return; // not in form; nothing to annotate
    }
    std::vector<double> angles;
    for (const auto& b : layout)
        if (b.kind == grassdyn::BlockKind::real) angles.push_back(b.angle);
    if (angles.empty()) return;
    payload["rotation_angles"] = angles;
    payload["angles_flagged_dependent"] = grassdyn::angle_independence_flags(angles);
}

int finish(const json& config, bool pass, json verdicts, json payload, const Timer& timer,
           const std::string& out_path) {
    verdicts["pass"] = pass;
    emit(make_report(config, std::move(verdicts), std::move(payload), timer.seconds()), out_path);
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    using namespace grassdyn;

    CLI::App app{"grassdyn: orbit density and supercyclicity bounds for operators on R^N"};
    app.set_version_flag("--version", std::string("grassdyn ") + kVersion);
    app.require_subcommand(1);

    std::string in_path, op_path, basis_path, subspace_path, out_path, plot_path, recipe_name;
    std::string angles_csv, phases_csv;
    double tol = 1e-8, reduce_tol = 1e-10, eps = 0.05, geps = 0.02, keps = 0.01, dual_tol = 1e-8;
    long long K = 100000, gK = 100000, kK = 10000000, imax = 200;
    int n_delta = 1;
    long long eval_at = 0;
    bool has_eval = false, list_recipes = false;
    int targets = 100, gtargets = 100, threads = 0;
    std::uint64_t seed = 42;

    auto* jordan_cmd = app.add_subcommand("jordan", "recover the real Jordan structure of T");
    jordan_cmd->add_option("--in", in_path, "operator matrix (.json or .csv)")->required();
    jordan_cmd->add_option("--tol", tol, "structure tolerance (default 1e-8)")
        ->check(CLI::PositiveNumber);
    jordan_cmd->add_option("--out", out_path, "write the report to this path");

    auto* bounds_cmd = app.add_subcommand("bounds", "supercyclicity lower bounds of T");
    bounds_cmd->add_option("--in", in_path, "operator matrix or structure JSON")->required();
    bounds_cmd->add_option("--tol", tol, "structure tolerance when recovering")
        ->check(CLI::PositiveNumber);
    bounds_cmd->add_option("--out", out_path, "write the report to this path");

    auto* reduce_cmd = app.add_subcommand("reduce", "staircase-reduce a basis against T");
    reduce_cmd->add_option("--op", op_path, "Jordan-form operator or structure JSON")->required();
    reduce_cmd->add_option("--basis", basis_path, "matrix whose columns are the basis")->required();
    reduce_cmd->add_option("--tol", reduce_tol, "rank tolerance (default 1e-10)")
        ->check(CLI::PositiveNumber);
    reduce_cmd->add_option("--out", out_path, "write the report to this path");

    auto* delta_cmd = app.add_subcommand("delta", "exact Delta_n polynomial");
    delta_cmd->add_option("--n", n_delta, "order (>= 1)")->required();
    auto* eval_opt = delta_cmd->add_option("--eval", eval_at, "also evaluate at integer i");
    delta_cmd->add_option("--out", out_path, "write the report to this path");

    auto* density_cmd = app.add_subcommand("density", "orbit density against point targets");
    density_cmd->add_option("--op", op_path, "operator matrix")->required();
    density_cmd->add_option("--subspace", subspace_path, "spanning columns of M")->required();
    density_cmd->add_option("--targets", targets, "number of random unit targets")
        ->check(CLI::PositiveNumber);
    density_cmd->add_option("--K", K, "iterate budget")->check(CLI::NonNegativeNumber);
    density_cmd->add_option("--eps", eps, "hit threshold")->check(CLI::PositiveNumber);
    density_cmd->add_option("--seed", seed, "target sampling seed");
    density_cmd->add_option("--threads", threads, "worker threads (0 = auto)");
    density_cmd->add_option("--plot-data", plot_path, "write per-iterate distance CSV here");
    density_cmd->add_option("--out", out_path, "write the report to this path");

    auto* gdensity_cmd = app.add_subcommand("grass-density", "orbit density on the Grassmannian");
    gdensity_cmd->add_option("--op", op_path, "operator matrix")->required();
    gdensity_cmd->add_option("--subspace", subspace_path, "spanning columns of M")->required();
    gdensity_cmd->add_option("--targets", gtargets, "number of random target subspaces")
        ->check(CLI::PositiveNumber);
    gdensity_cmd->add_option("--K", gK, "iterate budget")->check(CLI::NonNegativeNumber);
    gdensity_cmd->add_option("--eps", geps, "chordal hit threshold")->check(CLI::PositiveNumber);
    gdensity_cmd->add_option("--seed", seed, "target sampling seed");
    gdensity_cmd->add_option("--threads", threads, "worker threads (0 = auto)");
    gdensity_cmd->add_option("--plot-data", plot_path, "write per-iterate chordal CSV here");
    gdensity_cmd->add_option("--out", out_path, "write the report to this path");

    auto* kron_cmd = app.add_subcommand("kronecker", "simultaneous rotation approximation scan");
    kron_cmd->add_option("--angles", angles_csv, "comma-separated angles")->required();
    kron_cmd->add_option("--phases", phases_csv, "comma-separated target phases")->required();
    kron_cmd->add_option("--eps", keps, "circular distance bound")->check(CLI::PositiveNumber);
    kron_cmd->add_option("--K", kK, "iterate budget")->check(CLI::NonNegativeNumber);
    kron_cmd->add_option("--out", out_path, "write the report to this path");

    auto* duality_cmd = app.add_subcommand("duality", "orbit-complement duality residual");
    duality_cmd->add_option("--op", op_path, "operator matrix")->required();
    duality_cmd->add_option("--subspace", subspace_path, "spanning columns of M")->required();
    duality_cmd->add_option("--imax", imax, "iterates to check")->check(CLI::NonNegativeNumber);
    duality_cmd->add_option("--tol", dual_tol, "pass threshold on the worst residual")
        ->check(CLI::PositiveNumber);
    duality_cmd->add_option("--out", out_path, "write the report to this path");

    auto* inv_cmd = app.add_subcommand("invariants", "run the quick self-check battery");
    inv_cmd->add_option("--seed", seed, "randomisation seed");
    inv_cmd->add_option("--out", out_path, "write the report to this path");

    auto* recipe_cmd = app.add_subcommand("recipe", "run a bundled experiment");
    recipe_cmd->add_option("name", recipe_name, "recipe name");
    recipe_cmd->add_flag("--list", list_recipes, "list available recipes");
    recipe_cmd->add_option("--out", out_path, "write the report to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the message; the exit-code contract maps this to 2
        return 2;
    }
    has_eval = eval_opt->count() > 0;

    Timer timer;
    try {
        if (*jordan_cmd) {
            const json config = {{"command", "jordan"}, {"in", in_path}, {"tol", tol}};
            const auto s = recover_structure(load_matrix(in_path), tol);
            json verdicts = {{"residual_within_tolerance", true}};
            return finish(config, true, verdicts, structure_to_json(s), timer, out_path);
        }
        if (*bounds_cmd) {
            const json config = {{"command", "bounds"}, {"in", in_path}, {"tol", tol}};
            const auto s = load_structure_or_recover(in_path, tol);
            const auto rep = bounds(s);
            json payload = bound_report_to_json(rep);
            payload["N"] = s.ambient_dim;
            return finish(config, true, json::object(), payload, timer, out_path);
        }
        if (*reduce_cmd) {
            const json config = {{"command", "reduce"},
                                 {"op", op_path},
                                 {"basis", basis_path},
                                 {"tol", reduce_tol}};
            const std::string text = read_file(op_path);
            const json doc = parse_json(text, op_path);
            const json& j = unwrap_payload(doc);
            std::vector<BlockSpec> layout;
            if (j.is_object() && j.contains("blocks"))
                layout = structure_from_json(j, op_path).blocks;
            else
                layout = jordan_layout_of(matrix_from_json(j, op_path));
            const auto view = ChiView::of(layout);
            const Matrix basis_mat = load_matrix(basis_path);
            if (basis_mat.rows() != view.ambient())
                throw invalid_input("reduce: basis has " + std::to_string(basis_mat.rows()) +
                                    " rows, operator acts on R^" + std::to_string(view.ambient()));
            std::vector<Vec> basis;
            for (std::size_t c = 0; c < basis_mat.cols(); ++c) basis.push_back(basis_mat.col(c));
            const auto rb = reduce(view, basis, reduce_tol);
            const auto rep = verify_reduction(rb, view, basis);
            json verdicts = {{"properties", rep.pass}};
            return finish(config, rep.pass, verdicts, reduced_basis_to_json(rb, rep), timer,
                          out_path);
        }
        if (*delta_cmd) {
            json config = {{"command", "delta"}, {"n", n_delta}};
            const auto p = delta_poly(n_delta);
            json payload = {{"n", n_delta}, {"coefficients", p.coefficient_strings()}};
            if (has_eval) {
                config["eval"] = eval_at;
                payload["eval"] = {{"i", eval_at},
                                   {"value", p.evaluate(Rational(eval_at)).to_string()}};
            }
            return finish(config, true, json::object(), payload, timer, out_path);
        }
        if (*density_cmd) {
            const int nthreads = resolve_threads(threads);
            const json config = {{"command", "density"}, {"op", op_path},
                                 {"subspace", subspace_path}, {"targets", targets},
                                 {"K", K}, {"eps", eps}, {"seed", seed},
                                 {"threads", nthreads}};
            const Matrix t = load_matrix(op_path);
            const auto m = load_subspace(subspace_path);
            Rng rng(seed);
            std::vector<Vec> pts;
            for (int i = 0; i < targets; ++i) pts.push_back(rng.unit_vector(m.ambient()));
            DensityReport rep;
            if (plot_path.empty()) {
                rep = orbit_point_density(t, m, pts, K, eps, nthreads);
            } else {
                // trace mode: single pass that also streams (k, distance) rows
                std::ofstream trace(plot_path);
                if (!trace) throw parse_error("cannot write '" + plot_path + "'");
                trace << "k";
                for (int i = 0; i < targets; ++i) trace << ",target" << i;
                trace << "\n";
                rep.targets = pts.size();
                rep.iterate_budget = K;
                rep.epsilon = eps;
                rep.per_target.assign(pts.size(), TargetOutcome{});
                Matrix frame = m.frame();
                for (long long k = 0; k <= K; ++k) {
                    if (k > 0) frame = grassdyn::detail::orbit_step(t, frame, k - 1);
                    trace << k;
                    for (std::size_t i = 0; i < pts.size(); ++i) {
                        const double d = norm2(project_out(frame, pts[i]));
                        trace << ',' << d;
                        if (k == 0 || d < rep.per_target[i].min_distance)
                            rep.per_target[i] = {d, k};
                    }
                    trace << "\n";
                }
                for (const auto& o : rep.per_target)
                    if (o.min_distance < eps) ++rep.hits;
            }
            json payload = density_report_to_json(rep);
            annotate_rotation_angles(payload, t);
            json verdicts = {{"all_targets_hit", rep.hits == rep.targets}};
            return finish(config, rep.hits == rep.targets, verdicts, std::move(payload), timer,
                          out_path);
        }
        if (*gdensity_cmd) {
            const int nthreads = resolve_threads(threads);
            const json config = {{"command", "grass-density"}, {"op", op_path},
                                 {"subspace", subspace_path}, {"targets", gtargets},
                                 {"K", gK}, {"eps", geps}, {"seed", seed},
                                 {"threads", nthreads}};
            const Matrix t = load_matrix(op_path);
            const auto m = load_subspace(subspace_path);
            Rng rng(seed);
            std::vector<Subspace> subs;
            for (int i = 0; i < gtargets; ++i)
                subs.push_back(Subspace::from_frame(rng.random_frame(m.ambient(), m.dim())));
            DensityReport rep;
            if (plot_path.empty()) {
                rep = orbit_grassmann_density(t, m, subs, gK, geps, nthreads);
            } else {
                std::ofstream trace(plot_path);
                if (!trace) throw parse_error("cannot write '" + plot_path + "'");
                trace << "k";
                for (int i = 0; i < gtargets; ++i) trace << ",target" << i;
                trace << "\n";
                rep.targets = subs.size();
                rep.iterate_budget = gK;
                rep.epsilon = geps;
                rep.per_target.assign(subs.size(), TargetOutcome{});
                Matrix frame = m.frame();
                for (long long k = 0; k <= gK; ++k) {
                    if (k > 0) frame = grassdyn::detail::orbit_step(t, frame, k - 1);
                    const auto cur = Subspace::from_frame(frame);
                    trace << k;
                    for (std::size_t i = 0; i < subs.size(); ++i) {
                        const double d = grassmann_distance(cur, subs[i]).chordal;
                        trace << ',' << d;
                        if (k == 0 || d < rep.per_target[i].min_distance)
                            rep.per_target[i] = {d, k};
                    }
                    trace << "\n";
                }
                for (const auto& o : rep.per_target)
                    if (o.min_distance < geps) ++rep.hits;
            }
            json payload = density_report_to_json(rep);
            annotate_rotation_angles(payload, t);
            json verdicts = {{"all_targets_hit", rep.hits == rep.targets}};
            return finish(config, rep.hits == rep.targets, verdicts, std::move(payload), timer,
                          out_path);
        }
        if (*kron_cmd) {
            const json config = {{"command", "kronecker"}, {"angles", angles_csv},
                                 {"phases", phases_csv}, {"eps", keps}, {"K", kK}};
            const auto angles = parse_csv_doubles(angles_csv, "--angles");
            const auto phases = parse_csv_doubles(phases_csv, "--phases");
            const auto res = kronecker_find(angles, phases, keps, kK);
            json payload = {{"found", res.found}, {"iterate", res.iterate},
                            {"errors", res.errors}};
            json verdicts = {{"witness_found", res.found}};
            return finish(config, res.found, verdicts, payload, timer, out_path);
        }
        if (*duality_cmd) {
            const json config = {{"command", "duality"}, {"op", op_path},
                                 {"subspace", subspace_path}, {"imax", imax},
                                 {"tol", dual_tol}};
            const Matrix t = load_matrix(op_path);
            const auto m = load_subspace(subspace_path);
            const auto dual = dual_operator(t);
            const double worst = duality_check(t, m, imax);
            json payload = {{"worst_chordal_residual", worst}, {"imax", imax},
                            {"operator_condition", dual.condition}};
            json verdicts = {{"residual_below_tol", worst < dual_tol}};
            return finish(config, worst < dual_tol, verdicts, payload, timer, out_path);
        }
        if (*inv_cmd) {
            const json config = {{"command", "invariants"}, {"seed", seed}};
            Rng rng(seed);
            json verdicts;
            bool all = true;
            auto record = [&](const char* name, bool ok) {
                verdicts[name] = ok;
                all = all && ok;
            };
            {
                bool ok = true;
                for (int i = 0; i < 1000; ++i) {
                    const Matrix r = rotation(rng.uniform(-40.0, 40.0));
                    ok = ok && (r.transpose() * r - Matrix::identity(2)).norm_max() < 1e-12;
                }
                record("rotation_orthogonal", ok);
            }
            {
                bool ok = true;
                for (int i = 0; i < 200; ++i) {
                    const std::size_t n = 3 + rng.below(5), d = 1 + rng.below(n - 1);
                    const auto a = Subspace::from_frame(rng.random_frame(n, d));
                    const auto b = Subspace::from_frame(rng.random_frame(n, d));
                    const auto c = Subspace::from_frame(rng.random_frame(n, d));
                    const double ab = grassmann_distance(a, b).chordal;
                    ok = ok && std::fabs(ab - grassmann_distance(b, a).chordal) < 1e-12;
                    ok = ok && ab <= grassmann_distance(a, c).chordal +
                                         grassmann_distance(c, b).chordal + 1e-12;
                }
                record("grassmann_metric", ok);
            }
            {
                bool ok = true;
                for (int i = 0; i < 100; ++i) {
                    const std::size_t n = 3 + rng.below(5), d = 1 + rng.below(n - 1);
                    const auto s = Subspace::from_frame(rng.random_frame(n, d));
                    ok = ok && grassmann_distance(complement(complement(s)), s).chordal < 1e-12;
                }
                record("complement_involution", ok);
            }
            {
                bool ok = true;
                Rational fact(1);
                for (int n = 1; n <= 25; ++n) {
                    fact = fact * Rational(n);
                    const auto d = delta_poly(n);
                    const Rational expect =
                        (n % 2 == 1) ? Rational(1) / fact : Rational(-1) / fact;
                    ok = ok && d.degree() == n && d.leading() == expect;
                }
                record("delta_law", ok);
            }
            {
                bool ok = true;
                for (int n = 2; n <= 30; ++n) {
                    const BigInt s = alternating_binomial_sum(n);
                    ok = ok && (n % 2 == 1 ? s.is_zero() : s == BigInt(2));
                }
                record("binomial_parity", ok);
            }
            {
                const Matrix t = example_operator({1.0, std::sqrt(2.0)}, false);
                const auto m = Subspace::span_of({unit_axis(4, 0), unit_axis(4, 2)});
                std::vector<Vec> pts;
                for (int i = 0; i < 5; ++i) pts.push_back(rng.unit_vector(4));
                const auto small = orbit_point_density(t, m, pts, 500, 0.05);
                const auto large = orbit_point_density(t, m, pts, 2000, 0.05);
                bool ok = true;
                for (std::size_t i = 0; i < pts.size(); ++i)
                    ok = ok &&
                         large.per_target[i].min_distance <= small.per_target[i].min_distance;
                record("density_monotone_in_budget", ok);
            }
            return finish(config, all, verdicts, json::object(), timer, out_path);
        }
        if (*recipe_cmd) {
            if (list_recipes) {
                json names = json::array();
                for (const auto& [k, v] : recipe_registry()) names.push_back(k);
                const json config = {{"command", "recipe"}, {"list", true}};
                return finish(config, true, json::object(), {{"recipes", names}}, timer, out_path);
            }
            if (recipe_name.empty())
                throw invalid_input("recipe: give a name or --list");
            const json config = {{"command", "recipe"}, {"name", recipe_name}};
            const auto res = run_recipe(recipe_name);
            json verdicts = {{res.name.c_str(), res.pass}};
            json payload = res.payload;
            payload["name"] = res.name;
            return finish(config, res.pass, verdicts, payload, timer, out_path);
        }
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    } catch (const invalid_input& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    } catch (const unsupported_structure& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    } catch (const modulus_zero& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    } catch (const invariance_violation& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    } catch (const singular_matrix& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    } catch (const rank_deficiency& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    } catch (const degenerate_orbit& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << std::endl;
        return 3;
    }
    return 3;
}
