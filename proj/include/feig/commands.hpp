// Subcommand cores behind the CLI: solve commands that produce result
// documents, and check commands that consume them.
//
// Each cmd_* function returns an exit code plus a structured document.  The
// documents are deliberately lean: a solve document records the canonical
// potential, the parameters, and per-solution scalars plus the wave-function
// samples.  The check commands rebuild whatever else they need (linearized
// flows, orbits, chords) from tau_star and the embedded potential, so a
// result file is a complete, self-contained record of a run.
//
// Exit codes: 0 success / all checks pass, 1 a requested check failed,
// 2 no verified solution, 3 positivity violation, 64 bad flags (CLI layer),
// 65 unreadable or schema-violating input.
//
// Determinism contract: identical inputs and flags give byte-identical
// documents.  Nothing below records wall-clock, hostnames, or thread counts,
// and the scan partitioning does not affect sample values.

#ifndef FEIG_COMMANDS_HPP
#define FEIG_COMMANDS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "feig/action.hpp"
#include "feig/box.hpp"
#include "feig/core.hpp"
#include "feig/cz.hpp"
#include "feig/dynamics.hpp"
#include "feig/potential.hpp"
#include "feig/ring.hpp"
#include "feig/verify.hpp"

namespace feig {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitNoSolution = 2;
inline constexpr int kExitPositivity = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitBadInput = 65;

struct CommandResult {
    int exit_code = kExitOk;
    nlohmann::ordered_json document;
    std::string message;
};

namespace detail {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json parse_document(const std::string& path) {
    try {
        return nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("document " + path + ": " + e.what());
    }
}

// Pull a typed field out of a result document, with the failing key named in
// the diagnostic so schema mismatches come back as exit 65 and not a crash.
template <class T>
inline T doc_field(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) throw parse_error("result document missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("result document field '" + key + "': " + e.what());
    }
}

inline PotentialSpec document_potential(const nlohmann::json& doc) {
    if (!doc.contains("potential"))
        throw parse_error("result document missing field 'potential'");
    return parse_potential(doc.at("potential").dump());
}

inline nlohmann::ordered_json verification_json(const VerificationReport& v) {
    nlohmann::ordered_json j;
    j["max_residual_rel"] = v.max_residual_rel;
    j["rms_residual_rel"] = v.rms_residual_rel;
    j["bc_pass"] = v.bc_pass;
    j["norm"] = v.norm;
    return j;
}

// psi as rows [coordinate, re, im]; the coordinate is the angle phi for ring
// profiles and the arclength fraction s for box profiles.
inline nlohmann::ordered_json psi_json(const EigenstateProfile& prof) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    if (prof.bc == BoundaryCondition::periodic) {
        const int K = static_cast<int>(prof.psi.size());
        for (int k = 0; k < K; ++k)
            rows.push_back({kTwoPi * k / K, prof.psi[static_cast<std::size_t>(k)].real(),
                            prof.psi[static_cast<std::size_t>(k)].imag()});
    } else {
        const int K = static_cast<int>(prof.psi.size()) - 1;
        for (int k = 0; k <= K; ++k)
            rows.push_back({static_cast<double>(k) / K,
                            prof.psi[static_cast<std::size_t>(k)].real(),
                            prof.psi[static_cast<std::size_t>(k)].imag()});
    }
    return rows;
}

inline EigenstateProfile profile_from_psi(const nlohmann::json& rows, double scale_r,
                                          double energy, BoundaryCondition bc) {
    EigenstateProfile prof;
    prof.R = scale_r;
    prof.energy = energy;
    prof.bc = bc;
    if (!rows.is_array() || rows.size() < 2)
        throw parse_error("result document field 'psi': expected an array of samples");
    prof.psi.reserve(rows.size());
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != 3)
            throw parse_error("result document field 'psi': each sample must be [t, re, im]");
        prof.psi.emplace_back(row.at(1).get<double>(), row.at(2).get<double>());
    }
    return prof;
}

inline nlohmann::ordered_json margin_json(const PotentialSpec& spec, double energy) {
    const PotentialRange range = potential_range(spec);
    nlohmann::ordered_json j;
    j["margin"] = energy - range.vmax;
    j["v_max"] = range.vmax;
    j["t_at_v_max"] = range.tmax;
    j["v_min"] = range.vmin;
    return j;
}

}  // namespace detail

// --threads beats the FLOER_EIG_THREADS environment variable beats the
// machine default (0, which the scan expands to hardware_concurrency).
inline int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("FLOER_EIG_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return 0;
}

struct RingCommand {
    std::string potential_path;
    double energy = 1.0;
    double c = 0.5;
    double tau_min = 0.1;
    double tau_max = 0.0;  // 0 = solver default 4 pi / sqrt(m0)
    int grid = 512;
    int threads = 0;
    bool adaptive = false;
    int profile_grid = 512;
    double residual_tol = 1e-4;
};

inline CommandResult cmd_ring(const RingCommand& opt) {
    CommandResult res;
    PotentialSpec spec;
    try {
        spec = parse_potential(detail::read_text_file(opt.potential_path));
    } catch (const parse_error& e) {
        res.exit_code = kExitBadInput;
        res.message = e.what();
        return res;
    }
    if (spec.domain != Domain::ring) {
        res.exit_code = kExitBadInput;
        res.message = "ring solve requires a ring-domain potential";
        return res;
    }

    HamiltonianParams par;
    par.energy = opt.energy;
    par.c = opt.c;

    nlohmann::ordered_json doc;
    doc["command"] = "ring";
    doc["schema"] = "feig.ring.v1";
    doc["energy"] = par.energy;
    doc["c"] = par.c;
    doc["scheme"] = opt.adaptive ? "adaptive" : "fixed";
    doc["scan_grid"] = opt.grid;
    doc["potential"] = emit_potential_json(spec);
    doc["positivity"] = detail::margin_json(spec, par.energy);

    const double margin = positivity_margin(spec, par.energy);
    if (!(margin > 0.0)) {
        res.exit_code = kExitPositivity;
        res.message = "positivity margin " + std::to_string(margin) +
                      " is not positive; E must exceed max V";
        doc["solutions"] = nlohmann::ordered_json::array();
        res.document = std::move(doc);
        return res;
    }

    RingOptions ropt;
    ropt.tau_min = opt.tau_min;
    ropt.tau_max = opt.tau_max;
    ropt.grid = opt.grid;
    ropt.threads = resolve_threads(opt.threads);
    ropt.scheme = opt.adaptive ? Scheme::adaptive : Scheme::fixed_step;
    ropt.profile_grid = opt.profile_grid;

    std::vector<RingSolution> sols;
    try {
        sols = solve_ring(par, spec, ropt);
    } catch (const positivity_error& e) {
        res.exit_code = kExitPositivity;
        res.message = e.what();
        doc["solutions"] = nlohmann::ordered_json::array();
        res.document = std::move(doc);
        return res;
    } catch (const numerical_error& e) {
        res.exit_code = kExitNoSolution;
        res.message = std::string("solver failed: ") + e.what();
        doc["solutions"] = nlohmann::ordered_json::array();
        res.document = std::move(doc);
        return res;
    }

    int verified = 0;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const RingSolution& s : sols) {
        const double raw_norm = l2_norm(s.eigenstate);
        const EigenstateProfile unit = normalize(s.eigenstate);
        const VerificationReport v = verify_profile(unit, spec);
        const bool ok = v.bc_pass && v.max_residual_rel <= opt.residual_tol;
        if (ok) ++verified;

        nlohmann::ordered_json e;
        e["tau_star"] = s.tau_star;
        e["radius"] = s.tau_star;  // r_E; the geometric circle radius is tau_star / (2 pi)
        e["trace_residual"] = s.trace_residual;
        e["cz_index"] = s.cz.index;
        e["degenerate"] = s.cz.degenerate;
        e["min_angle_rate"] = s.certificate.min_rate;
        e["monotone_certified"] = s.certificate.certified;
        e["real_profile"] = s.real_profile;
        e["confinement_radius"] = s.confinement;
        e["max_orbit_norm"] = s.orbit.max_norm();
        e["verified"] = ok;
        e["verification"] = detail::verification_json(v);
        e["normalization"] = raw_norm;
        e["psi"] = detail::psi_json(unit);
        arr.push_back(std::move(e));
    }
    doc["solutions"] = std::move(arr);
    res.document = std::move(doc);
    if (verified == 0) {
        res.exit_code = kExitNoSolution;
        res.message = sols.empty() ? "no periodic orbits found in the scan range"
                                   : "solutions found but none passed verification";
    } else {
        res.message = std::to_string(verified) + " verified solution(s)";
    }
    return res;
}

struct BoxCommand {
    std::string potential_path;
    double energy = 1.0;
    double c = 0.5;
    int k = 1;
    bool adaptive = false;
    int profile_grid = 512;
    double probe = 0.01;
    double residual_tol = 1e-4;
};

inline CommandResult cmd_box(const BoxCommand& opt) {
    CommandResult res;
    PotentialSpec spec;
    try {
        spec = parse_potential(detail::read_text_file(opt.potential_path));
    } catch (const parse_error& e) {
        res.exit_code = kExitBadInput;
        res.message = e.what();
        return res;
    }
    if (opt.k < 1) {
        res.exit_code = kExitUsage;
        res.message = "--k must be a positive integer";
        return res;
    }

    HamiltonianParams par;
    par.energy = opt.energy;
    par.c = opt.c;

    nlohmann::ordered_json doc;
    doc["command"] = "box";
    doc["schema"] = "feig.box.v1";
    doc["energy"] = par.energy;
    doc["c"] = par.c;
    doc["k"] = opt.k;
    doc["scheme"] = opt.adaptive ? "adaptive" : "fixed";
    doc["potential"] = emit_potential_json(spec);
    doc["positivity"] = detail::margin_json(spec, par.energy);

    const double margin = positivity_margin(spec, par.energy);
    if (!(margin > 0.0)) {
        res.exit_code = kExitPositivity;
        res.message = "positivity margin " + std::to_string(margin) +
                      " is not positive; E must exceed max V";
        doc["solutions"] = nlohmann::ordered_json::array();
        res.document = std::move(doc);
        return res;
    }

    BoxOptions bopt;
    bopt.profile_grid = opt.profile_grid;
    bopt.scheme = opt.adaptive ? Scheme::adaptive : Scheme::fixed_step;
    bopt.probe = opt.probe;

    BoxSolution sol;
    try {
        sol = solve_box(par, spec, opt.k, bopt);
    } catch (const positivity_error& e) {
        res.exit_code = kExitPositivity;
        res.message = e.what();
        doc["solutions"] = nlohmann::ordered_json::array();
        res.document = std::move(doc);
        return res;
    } catch (const numerical_error& e) {
        res.exit_code = kExitNoSolution;
        res.message = std::string("solver failed: ") + e.what();
        doc["solutions"] = nlohmann::ordered_json::array();
        res.document = std::move(doc);
        return res;
    }

    const double raw_norm = l2_norm(sol.eigenstate);
    const EigenstateProfile unit = normalize(sol.eigenstate);
    const VerificationReport v = verify_profile(unit, spec);
    const bool ok = v.bc_pass && v.max_residual_rel <= opt.residual_tol;

    nlohmann::ordered_json e;
    e["tau_star"] = sol.tau_star;
    e["length"] = sol.tau_star;  // l_E
    e["endpoint_residual"] = sol.endpoint_residual;
    e["chord_index"] = sol.index.index;
    e["doubled_index"] = sol.index.doubled.index;
    e["zero_count"] = sol.zero_count;
    e["junction_residual"] = sol.doubled.junction_residual;
    e["closure_residual"] = sol.doubled.closure_residual;
    e["verified"] = ok;
    e["verification"] = detail::verification_json(v);
    e["normalization"] = raw_norm;
    e["psi"] = detail::psi_json(unit);
    doc["solutions"] = nlohmann::ordered_json::array({std::move(e)});
    res.document = std::move(doc);
    res.exit_code = ok ? kExitOk : kExitNoSolution;
    if (!ok) res.message = "chord found but verification failed";
    else res.message = "verified chord k=" + std::to_string(opt.k);
    return res;
}

struct CzCommand {
    std::string document_path;
    double probe = 0.01;
};

// Recompute indices for every solution in a prior result document and compare
// against what the document recorded; also certify angle monotonicity.
inline CommandResult cmd_cz(const CzCommand& opt) {
    CommandResult res;
    nlohmann::ordered_json doc;
    doc["command"] = "cz";
    doc["schema"] = "feig.cz.v1";
    try {
        const nlohmann::json input = detail::parse_document(opt.document_path);
        const std::string kind = detail::doc_field<std::string>(input, "command");
        if (kind != "ring" && kind != "box")
            throw parse_error("expected a ring or box result document, got command '" + kind +
                              "'");
        const PotentialSpec spec = detail::document_potential(input);
        HamiltonianParams par;
        par.energy = detail::doc_field<double>(input, "energy");
        par.c = detail::doc_field<double>(input, "c");
        doc["source"] = kind;
        doc["energy"] = par.energy;
        doc["c"] = par.c;

        if (!input.contains("solutions") || !input.at("solutions").is_array())
            throw parse_error("result document missing field 'solutions'");

        bool all_ok = true;
        nlohmann::ordered_json reports = nlohmann::ordered_json::array();
        auto stiff = [&](double t) { return par.energy - evaluate_potential(spec, t); };
        for (const auto& s : input.at("solutions")) {
            const double tau = detail::doc_field<double>(s, "tau_star");
            nlohmann::ordered_json r;
            r["tau_star"] = tau;
            if (kind == "ring") {
                const TrackedFlow tracked = track_angles_refined(
                    stiff, par.planes, tau, default_steps(par, spec, tau));
                const CzReport cz = cz_index(tracked.flow);
                const HessianPath hess = hessian_path(par, spec, tau, tracked.flow.steps());
                const MonotonicityCertificate cert =
                    monotonicity_certificate(tracked.flow, hess);
                const long documented = detail::doc_field<long>(s, "cz_index");
                const bool deg_doc = detail::doc_field<bool>(s, "degenerate");
                const bool match =
                    cz.index == documented && cz.degenerate == deg_doc && cert.certified;
                r["index"] = cz.index;
                r["degenerate"] = cz.degenerate;
                r["per_block_angles"] = cz.final_angles;
                r["min_angle_rate"] = cert.min_rate;
                r["certified"] = cert.certified;
                r["documented_index"] = documented;
                r["match"] = match;
                all_ok = all_ok && match;
            } else {
                const ChordIndexReport rep = chord_index(par, spec, tau, opt.probe);
                const long documented = detail::doc_field<long>(s, "chord_index");
                // certificate for the doubled probe flow the index came from
                const double full = 2.0 * tau;
                const double trunc = full - 2.0 * opt.probe;
                auto dstiff = [&](double t) {
                    return par.energy - evaluate_potential(spec, doubled_time(t * trunc / full));
                };
                const double stiff_max =
                    par.energy - potential_range(spec).vmin;
                const int steps = 2 * static_cast<int>(std::ceil(
                                          50.0 * trunc * std::sqrt(std::max(1.0, stiff_max))));
                const TrackedFlow tracked =
                    track_angles_refined(dstiff, par.planes, trunc, steps);
                const HessianPath hess =
                    hessian_path_profile(dstiff, trunc, tracked.flow.steps());
                const MonotonicityCertificate cert =
                    monotonicity_certificate(tracked.flow, hess);
                const bool match = rep.index == documented &&
                                   rep.doubled.index % 2 == 0 && cert.certified;
                r["index"] = rep.index;
                r["degenerate"] = rep.doubled.degenerate;
                r["per_block_angles"] = rep.doubled.final_angles;
                r["min_angle_rate"] = cert.min_rate;
                r["certified"] = cert.certified;
                r["doubled_index"] = rep.doubled.index;
                r["documented_index"] = documented;
                r["match"] = match;
                all_ok = all_ok && match;
            }
            reports.push_back(std::move(r));
        }
        doc["reports"] = std::move(reports);
        res.document = std::move(doc);
        res.exit_code = all_ok ? kExitOk : kExitCheckFailed;
        res.message = all_ok ? "all indices match" : "index mismatch or failed certificate";
    } catch (const parse_error& e) {
        res.exit_code = kExitBadInput;
        res.message = e.what();
    }
    return res;
}

struct ActionCommand {
    std::string document_path;
    int segments = 256;
    double epsilon = 1e-2;    // multiplier-bound gradient threshold
    double gap_tol = 1e-5;    // action-period relative gap
    double newton_tol = 1e-10;
    int max_iter = 50;
    std::string flow_csv_path;  // optional descent-flow log
    double flow_smax = 0.01;
    double flow_step = 0.0;  // 0 = default 1e-3 / N
};

// Rebuild each documented solution as a trajectory, resample it into a
// discretized loop, Newton-refine to a discrete critical point, and check
// the action-period identity plus the multiplier bound on every iterate.
inline CommandResult cmd_action(const ActionCommand& opt) {
    CommandResult res;
    nlohmann::ordered_json doc;
    doc["command"] = "action";
    doc["schema"] = "feig.action.v1";
    try {
        const nlohmann::json input = detail::parse_document(opt.document_path);
        const std::string kind = detail::doc_field<std::string>(input, "command");
        if (kind != "ring" && kind != "box")
            throw parse_error("expected a ring or box result document, got command '" + kind +
                              "'");
        const PotentialSpec spec = detail::document_potential(input);
        HamiltonianParams par;
        par.energy = detail::doc_field<double>(input, "energy");
        par.c = detail::doc_field<double>(input, "c");
        doc["source"] = kind;
        doc["energy"] = par.energy;
        doc["c"] = par.c;
        doc["segments"] = opt.segments;

        if (!input.contains("solutions") || !input.at("solutions").is_array())
            throw parse_error("result document missing field 'solutions'");

        bool all_ok = true;
        bool wrote_flow = false;
        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        for (const auto& s : input.at("solutions")) {
            const double tau = detail::doc_field<double>(s, "tau_star");
            const int base = default_steps(par, spec, tau);
            const int steps =
                opt.segments * std::max(1, (base + opt.segments - 1) / opt.segments);
            const Trajectory traj = kind == "ring"
                                        ? build_periodic_orbit(par, spec, tau, steps)
                                        : build_chord(par, spec, tau, steps);
            const DiscretizedLoop seed = loop_from_trajectory(traj, opt.segments);

            if (!opt.flow_csv_path.empty() && !wrote_flow) {
                const FlowLineResult fl =
                    flow_line(par, spec, seed, opt.flow_smax, opt.flow_step);
                std::ofstream out(opt.flow_csv_path, std::ios::binary);
                if (!out) throw parse_error("cannot open file: " + opt.flow_csv_path);
                out << "s,action,grad_norm,eta\n";
                out << std::setprecision(17);
                for (const auto& pt : fl.samples)
                    out << pt.s << ',' << pt.report.action << ',' << pt.report.grad_norm << ','
                        << pt.report.eta << '\n';
                wrote_flow = true;
            }

            const NewtonReport newton =
                newton_refine(par, spec, seed, opt.newton_tol, opt.max_iter);
            const ActionPeriodCheck period = check_action_period(par, spec, newton.loop);
            bool multiplier_holds = true;
            double worst_margin = 0.0;
            for (const DiscretizedLoop& it : newton.iterates) {
                const MultiplierBound mb = check_multiplier_bound(par, spec, it, opt.epsilon);
                multiplier_holds = multiplier_holds && mb.holds;
                if (!mb.vacuous)
                    worst_margin = std::max(worst_margin, mb.eta_abs / mb.bound);
            }
            const MultiplierBound mb_final =
                check_multiplier_bound(par, spec, newton.loop, opt.epsilon);
            const bool ok = period.rel_gap <= opt.gap_tol && multiplier_holds;
            all_ok = all_ok && ok;

            nlohmann::ordered_json e;
            e["tau_star"] = tau;
            e["eta"] = newton.loop.eta;
            e["action"] = period.action;
            e["eta_c"] = period.eta_c;
            e["rel_gap"] = period.rel_gap;
            e["grad_norm"] = newton.grad_norm;
            e["newton_iterations"] = newton.iterations;
            nlohmann::ordered_json m;
            m["epsilon"] = mb_final.epsilon;
            m["alpha"] = mb_final.alpha;
            m["c_lambda"] = mb_final.c_lambda;
            m["eta_abs"] = mb_final.eta_abs;
            m["bound"] = mb_final.bound;
            m["holds_on_all_iterates"] = multiplier_holds;
            m["worst_eta_over_bound"] = worst_margin;
            e["multiplier"] = std::move(m);
            e["pass"] = ok;
            checks.push_back(std::move(e));
        }
        doc["checks"] = std::move(checks);
        res.document = std::move(doc);
        res.exit_code = all_ok ? kExitOk : kExitCheckFailed;
        res.message = all_ok ? "action-period identity and multiplier bound hold"
                             : "action check failed";
    } catch (const parse_error& e) {
        res.exit_code = kExitBadInput;
        res.message = e.what();
    } catch (const numerical_error& e) {
        res.exit_code = kExitCheckFailed;
        res.message = std::string("action check failed: ") + e.what();
    }
    return res;
}

struct VerifyCommand {
    std::string document_path;
    double residual_tol = 1e-4;
    double norm_tol = 1e-6;
};

// Re-verify the wave-function samples stored in a result document, from the
// samples alone: finite-difference residual, boundary behavior, and norm.
// A corrupted or hand-edited document fails here even though it parses.
inline CommandResult cmd_verify(const VerifyCommand& opt) {
    CommandResult res;
    nlohmann::ordered_json doc;
    doc["command"] = "verify";
    doc["schema"] = "feig.verify.v1";
    try {
        const nlohmann::json input = detail::parse_document(opt.document_path);
        const std::string kind = detail::doc_field<std::string>(input, "command");
        if (kind != "ring" && kind != "box")
            throw parse_error("expected a ring or box result document, got command '" + kind +
                              "'");
        const PotentialSpec spec = detail::document_potential(input);
        const double energy = detail::doc_field<double>(input, "energy");
        doc["source"] = kind;
        doc["energy"] = energy;

        if (!input.contains("solutions") || !input.at("solutions").is_array())
            throw parse_error("result document missing field 'solutions'");

        bool all_ok = true;
        nlohmann::ordered_json reports = nlohmann::ordered_json::array();
        for (const auto& s : input.at("solutions")) {
            const double tau = detail::doc_field<double>(s, "tau_star");
            if (!s.contains("psi"))
                throw parse_error("result document missing field 'psi'");
            const EigenstateProfile prof =
                kind == "ring"
                    ? detail::profile_from_psi(s.at("psi"), tau / kTwoPi, energy,
                                               BoundaryCondition::periodic)
                    : detail::profile_from_psi(s.at("psi"), tau, energy,
                                               BoundaryCondition::dirichlet);
            const VerificationReport v = verify_profile(prof, spec);
            const bool ok = v.bc_pass && v.max_residual_rel <= opt.residual_tol &&
                            std::abs(v.norm - 1.0) <= opt.norm_tol;
            all_ok = all_ok && ok;
            nlohmann::ordered_json r;
            r["tau_star"] = tau;
            r["max_residual_rel"] = v.max_residual_rel;
            r["rms_residual_rel"] = v.rms_residual_rel;
            r["bc_pass"] = v.bc_pass;
            r["norm"] = v.norm;
            r["pass"] = ok;
            reports.push_back(std::move(r));
        }
        doc["reports"] = std::move(reports);
        res.document = std::move(doc);
        res.exit_code = all_ok ? kExitOk : kExitCheckFailed;
        res.message = all_ok ? "all profiles verified" : "verification failed";
    } catch (const parse_error& e) {
        res.exit_code = kExitBadInput;
        res.message = e.what();
    }
    return res;
}

inline std::string document_text(const CommandResult& res) {
    return res.document.dump(2) + "\n";
}

}  // namespace feig

#endif  // FEIG_COMMANDS_HPP
