// floer-eig: find energy-E eigenstates on the ring and in the box by solving
// for periodic orbits and Lagrangian chords of the associated time-dependent
// quadratic Hamiltonian, then check indices, action identities, and the
// Schrodinger residual of whatever was found.
//
// Subcommands: ring, box (solvers producing result documents), cz, action,
// verify (checks consuming prior result documents).  Documents go to stdout
// or --out; human-readable status goes to stderr.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "feig/commands.hpp"

namespace {

int finish(const feig::CommandResult& res, const std::string& out_path) {
    if (!res.document.is_null()) {
        const std::string text = feig::document_text(res);
        if (!out_path.empty()) {
            std::ofstream f(out_path, std::ios::binary);
            if (!f) {
                std::cerr << "cannot open output file: " << out_path << "\n";
                return feig::kExitBadInput;
            }
            f << text;
        } else {
            std::cout << text;
        }
    }
    if (!res.message.empty()) std::cerr << res.message << "\n";
    return res.exit_code;
}

bool parse_tau_range(const std::string& text, double& lo, double& hi) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return false;
    try {
        std::size_t used = 0;
        lo = std::stod(text.substr(0, colon), &used);
        if (used != colon) return false;
        hi = std::stod(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1) return false;
    } catch (const std::exception&) {
        return false;
    }
    return lo >= 0.0 && hi > lo;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"energy eigenstates from periodic orbits and Lagrangian chords"};
    app.require_subcommand(1);

    feig::RingCommand ring;
    std::string ring_out, ring_range, ring_scheme = "fixed";
    CLI::App* cmd_ring = app.add_subcommand("ring", "solve the periodic problem at energy E");
    cmd_ring->add_option("--potential", ring.potential_path, "potential document (JSON)")
        ->required();
    cmd_ring->add_option("--energy", ring.energy, "energy E")->required();
    cmd_ring->add_option("--c", ring.c, "action offset c > 0")->capture_default_str();
    cmd_ring->add_option("--tau-range", ring_range, "period scan range MIN:MAX");
    cmd_ring->add_option("--grid", ring.grid, "scan grid points")->capture_default_str();
    cmd_ring->add_option("--profile-grid", ring.profile_grid, "wave-function samples")
        ->capture_default_str();
    cmd_ring->add_option("--threads", ring.threads, "scan worker count (0 = auto)");
    cmd_ring->add_option("--scheme", ring_scheme, "integrator: fixed or adaptive")
        ->check(CLI::IsMember({"fixed", "adaptive"}))
        ->capture_default_str();
    cmd_ring->add_option("--residual-tol", ring.residual_tol, "verification residual gate")
        ->capture_default_str();
    cmd_ring->add_option("--out", ring_out, "write the result document here");

    feig::BoxCommand box;
    std::string box_out, box_scheme = "fixed";
    CLI::App* cmd_box = app.add_subcommand("box", "solve the Dirichlet problem at energy E");
    cmd_box->add_option("--potential", box.potential_path, "potential document (JSON)")
        ->required();
    cmd_box->add_option("--energy", box.energy, "energy E")->required();
    cmd_box->add_option("--c", box.c, "action offset c > 0")->capture_default_str();
    cmd_box->add_option("--k", box.k, "which chord: k-th Dirichlet solution")
        ->capture_default_str();
    cmd_box->add_option("--grid", box.profile_grid, "wave-function samples")
        ->capture_default_str();
    cmd_box->add_option("--scheme", box_scheme, "integrator: fixed or adaptive")
        ->check(CLI::IsMember({"fixed", "adaptive"}))
        ->capture_default_str();
    cmd_box->add_option("--probe", box.probe, "index probe offset")->capture_default_str();
    cmd_box->add_option("--residual-tol", box.residual_tol, "verification residual gate")
        ->capture_default_str();
    cmd_box->add_option("--out", box_out, "write the result document here");

    feig::CzCommand cz;
    std::string cz_out;
    CLI::App* cmd_cz = app.add_subcommand("cz", "recompute indices for a result document");
    cmd_cz->add_option("--input", cz.document_path, "ring or box result document")->required();
    cmd_cz->add_option("--probe", cz.probe, "chord index probe offset")->capture_default_str();
    cmd_cz->add_option("--out", cz_out, "write the index report here");

    feig::ActionCommand action;
    std::string action_out;
    CLI::App* cmd_action =
        app.add_subcommand("action", "action-period and multiplier checks for a document");
    cmd_action->add_option("--input", action.document_path, "ring or box result document")
        ->required();
    cmd_action->add_option("--segments", action.segments, "loop discretization N")
        ->capture_default_str();
    cmd_action->add_option("--epsilon", action.epsilon, "multiplier-bound gradient threshold")
        ->capture_default_str();
    cmd_action->add_option("--gap-tol", action.gap_tol, "action-period relative gap gate")
        ->capture_default_str();
    cmd_action->add_option("--newton-tol", action.newton_tol, "gradient norm target")
        ->capture_default_str();
    cmd_action->add_option("--max-iter", action.max_iter, "Newton iteration cap")
        ->capture_default_str();
    cmd_action->add_option("--flow-csv", action.flow_csv_path,
                           "write a descent flow-line log (CSV) for the first solution");
    cmd_action->add_option("--flow-smax", action.flow_smax, "flow-line duration")
        ->capture_default_str();
    cmd_action->add_option("--flow-step", action.flow_step, "flow-line step (0 = default)");
    cmd_action->add_option("--out", action_out, "write the action report here");

    feig::VerifyCommand verify;
    std::string verify_out;
    CLI::App* cmd_verify =
        app.add_subcommand("verify", "re-check the wave function stored in a document");
    cmd_verify->add_option("--input", verify.document_path, "ring or box result document")
        ->required();
    cmd_verify->add_option("--residual-tol", verify.residual_tol, "residual gate")
        ->capture_default_str();
    cmd_verify->add_option("--norm-tol", verify.norm_tol, "norm deviation gate")
        ->capture_default_str();
    cmd_verify->add_option("--out", verify_out, "write the verification report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return feig::kExitUsage;
    }

    if (cmd_ring->parsed()) {
        if (!ring_range.empty() && !parse_tau_range(ring_range, ring.tau_min, ring.tau_max)) {
            std::cerr << "--tau-range expects MIN:MAX with 0 <= MIN < MAX\n";
            return feig::kExitUsage;
        }
        ring.adaptive = ring_scheme == "adaptive";
        return finish(feig::cmd_ring(ring), ring_out);
    }
    if (cmd_box->parsed()) {
        box.adaptive = box_scheme == "adaptive";
        return finish(feig::cmd_box(box), box_out);
    }
    if (cmd_cz->parsed()) return finish(feig::cmd_cz(cz), cz_out);
    if (cmd_action->parsed()) return finish(feig::cmd_action(action), action_out);
    if (cmd_verify->parsed()) return finish(feig::cmd_verify(verify), verify_out);
    return feig::kExitUsage;
}
