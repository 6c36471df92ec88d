#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "feig/commands.hpp"
#include "feig/core.hpp"

using namespace feig;

namespace {

// Each test talks to the command layer the way the CLI does: through files.
std::string write_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    REQUIRE(static_cast<bool>(out));
    out << text;
    return path.string();
}

const char* kFreeRingJson = R"({"kind": "constant", "value": 0.0, "domain": "ring"})";
const char* kFreeBoxJson = R"({"kind": "constant", "value": 0.0, "domain": "box"})";
const char* kMathieuRingJson =
    R"({"kind": "fourier", "a0": 0.3, "cos": [0.1], "sin": [], "domain": "ring"})";
const char* kHighRingJson = R"({"kind": "constant", "value": 0.3, "domain": "ring"})";
const char* kHighBoxJson = R"({"kind": "constant", "value": 0.3, "domain": "box"})";

}  // namespace

TEST_CASE("cmd_ring solves the free ring and emits a verified document") {
    RingCommand cmd;
    cmd.potential_path = write_file("feig_cmd_free_ring.json", kFreeRingJson);

    const CommandResult res = cmd_ring(cmd);
    CHECK(res.exit_code == kExitOk);
    CHECK(res.message == "1 verified solution(s)");

    const auto& doc = res.document;
    CHECK(doc.at("command").get<std::string>() == "ring");
    CHECK(doc.at("schema").get<std::string>() == "feig.ring.v1");
    CHECK(doc.at("scheme").get<std::string>() == "fixed");
    CHECK(doc.at("scan_grid").get<int>() == 512);
    CHECK(doc.at("positivity").at("margin").get<double>() == 1.0);

    const auto& sols = doc.at("solutions");
    REQUIRE(sols.size() == 1);
    const auto& sol = sols.at(0);
    const double tau = sol.at("tau_star").get<double>();
    CHECK(tau == doctest::Approx(kTwoPi).epsilon(1e-7));
    CHECK(sol.at("radius").get<double>() == tau);  // r_E; geometric radius is tau / 2 pi
    CHECK(sol.at("cz_index").get<long>() == 4);
    CHECK(sol.at("degenerate").get<bool>());
    CHECK(sol.at("monotone_certified").get<bool>());
    CHECK_FALSE(sol.at("real_profile").get<bool>());
    CHECK(sol.at("verified").get<bool>());
    CHECK(sol.at("verification").at("bc_pass").get<bool>());
    CHECK(sol.at("verification").at("norm").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.at("max_orbit_norm").get<double>() <=
          sol.at("confinement_radius").get<double>());

    // |psi| = sqrt(c / quadratic mean) = 1 / sqrt(2), so the raw norm over a
    // circle of radius tau / 2 pi is sqrt(tau / 2) = sqrt(pi).
    CHECK(sol.at("normalization").get<double>() == doctest::Approx(std::sqrt(kPi)).epsilon(1e-8));

    const auto& psi = sol.at("psi");
    REQUIRE(psi.size() == 512);
    REQUIRE(psi.at(0).size() == 3);
    CHECK(psi.at(0).at(0).get<double>() == 0.0);
    CHECK(psi.at(256).at(0).get<double>() == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("solve documents are byte-identical across reruns and thread counts") {
    RingCommand ring;
    ring.potential_path = write_file("feig_cmd_free_ring.json", kFreeRingJson);

    const std::string once = document_text(cmd_ring(ring));
    const std::string twice = document_text(cmd_ring(ring));
    CHECK(once == twice);

    ring.threads = 1;
    const std::string serial = document_text(cmd_ring(ring));
    ring.threads = 2;
    const std::string parallel = document_text(cmd_ring(ring));
    CHECK(serial == once);  // thread count is not part of the document
    CHECK(parallel == once);

    BoxCommand box;
    box.potential_path = write_file("feig_cmd_free_box.json", kFreeBoxJson);
    CHECK(document_text(cmd_box(box)) == document_text(cmd_box(box)));
}

TEST_CASE("cmd_box solves the free box at k = 4") {
    BoxCommand cmd;
    cmd.potential_path = write_file("feig_cmd_free_box.json", kFreeBoxJson);
    cmd.k = 4;

    const CommandResult res = cmd_box(cmd);
    CHECK(res.exit_code == kExitOk);
    CHECK(res.document.at("schema").get<std::string>() == "feig.box.v1");
    CHECK(res.document.at("k").get<int>() == 4);

    const auto& sols = res.document.at("solutions");
    REQUIRE(sols.size() == 1);
    const auto& sol = sols.at(0);
    const double tau = sol.at("tau_star").get<double>();
    CHECK(tau == doctest::Approx(4.0 * kPi).epsilon(1e-8));
    CHECK(sol.at("length").get<double>() == tau);
    CHECK(sol.at("zero_count").get<int>() == 3);
    CHECK(sol.at("chord_index").get<long>() == 7);
    CHECK(sol.at("doubled_index").get<long>() == 14);
    CHECK(sol.at("junction_residual").get<double>() <= 1e-6);
    CHECK(sol.at("verified").get<bool>());

    // normalized profile is sqrt(2) sin(4 pi s); row 64 sits at s = 1/8
    const auto& psi = sol.at("psi");
    REQUIRE(psi.size() == 513);
    CHECK(psi.at(64).at(0).get<double>() == 0.125);
    CHECK(psi.at(64).at(1).get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
    CHECK(psi.at(64).at(2).get<double>() == 0.0);  // single-plane planting: Im psi = 0
    CHECK(std::abs(psi.at(0).at(1).get<double>()) <= 1e-6);
    CHECK(std::abs(psi.at(512).at(1).get<double>()) <= 1e-6);
}

TEST_CASE("cmd_box accepts a ring-domain potential") {
    // V(t) only ever gets evaluated on [0, 1], where the two domains agree.
    BoxCommand cmd;
    cmd.potential_path = write_file("feig_cmd_mathieu_ring.json", kMathieuRingJson);
    cmd.k = 1;

    const CommandResult res = cmd_box(cmd);
    CHECK(res.exit_code == kExitOk);
    const auto& sol = res.document.at("solutions").at(0);
    CHECK(sol.at("tau_star").get<double>() ==
          doctest::Approx(3.6266003929758144).epsilon(1e-8));
    CHECK(sol.at("chord_index").get<long>() == 1);
    CHECK(sol.at("zero_count").get<int>() == 0);
    CHECK(sol.at("verified").get<bool>());
}

TEST_CASE("positivity failure exits with code 3 and an empty solution list") {
    RingCommand ring;
    ring.potential_path = write_file("feig_cmd_high_ring.json", kHighRingJson);
    ring.energy = 0.2;  // below max V = 0.3

    const CommandResult rr = cmd_ring(ring);
    CHECK(rr.exit_code == kExitPositivity);
    CHECK(rr.message.find("positivity") != std::string::npos);
    CHECK(rr.document.at("solutions").empty());
    CHECK(rr.document.at("positivity").at("margin").get<double>() ==
          doctest::Approx(-0.1).epsilon(1e-12));

    BoxCommand box;
    box.potential_path = write_file("feig_cmd_high_box.json", kHighBoxJson);
    box.energy = 0.2;
    const CommandResult br = cmd_box(box);
    CHECK(br.exit_code == kExitPositivity);
    CHECK(br.document.at("solutions").empty());
}

TEST_CASE("a scan window with no roots exits with code 2") {
    RingCommand cmd;
    cmd.potential_path = write_file("feig_cmd_free_ring.json", kFreeRingJson);
    cmd.tau_max = 1.0;  // first closed orbit sits at tau = 2 pi

    const CommandResult res = cmd_ring(cmd);
    CHECK(res.exit_code == kExitNoSolution);
    CHECK(res.message.find("no periodic orbits") != std::string::npos);
    CHECK(res.document.at("solutions").empty());
}

TEST_CASE("cz and verify commands check a mathieu ring document") {
    RingCommand ring;
    ring.potential_path = write_file("feig_cmd_mathieu_ring.json", kMathieuRingJson);
    const CommandResult solved = cmd_ring(ring);
    REQUIRE(solved.exit_code == kExitOk);
    REQUIRE(solved.document.at("solutions").size() == 4);
    const std::string doc_path =
        write_file("feig_cmd_mathieu_doc.json", document_text(solved));

    CzCommand cz;
    cz.document_path = doc_path;
    const CommandResult czr = cmd_cz(cz);
    CHECK(czr.exit_code == kExitOk);
    CHECK(czr.document.at("schema").get<std::string>() == "feig.cz.v1");
    CHECK(czr.document.at("source").get<std::string>() == "ring");
    const auto& reports = czr.document.at("reports");
    REQUIRE(reports.size() == 4);
    std::vector<long> indices;
    for (const auto& r : reports) {
        CHECK(r.at("match").get<bool>());
        CHECK(r.at("certified").get<bool>());
        CHECK(r.at("degenerate").get<bool>());  // trace-2 block on both planes
        CHECK(r.at("min_angle_rate").get<double>() > 0.0);
        CHECK(r.at("index").get<long>() == r.at("documented_index").get<long>());
        indices.push_back(r.at("index").get<long>());
    }
    CHECK(indices == std::vector<long>{3, 4, 7, 8});

    VerifyCommand ver;
    ver.document_path = doc_path;
    const CommandResult vr = cmd_verify(ver);
    CHECK(vr.exit_code == kExitOk);
    CHECK(vr.document.at("schema").get<std::string>() == "feig.verify.v1");
    REQUIRE(vr.document.at("reports").size() == 4);
    for (const auto& r : vr.document.at("reports")) {
        CHECK(r.at("pass").get<bool>());
        CHECK(r.at("norm").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    }

    // corrupt one interior sample; the document still parses but fails verify
    nlohmann::json tampered = nlohmann::json::parse(document_text(solved));
    auto& cell = tampered["solutions"][0]["psi"][7][1];
    cell = cell.get<double>() * 1.5;
    ver.document_path = write_file("feig_cmd_mathieu_bad.json", tampered.dump());
    const CommandResult bad = cmd_verify(ver);
    CHECK(bad.exit_code == kExitCheckFailed);
    CHECK_FALSE(bad.document.at("reports").at(0).at("pass").get<bool>());
}

TEST_CASE("cmd_action refines a free ring document and logs the descent flow") {
    RingCommand ring;
    ring.potential_path = write_file("feig_cmd_free_ring.json", kFreeRingJson);
    const CommandResult solved = cmd_ring(ring);
    REQUIRE(solved.exit_code == kExitOk);

    ActionCommand act;
    act.document_path = write_file("feig_cmd_free_doc.json", document_text(solved));
    act.flow_csv_path =
        (std::filesystem::temp_directory_path() / "feig_cmd_flow.csv").string();

    const CommandResult res = cmd_action(act);
    CHECK(res.exit_code == kExitOk);
    CHECK(res.document.at("schema").get<std::string>() == "feig.action.v1");
    CHECK(res.document.at("segments").get<int>() == 256);

    const auto& checks = res.document.at("checks");
    REQUIRE(checks.size() == 1);
    const auto& c = checks.at(0);
    CHECK(c.at("pass").get<bool>());
    CHECK(c.at("rel_gap").get<double>() <= 1e-8);
    CHECK(c.at("grad_norm").get<double>() <= 1e-10);
    CHECK(c.at("newton_iterations").get<int>() <= 12);
    // discrete critical eta at N = 256 on the free ring: 2 N tan(pi / N)
    const double eta = c.at("eta").get<double>();
    CHECK(eta == doctest::Approx(512.0 * std::tan(kPi / 256.0)).epsilon(1e-9));
    CHECK(c.at("eta_c").get<double>() == doctest::Approx(0.5 * eta).epsilon(1e-12));

    const auto& m = c.at("multiplier");
    CHECK(m.at("holds_on_all_iterates").get<bool>());
    CHECK(m.at("alpha").get<double>() == 2.0);  // 1/c dominates at epsilon = 1e-2
    CHECK(m.at("eta_abs").get<double>() == doctest::Approx(eta).epsilon(1e-12));
    CHECK(m.at("bound").get<double>() > m.at("eta_abs").get<double>());
    CHECK(m.at("worst_eta_over_bound").get<double>() < 1.0);

    std::ifstream csv(act.flow_csv_path);
    REQUIRE(static_cast<bool>(csv));
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "s,action,grad_norm,eta");
    REQUIRE(std::getline(csv, line));
    CHECK(line.substr(0, 2) == "0,");  // flow log starts at s = 0
    int rows = 1;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows >= 100);
}

TEST_CASE("bad inputs map to the documented exit codes") {
    CHECK(cmd_ring({.potential_path = "/nonexistent/feig.json"}).exit_code == kExitBadInput);
    CHECK(cmd_ring({.potential_path = "/nonexistent/feig.json"}).message.find("cannot open") !=
          std::string::npos);

    RingCommand ring;
    ring.potential_path = write_file("feig_cmd_free_box.json", kFreeBoxJson);
    const CommandResult wrong_domain = cmd_ring(ring);
    CHECK(wrong_domain.exit_code == kExitBadInput);
    CHECK(wrong_domain.message.find("ring-domain") != std::string::npos);

    BoxCommand box;
    box.potential_path = write_file("feig_cmd_free_box.json", kFreeBoxJson);
    box.k = 0;
    CHECK(cmd_box(box).exit_code == kExitUsage);

    CzCommand cz;
    cz.document_path = write_file("feig_cmd_not_json.json", "this is not json");
    CHECK(cmd_cz(cz).exit_code == kExitBadInput);
    cz.document_path = write_file("feig_cmd_wrong_kind.json", R"({"command": "verify"})");
    CHECK(cmd_cz(cz).exit_code == kExitBadInput);

    ActionCommand act;
    act.document_path = write_file(
        "feig_cmd_no_solutions.json",
        R"({"command": "ring", "energy": 1.0, "c": 0.5,
            "potential": {"kind": "constant", "value": 0.0, "domain": "ring"}})");
    const CommandResult no_sols = cmd_action(act);
    CHECK(no_sols.exit_code == kExitBadInput);
    CHECK(no_sols.message.find("solutions") != std::string::npos);

    VerifyCommand ver;
    ver.document_path = write_file(
        "feig_cmd_no_psi.json",
        R"({"command": "ring", "energy": 1.0, "c": 0.5,
            "potential": {"kind": "constant", "value": 0.0, "domain": "ring"},
            "solutions": [{"tau_star": 6.283185307179586}]})");
    const CommandResult no_psi = cmd_verify(ver);
    CHECK(no_psi.exit_code == kExitBadInput);
    CHECK(no_psi.message.find("psi") != std::string::npos);
}

TEST_CASE("thread resolution prefers the flag over the environment") {
    const char* old = std::getenv("FLOER_EIG_THREADS");
    const std::string saved = old ? old : "";

    setenv("FLOER_EIG_THREADS", "3", 1);
    CHECK(resolve_threads(0) == 3);
    CHECK(resolve_threads(2) == 2);  // explicit flag wins
    setenv("FLOER_EIG_THREADS", "abc", 1);
    CHECK(resolve_threads(0) == 0);
    setenv("FLOER_EIG_THREADS", "3abc", 1);
    CHECK(resolve_threads(0) == 0);  // trailing junk rejected
    setenv("FLOER_EIG_THREADS", "-2", 1);
    CHECK(resolve_threads(0) == 0);
    unsetenv("FLOER_EIG_THREADS");
    CHECK(resolve_threads(0) == 0);
    CHECK(resolve_threads(7) == 7);

    if (old) setenv("FLOER_EIG_THREADS", saved.c_str(), 1);
}
