#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "entwit/io.hpp"

using namespace entwit;
namespace fs = std::filesystem;

namespace {

const SystemDims kQubits({2, 2});

HermitianOperator flip_witness() {
    const Vector phi = bell_vector(BellState::PhiSinglet);
    return gamma(HermitianOperator(phi * phi.adjoint(), kQubits));
}

fs::path fixture_path(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "entwit-io-tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string write_operator(const std::string& name, const HermitianOperator& op) {
    fs::path p = fixture_path(name);
    std::ofstream out(p);
    out << operator_to_json(op).dump(2) << "\n";
    return p.string();
}

std::string write_text(const std::string& name, const std::string& text) {
    fs::path p = fixture_path(name);
    std::ofstream out(p);
    out << text;
    return p.string();
}

}  // namespace

TEST_CASE("operator documents round-trip") {
    HermitianOperator flip = flip_witness();
    nlohmann::json doc = operator_to_json(flip);
    CHECK(doc["dims"] == nlohmann::json({2, 2}));
    HermitianOperator back = operator_from_json(doc);
    CHECK((back.matrix() - flip.matrix()).norm() <= 1e-15);
    CHECK(back.dims() == flip.dims());

    // Through text as well.
    HermitianOperator reparsed = operator_from_json(nlohmann::json::parse(doc.dump()));
    CHECK((reparsed.matrix() - flip.matrix()).norm() <= 1e-15);

    HermitianOperator loaded =
        load_operator_file(write_operator("roundtrip.json", werner(0.37).op()));
    CHECK((loaded.matrix() - werner(0.37).matrix()).norm() <= 1e-15);
}

TEST_CASE("operator document error taxonomy") {
    CHECK_THROWS_AS(operator_from_json(nlohmann::json::array()), ParseError);
    CHECK_THROWS_AS(operator_from_json(nlohmann::json{{"dims", {2, 2}}}), ParseError);
    CHECK_THROWS_AS(operator_from_json(nlohmann::json{{"dims", "four"}, {"matrix", {}}}),
                    ParseError);

    nlohmann::json doc = operator_to_json(identity_operator(kQubits));
    doc["matrix"][0].erase(3);
    CHECK_THROWS_AS(operator_from_json(doc), ValidationError);

    nlohmann::json bad_entry = operator_to_json(identity_operator(kQubits));
    bad_entry["matrix"][0][0] = 1.0;
    CHECK_THROWS_AS(operator_from_json(bad_entry), ParseError);

    nlohmann::json non_herm = operator_to_json(identity_operator(kQubits));
    non_herm["matrix"][0][1] = {1.0, 0.0};
    CHECK_THROWS_AS(operator_from_json(non_herm), ValidationError);

    nlohmann::json wrong_dims = operator_to_json(identity_operator(kQubits));
    wrong_dims["dims"] = {2, 3};
    CHECK_THROWS_AS(operator_from_json(wrong_dims), DimensionError);

    CHECK_THROWS_AS(load_operator_file(write_text("garbage.json", "{not json")), ParseError);
    CHECK_THROWS_AS(read_file(fixture_path("missing.json").string()), ParseError);
}

TEST_CASE("fnv1a64 reference vectors") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64_hex("foobar") == "85944171f73967e8");
    CHECK(fnv1a64_hex("x").size() == 16);
}

TEST_CASE("exception to exit-code mapping") {
    CHECK(exit_code_for(ParseError("p")) == 2);
    CHECK(exit_code_for(ValidationError("v")) == 3);
    CHECK(exit_code_for(DimensionError("d")) == 3);
    CHECK(exit_code_for(PreconditionError("pc")) == 5);
    CHECK(exit_code_for(Error("e")) == 1);
    CHECK(exit_code_for(std::runtime_error("r")) == 1);
}

TEST_CASE("cmd_classify reports tags and provenance") {
    CliFlags flags;
    const std::string sep_path = write_operator("sep.json", werner(0.2).op());
    CmdResult sep = cmd_classify(sep_path, flags);
    CHECK(sep.exit_code == 0);
    CHECK(sep.report["command"] == "classify");
    CHECK(sep.report["version"] == kVersion);
    CHECK(sep.report["timestamp"].is_string());
    CHECK(sep.report["flags"]["seed"] == 0);
    CHECK(sep.report["flags"]["restarts"] == 64);
    CHECK(sep.report["verdicts"]["tag"] == "separable_state");
    CHECK(sep.report["inputs"][0]["path"] == sep_path);
    CHECK(sep.report["inputs"][0]["fnv1a64"] == fnv1a64_hex(read_file(sep_path)));
    CHECK(sep.report["certificates"].contains("decomposition"));
    CHECK(sep.report["diagnostics"]["tolerances"].contains("block_positive"));

    CmdResult wit = cmd_classify(write_operator("flip.json", flip_witness()), flags);
    CHECK(wit.report["verdicts"]["tag"] == "entanglement_witness");
    CHECK(wit.report["certificates"].contains("detected_state"));

    const Vector v = bell_vector(BellState::PsiPlus);
    CmdResult ent =
        cmd_classify(write_operator("bell.json", HermitianOperator(v * v.adjoint(), kQubits)),
                     flags);
    CHECK(ent.report["verdicts"]["tag"] == "entangled_state");
    CHECK(ent.report["certificates"].contains("detecting_witness"));

    CmdResult neg = cmd_classify(
        write_operator("neg.json", HermitianOperator(-Matrix::Identity(4, 4), kQubits)), flags);
    CHECK(neg.report["verdicts"]["tag"] == "non_block_positive");
    CHECK(neg.report["certificates"].contains("product_vector"));
    CHECK(neg.report["diagnostics"]["min_product_value"].get<double>() ==
          doctest::Approx(-1.0).epsilon(1e-6));

    CliFlags more;
    more.restarts = 16;
    CmdResult echo = cmd_classify(sep_path, more);
    CHECK(echo.report["flags"]["restarts"] == 16);
}

TEST_CASE("cmd_bsa reports the split and is deterministic") {
    CliFlags flags;
    const std::string path = write_operator("w06.json", werner(0.6).op());
    CmdResult res = cmd_bsa(path, flags);
    CHECK(res.exit_code == 0);
    CHECK(res.report["verdicts"]["converged"] == true);
    CHECK(res.report["verdicts"]["lambda"].get<double>() == doctest::Approx(0.6).epsilon(2e-3));
    CHECK(res.report["verdicts"]["remainder_present"] == true);
    CHECK(res.report["diagnostics"]["reconstruction_residual"].get<double>() <= 1e-6);
    CHECK(res.report["flags"]["restarts"] == 128);

    CmdResult again = cmd_bsa(path, flags);
    nlohmann::json a = res.report, b = again.report;
    a.erase("timestamp");
    b.erase("timestamp");
    CHECK(a.dump() == b.dump());

    CmdResult sep = cmd_bsa(write_operator("w02.json", werner(0.2).op()), flags);
    CHECK(sep.report["verdicts"]["lambda"].get<double>() >= 1.0 - 1e-6);
    CHECK(sep.report["verdicts"]["remainder_present"] == false);
    CHECK(sep.report["certificates"]["remainder"].is_null());

    CHECK_THROWS_AS(cmd_bsa(write_operator("nonstate.json", flip_witness()), flags),
                    ValidationError);
}

TEST_CASE("cmd_finer certifies the Werner fixture") {
    CliFlags flags;
    const Vector v = bell_vector(BellState::PsiPlus);
    const std::string bell_path =
        write_operator("fin_bell.json", HermitianOperator(v * v.adjoint(), kQubits));
    const std::string werner_path = write_operator("fin_w05.json", werner(0.5).op());
    CmdResult res = cmd_finer(bell_path, werner_path, flags);
    CHECK(res.exit_code == 0);
    CHECK(res.report["verdicts"]["tag"] == "finer");
    CHECK(res.report["verdicts"]["finer"] == true);
    CHECK(res.report["verdicts"]["epsilon"].get<double>() == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(res.report["verdicts"]["p_separable"] == true);
    CHECK(res.report["certificates"].contains("p"));
    CHECK(res.report["verdicts"]["delta_hat"].get<double>() >= 1.0 - 1e-9);

    CmdResult swap = cmd_finer(write_operator("fin_minus.json", bell(BellState::PsiMinus).op()),
                               bell_path, flags);
    CHECK(swap.report["verdicts"]["tag"] == "not_finer");
    CHECK(swap.report["certificates"].contains("counterexample"));
}

TEST_CASE("cmd_family separates the eta and Werner families") {
    CliFlags flags;
    CmdResult res = cmd_family(write_operator("fam_eta.json", eta(0.75).op()),
                               write_operator("fam_w09.json", werner(0.9).op()), flags);
    CHECK(res.exit_code == 0);
    CHECK(res.report["verdicts"]["same_family"] == false);
    CHECK(res.report["diagnostics"]["representative_distance"].get<double>() > 1e-3);
    CHECK(res.report["certificates"].contains("representative_1"));

    CHECK_THROWS_AS(cmd_family(write_operator("fam_sep.json", eta(0.5).op()),
                               write_operator("fam_w09b.json", werner(0.9).op()), flags),
                    PreconditionError);
}

TEST_CASE("cmd_ces evaluates the formula and rejects bad dims") {
    CliFlags flags;
    CmdResult res = cmd_ces({2, 3}, flags);
    CHECK(res.exit_code == 0);
    CHECK(res.report["verdicts"]["max_ces_dim"] == 2);
    CHECK(res.report["verdicts"]["dims"] == nlohmann::json({2, 3}));

    CHECK_THROWS_AS(cmd_ces({2, 1}, flags), ParseError);
    CHECK_THROWS_AS(cmd_ces({5}, flags), ParseError);
}

TEST_CASE("cmd_demo_werner single point and grid") {
    CliFlags flags;
    CmdResult mid = cmd_demo_werner(0.5, 0, flags);
    CHECK(mid.exit_code == 0);
    REQUIRE(mid.report["verdicts"]["points"].size() == 1);
    const nlohmann::json& pt = mid.report["verdicts"]["points"][0];
    CHECK(pt["p"] == 0.5);
    CHECK(pt["entangled"] == true);
    CHECK(pt["witness_value"].get<double>() == doctest::Approx(-0.125).epsilon(1e-9));
    CHECK(pt["lambda"].get<double>() == doctest::Approx(0.75).epsilon(2e-3));
    CHECK(pt["remainder_fidelity_psi_plus"].get<double>() >= 0.999);
    CHECK(mid.report["certificates"].contains("flip_witness"));

    CmdResult low = cmd_demo_werner(0.2, 0, flags);
    const nlohmann::json& lp = low.report["verdicts"]["points"][0];
    CHECK(lp["entangled"] == false);
    CHECK(lp["lambda"].get<double>() >= 1.0 - 1e-6);
    CHECK(lp["remainder_fidelity_psi_plus"].is_null());

    CmdResult grid = cmd_demo_werner(std::nullopt, 3, flags);
    REQUIRE(grid.report["verdicts"]["points"].size() == 3);
    CHECK(grid.report["verdicts"]["points"][0]["p"] == 0.0);
    CHECK(grid.report["verdicts"]["points"][2]["p"] == 1.0);

    CHECK_THROWS_AS(cmd_demo_werner(std::nullopt, 1, flags), ParseError);
}
