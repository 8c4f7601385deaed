#include <doctest.h>

#include "nystrom/harness.hpp"

#include <cmath>
#include <sstream>

using namespace nystrom;

namespace {

std::string csv_of(const RunReport& r) {
    std::ostringstream out;
    write_csv(out, r);
    return out.str();
}

std::string json_of(const RunReport& r) {
    std::ostringstream out;
    write_json(out, r);
    return out.str();
}

ExperimentConfig small_circle() {
    ExperimentConfig c;
    c.geometry = "circle";
    c.omega = 1.0;
    c.eps1 = 1.0;
    c.eps2 = 4.0;
    c.unknowns = {16, 24, 32};
    c.dirs = 32;
    c.tol = 1e-13;
    return c;
}

} // namespace

TEST_CASE("config parsing") {
    const ExperimentConfig c = parse_config("# comment\n"
                                            "geometry = petal\n"
                                            "omega=16\n"
                                            "eps1=16\n"
                                            "eps2=1   # trailing\n"
                                            "polarization=E\n"
                                            "formulations=scfie,PSGCSIE\n"
                                            "unknowns=128,256\n"
                                            "tol=1e-4\n"
                                            "tol_cfiesk=1e-6\n"
                                            "kappa=12.5,8\n"
                                            "eta=3\n"
                                            "dirs=90\n"
                                            "kappa-oversample=4\n"
                                            "format=JSON\n");
    CHECK(c.geometry == "petal");
    CHECK(c.omega == 16);
    CHECK(c.eps1 == 16);
    CHECK(c.eps2 == 1);
    CHECK(c.polarization == Polarization::E);
    REQUIRE(c.formulations.size() == 2);
    CHECK(c.formulations[0] == Formulation::SCFIE);
    CHECK(c.formulations[1] == Formulation::PSGCSIE);
    CHECK(c.unknowns == std::vector<int>{128, 256});
    CHECK(c.tol == 1e-4);
    CHECK(c.tol_cfiesk == 1e-6);
    CHECK(c.kappa == cplx(12.5, 8));
    CHECK(c.eta == 3.0);
    CHECK(c.dirs == 90);
    CHECK(c.kappa_oversample == 4);
    CHECK(c.format == "json");
}

TEST_CASE("config text round trip") {
    ExperimentConfig c;
    c.omega = 0.1 + 0.2;
    c.eps2 = 1.0 / 3.0;
    c.kappa = cplx(std::sqrt(2.0), 1e-7);
    c.unknowns = {64, 128, 512};
    c.formulations = {Formulation::GCSIE};
    CHECK(parse_config(to_config_text(c)) == c);
    const ExperimentConfig defaults;
    CHECK(parse_config(to_config_text(defaults)) == defaults);
    CHECK(parse_config("") == defaults);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("bogus=1"), ConfigError);
    CHECK_THROWS_AS(parse_config("omega"), ConfigError);
    CHECK_THROWS_AS(parse_config("omega=abc"), ConfigError);
    CHECK_THROWS_AS(parse_config("dirs=2.5"), ConfigError);
    CHECK_THROWS_AS(parse_config("polarization=X"), ConfigError);
    CHECK_THROWS_AS(parse_config("kappa=1"), ConfigError);
    CHECK_THROWS(parse_config("formulations=BEM"));
    CHECK_THROWS_AS(parse_config_file("/nonexistent/config.txt"), ConfigError);

    // parse_config validates the assembled configuration
    auto invalid = [](const std::string& text) { CHECK_THROWS_AS(validate(parse_config(text)), ConfigError); };
    invalid("omega=-1");
    invalid("eps2=0");
    invalid("unknowns=130");
    invalid("unknowns=4");
    invalid("tol=0");
    invalid("dirs=0");
    invalid("reference=exact");
    invalid("reference=analytic");
    invalid("format=xml");
    invalid("kappa-oversample=-2");
    CHECK_NOTHROW(validate(parse_config("geometry=circle:2\nreference=analytic")));
    CHECK_THROWS_AS(unknowns_to_n(6), ConfigError);
    CHECK(unknowns_to_n(512) == 128);
}

TEST_CASE("parameter and tolerance rules") {
    ExperimentConfig c;
    c.omega = 8;
    c.eps1 = 1;
    c.eps2 = 4;
    ProblemParams p = problem_params(c);
    CHECK(p.k1 == doctest::Approx(8));
    CHECK(p.k2 == doctest::Approx(16));
    CHECK(p.kappa == cplx(12, 8));
    CHECK(p.eta == doctest::Approx(8));
    CHECK(gmres_tolerance(c, Formulation::CFIESK) == c.tol);

    c.eps1 = 16;
    c.eps2 = 1;
    p = problem_params(c);
    CHECK(p.kappa == cplx(32, 8));
    CHECK(gmres_tolerance(c, Formulation::CFIESK) == doctest::Approx(c.tol / 100));
    CHECK(gmres_tolerance(c, Formulation::SCFIE) == c.tol);
    c.tol_cfiesk = 1e-5;
    CHECK(gmres_tolerance(c, Formulation::CFIESK) == 1e-5);

    c.kappa = cplx(3, 2);
    c.eta = 0.5;
    p = problem_params(c);
    CHECK(p.kappa == cplx(3, 2));
    CHECK(p.eta == 0.5);
}

TEST_CASE("circle reference matches the solver") {
    ExperimentConfig c = small_circle();
    c.omega = 4;
    c.unknowns = {128};
    const RunReport r = run_experiment(c);
    CHECK(r.reference.find("analytic") != std::string::npos);
    REQUIRE(r.cells.size() == 4);
    for (const Cell& cell : r.cells) {
        CAPTURE(to_string(cell.formulation));
        CHECK(cell.error.empty());
        CHECK(cell.converged);
        CHECK(cell.far_error < 1e-8);
        CHECK(cell.n == 32);
    }
}

TEST_CASE("zero amplitude gives zero error") {
    ExperimentConfig c = small_circle();
    c.amplitude = 0.0;
    c.unknowns = {32};
    const RunReport r = run_experiment(c);
    for (const Cell& cell : r.cells) {
        CHECK(cell.error.empty());
        CHECK(cell.iterations == 0);
        CHECK(cell.far_error == 0.0);
    }
}

TEST_CASE("convergence study on a circle") {
    const ConvergenceReport study = convergence_study(small_circle());
    REQUIRE(study.rows.size() == 12);
    for (const OrderRow& row : study.rows) {
        CAPTURE(to_string(row.formulation));
        CAPTURE(row.unknowns);
        CHECK(row.order.has_value() == (row.unknowns != 16));
        CHECK(std::isfinite(row.error));
    }
    CHECK(study.superalgebraic.size() == 4);
    std::ostringstream csv;
    write_csv(csv, study);
    CHECK(csv.str().find("#orders") != std::string::npos);
    std::ostringstream json;
    write_json(json, study);
    CHECK(json.str().find("\"orders\"") != std::string::npos);

    ExperimentConfig short_ladder = small_circle();
    short_ladder.unknowns = {16, 32, 32};
    CHECK_THROWS_AS(convergence_study(short_ladder), ConfigError);
}

TEST_CASE("reports carry their configuration") {
    ExperimentConfig c = small_circle();
    c.unknowns = {16};
    c.formulations = {Formulation::CFIESK, Formulation::SCFIE};
    const RunReport r = run_experiment(c);
    const std::string csv = csv_of(r);
    CHECK(csv.rfind(std::string("#version ") + version_string, 0) == 0);
    CHECK(config_from_report(csv) == c);
    CHECK(config_from_report(json_of(r)) == c);
    CHECK_THROWS_AS(config_from_report("formulation,unknowns\n"), ConfigError);
}

TEST_CASE("SCFIE reference for non-circular shapes") {
    ExperimentConfig c;
    c.geometry = "kite";
    c.omega = 2;
    c.unknowns = {128};
    c.dirs = 16;
    c.formulations = {Formulation::CFIESK};
    const Reference ref = compute_reference(c);
    CHECK(ref.description.find("SCFIE") != std::string::npos);
    CHECK(ref.pattern.values.size() == 16);
    const RunReport r = run_experiment(c, ref);
    CHECK(r.cells[0].far_error < 1e-6);
}

TEST_CASE("runs are deterministic") {
    ExperimentConfig c = small_circle();
    c.geometry = "petal";
    c.omega = 2;
    c.unknowns = {64};
    c.dirs = 16;
    const Reference ref = compute_reference(c);
    const RunReport a = run_experiment(c, ref), b = run_experiment(c, ref);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].iterations == b.cells[i].iterations);
        CHECK(a.cells[i].pattern.values == b.cells[i].pattern.values);
    }
}

TEST_CASE("failed cells are recorded rather than thrown") {
    ExperimentConfig c = small_circle();
    c.unknowns = {16};
    c.formulations = {Formulation::SCFIE};
    Reference wrong{FarFieldPattern{uniform_angles(5), CVector::Zero(5)}, "mismatched"};
    const RunReport r = run_experiment(c, wrong);
    REQUIRE(r.cells.size() == 1);
    CHECK_FALSE(r.cells[0].error.empty());
    CHECK(std::isnan(r.cells[0].far_error));
}
