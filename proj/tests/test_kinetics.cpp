#include "oracles.hpp"

#include "schr/errors.hpp"
#include "schr/kinetics.hpp"
#include "schr/stability.hpp"

#include <doctest.h>

#include <cmath>

using namespace schr;
namespace ix = schr::idx;

namespace {

CompartmentVector basic_state(double s, double c, double h, double r) { return {Model::basic, {s, c, h, r}}; }

} // namespace

TEST_CASE("reaction_basic at the origin leaves only recruitment")
{
    const auto p = oracle::endemic_basic();
    const auto f = reaction_basic(CompartmentVector(Model::basic), p);
    CHECK(f[0] == 2.15);
    CHECK(f[1] == 0.0);
    CHECK(f[2] == 0.0);
    CHECK(f[3] == 0.0);
}

TEST_CASE("reaction_basic vanishes at the drug-free state")
{
    const auto p = oracle::endemic_basic();
    const auto f = reaction_basic(basic_state(215, 0, 0, 0), p);
    CHECK(f.sup_norm() < 1e-14);
}

TEST_CASE("reaction_basic hand-evaluated example")
{
    const auto p = oracle::endemic_basic();
    const auto f = reaction_basic(basic_state(30, 10, 5, 0), p);
    CHECK(f[0] == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(f[2] == doctest::Approx(1.7).epsilon(1e-14));
    CHECK(f[3] == doctest::Approx(0.75).epsilon(1e-14));
    const auto o = oracle::rhs_basic(30, 10, 5, 0, p);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(f[i] == doctest::Approx(o[i]).epsilon(1e-14));
    }
}

TEST_CASE("reaction_extended examples")
{
    const auto p = oracle::endemic_extended();
    const auto origin = reaction_extended(CompartmentVector(Model::extended), p);
    CHECK(origin[0] == 2.15);
    for (std::size_t i = 1; i < 6; ++i) {
        CHECK(origin[i] == 0.0);
    }
    CHECK(reaction_extended(drug_free_equilibrium(p, Model::extended).point, p).sup_norm() < 1e-14);

    const CompartmentVector y(Model::extended, {30, 10, 3, 5, 3, 0});
    const auto f = reaction_extended(y, p);
    CHECK(f[ix::extended::C] == doctest::Approx(-2.07).epsilon(1e-13));
    CHECK(f[ix::extended::Uc] == doctest::Approx(-0.05).epsilon(1e-12));
    CHECK(f[ix::extended::Uh] == doctest::Approx(-0.10).epsilon(1e-12));
    const auto o = oracle::rhs_extended({30, 10, 3, 5, 3, 0}, p);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(f[i] == doctest::Approx(o[i]).epsilon(1e-13));
    }
}

TEST_CASE("reaction layout mismatch is a contract violation")
{
    const auto p = oracle::endemic_extended();
    CHECK_THROWS_AS(reaction_basic(CompartmentVector(Model::extended), p), ContractViolation);
    CHECK_THROWS_AS(reaction_extended(CompartmentVector(Model::basic), p), ContractViolation);
}

TEST_CASE("reaction terms agree with a second transcription on random states")
{
    oracle::ParamGen gen(11);
    for (int n = 0; n < 200; ++n) {
        const auto p = gen.extended_any();
        const auto yb = gen.state(Model::basic, 300.0);
        const auto fb = reaction_basic(yb, p);
        const auto ob = oracle::rhs_basic(yb[0], yb[1], yb[2], yb[3], p);
        const auto ye = gen.state(Model::extended, 300.0);
        const auto fe = reaction_extended(ye, p);
        const auto oe = oracle::rhs_extended({ye[0], ye[1], ye[2], ye[3], ye[4], ye[5]}, p);
        const double scale = 1e-12 * std::max(1.0, p.lambda_recruit + p.beta * 300 * 300);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(fb[i] - ob[i]) <= scale);
        }
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(std::abs(fe[i] - oe[i]) <= scale);
        }
    }
}

TEST_CASE("extended reaction with treatment switched off reproduces the basic one exactly")
{
    oracle::ParamGen gen(12);
    for (int n = 0; n < 200; ++n) {
        auto p = gen.basic_with_r0(gen.uniform(0.2, 4.0));
        const auto yb = gen.state(Model::basic, 200.0);
        const CompartmentVector ye(Model::extended,
                                   {yb[0], yb[1], gen.uniform(0, 50), yb[2], gen.uniform(0, 50), yb[3]});
        const auto fb = reaction_basic(yb, p);
        const auto fe = reaction_extended(ye, p);
        CHECK(fe[ix::extended::S] == fb[ix::basic::S]);
        CHECK(fe[ix::extended::C] == fb[ix::basic::C]);
        CHECK(fe[ix::extended::H] == fb[ix::basic::H]);
        CHECK(fe[ix::extended::R] == fb[ix::basic::R]);
    }
}

TEST_CASE("r0_basic")
{
    CHECK(r0_basic(oracle::endemic_basic()) == doctest::Approx(1.6538461538461537).epsilon(1e-14));
    CHECK(r0_basic(oracle::drug_free_basic()) == doctest::Approx(0.8847736625514404).epsilon(1e-14));
    auto p = oracle::endemic_basic();
    p.beta = 0.0;
    CHECK(r0_basic(p) == 0.0);
    p = oracle::endemic_basic();
    p.eta[0] = 0.0;
    CHECK_THROWS_AS(r0_basic(p), DomainError);
}

TEST_CASE("r0_extended")
{
    CHECK(r0_extended(oracle::endemic_extended()) == doctest::Approx(0.0043 / 0.0027).epsilon(1e-13));
    CHECK(r0_extended(oracle::drug_free_extended()) == doctest::Approx(0.00215 / (0.03 * 0.131)).epsilon(1e-13));
    CHECK(r0_extended(oracle::endemic_extended()) == doctest::Approx(1.5925925925925926).epsilon(1e-14));
    CHECK(r0_extended(oracle::drug_free_extended()) == doctest::Approx(0.5470737913486005).epsilon(1e-14));
    auto p = oracle::endemic_extended();
    p.mu[0] = 0.0;
    CHECK(r0_extended(p) == doctest::Approx(r0_basic(p)).epsilon(1e-15));
}

TEST_CASE("r0 matches the trace of the next-generation decomposition")
{
    for (const auto& p : {oracle::endemic_basic(), oracle::drug_free_basic()}) {
        const auto ef = drug_free_equilibrium(p, Model::basic);
        const double tr = ngm_trace(ngm_decompose(p, ef.point));
        CHECK(oracle::rel_err(r0_basic(p), tr) < 1e-12);
    }
    oracle::ParamGen gen(21);
    for (int n = 0; n < 200; ++n) {
        const auto pb = gen.basic_with_r0(gen.uniform(0.1, 5.0));
        CHECK(oracle::rel_err(r0_basic(pb), ngm_trace(ngm_decompose(pb, drug_free_equilibrium(pb, Model::basic).point))) <
              1e-12);

        // The trace on the extended system sees the U_c -> C return flow, so it
        // equals the exact threshold always and r0_extended only when mu2 = 0.
        auto pe = gen.extended_any();
        const auto efe = drug_free_equilibrium(pe, Model::extended).point;
        CHECK(oracle::rel_err(ngm_trace(ngm_decompose(pe, efe)), effective_threshold_extended(pe)) < 1e-12);
        pe.mu[1] = 0.0;
        CHECK(oracle::rel_err(ngm_trace(ngm_decompose(pe, efe)), r0_extended(pe)) < 1e-12);
    }
}

TEST_CASE("drug-free equilibrium")
{
    auto p = oracle::endemic_basic();
    auto ef = drug_free_equilibrium(p, Model::basic);
    CHECK(ef.point[0] == doctest::Approx(215.0).epsilon(1e-15));
    CHECK(ef.point[1] == 0.0);
    CHECK(ef.kind == EquilibriumKind::drug_free);
    CHECK(equilibrium_residual(ef, p) < 1e-14);

    p = oracle::drug_free_basic();
    ef = drug_free_equilibrium(p, Model::basic);
    CHECK(ef.point[0] == doctest::Approx(71.66666666666667).epsilon(1e-15));
    CHECK(equilibrium_residual(ef, p) < 1e-14);

    p.lambda_recruit = 0.0;
    CHECK(drug_free_equilibrium(p, Model::basic).point.sup_norm() == 0.0);

    p.eta[0] = 0.0;
    CHECK_THROWS_AS(drug_free_equilibrium(p, Model::basic), DomainError);
}

TEST_CASE("basic endemic equilibrium matches the closed form and Newton")
{
    const auto p = oracle::endemic_basic();
    const auto e = endemic_equilibrium_basic(p);
    CHECK(e.kind == EquilibriumKind::drug_addiction);
    CHECK(e.provenance == Provenance::closed_form);
    CHECK(e.point[0] == doctest::Approx(130.0).epsilon(1e-14));
    CHECK(e.point[1] == doctest::Approx(3.2692307692307687).epsilon(1e-13));
    CHECK(e.point[2] == doctest::Approx(10.897435897435896).epsilon(1e-13));
    CHECK(e.point[3] == doctest::Approx(70.83333333333334).epsilon(1e-13));
    CHECK(equilibrium_residual(e, p) < 1e-10);

    const auto root = newton_equilibrium(p, basic_state(100, 5, 5, 50));
    CHECK(root.provenance == Provenance::root_found);
    CHECK(root.kind == EquilibriumKind::drug_addiction);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(oracle::rel_err(root.point[i], e.point[i]) < 1e-8);
    }

    auto off = e;
    off.point[0] += 1.0;
    CHECK(equilibrium_residual(off, p) > 0.0);
}

TEST_CASE("basic endemic equilibrium limits")
{
    auto p = oracle::endemic_basic();
    p.beta = (1.0 + 1e-10) * p.eta[0] * cocaine_outflow(p) / p.lambda_recruit;
    const auto e = endemic_equilibrium_basic(p);
    CHECK(e.point[1] < 1e-7);
    CHECK(e.point[2] < 1e-7);
    CHECK(e.point[3] < 1e-7);
    CHECK(e.point[0] == doctest::Approx(p.lambda_recruit / p.eta[0]).epsilon(1e-9));

    p = oracle::endemic_basic();
    p.sigma = 0.0;
    REQUIRE(r0_basic(p) > 1.0);
    CHECK(endemic_equilibrium_basic(p).point[2] == 0.0);

    CHECK_THROWS_AS(endemic_equilibrium_basic(oracle::drug_free_basic()), NoEndemicEquilibrium);
}

TEST_CASE("basic endemic equilibrium properties over random parameters")
{
    oracle::ParamGen gen(31);
    for (int n = 0; n < 500; ++n) {
        const double r0 = gen.uniform(1.001, 8.0);
        const auto p = gen.basic_with_r0(r0);
        const auto e = endemic_equilibrium_basic(p);
        const double s = e.point[0], c = e.point[1];
        CHECK(reaction_basic(e.point, p).sup_norm() < 1e-10 * std::max(1.0, p.lambda_recruit));
        CHECK(oracle::rel_err(p.beta * s * c + p.eta[0] * s, p.lambda_recruit) < 1e-12);
        CHECK(oracle::rel_err(p.beta * s, cocaine_outflow(p)) < 1e-12);
        CHECK(c > 0.0);
    }
    for (int n = 0; n < 200; ++n) {
        const auto p = gen.basic_with_r0(gen.uniform(0.05, 0.999));
        // C* = (Lambda - eta1 S*) / (beta S*) with S* = a / beta is negative below threshold.
        const double s_star = cocaine_outflow(p) / p.beta;
        CHECK(p.lambda_recruit - p.eta[0] * s_star < 0.0);
        CHECK_THROWS_AS(endemic_equilibrium_basic(p), NoEndemicEquilibrium);
    }
}

TEST_CASE("extended endemic equilibrium matches the closed form and Newton")
{
    const auto p = oracle::endemic_extended();
    const auto e = endemic_equilibrium_extended(p);
    CHECK(e.point[0] == doctest::Approx(134.0).epsilon(1e-13));
    CHECK(e.point[1] == doctest::Approx(3.0223880597014925).epsilon(1e-9));
    CHECK(e.point[2] == doctest::Approx(0.6044776119402985).epsilon(1e-9));
    CHECK(e.point[3] == doctest::Approx(8.8893768).epsilon(1e-7));
    CHECK(e.point[4] == doctest::Approx(1.7778753).epsilon(1e-7));
    CHECK(e.point[5] == doctest::Approx(66.706).epsilon(1e-4));
    CHECK(equilibrium_residual(e, p) < 1e-10);

    const auto root = newton_equilibrium(p, CompartmentVector(Model::extended, {100, 5, 1, 5, 1, 50}));
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(oracle::rel_err(root.point[i], e.point[i]) < 1e-8);
    }
}

TEST_CASE("extended endemic equilibrium reduces to the basic one")
{
    auto p = oracle::endemic_extended();
    p.mu = {0.0, 0.0};
    p.kappa = {0.0, 0.0};
    const auto ee = endemic_equilibrium_extended(p);
    const auto eb = endemic_equilibrium_basic(p);
    CHECK(ee.point[ix::extended::S] == doctest::Approx(eb.point[ix::basic::S]).epsilon(1e-14));
    CHECK(ee.point[ix::extended::C] == doctest::Approx(eb.point[ix::basic::C]).epsilon(1e-13));
    CHECK(ee.point[ix::extended::H] == doctest::Approx(eb.point[ix::basic::H]).epsilon(1e-13));
    CHECK(ee.point[ix::extended::R] == doctest::Approx(eb.point[ix::basic::R]).epsilon(1e-13));
    CHECK(ee.point[ix::extended::Uc] == 0.0);
    CHECK(ee.point[ix::extended::Uh] == 0.0);
}

TEST_CASE("extended endemic equilibrium at the C* = 0 boundary is rejected")
{
    auto p = oracle::endemic_extended();
    const double a = cocaine_outflow(p) + p.mu[0];
    const double b = treated_cocaine_outflow(p);
    const double s_star = (a - p.mu[0] * p.mu[1] / b) / p.beta;
    p.lambda_recruit = p.eta[0] * s_star;
    CHECK_THROWS_AS(endemic_equilibrium_extended(p), NoEndemicEquilibrium);
    CHECK_THROWS_AS(endemic_equilibrium_extended(oracle::drug_free_extended()), NoEndemicEquilibrium);
}

TEST_CASE("degenerate heroin block is rejected at validation")
{
    auto p = oracle::endemic_extended();
    p.eta[2] = p.gamma[1] = 0.0;
    p.eta[5] = p.gamma[3] = 0.0;
    REQUIRE(heroin_block_determinant(p) == 0.0);
    CHECK_THROWS_AS(validate(p, Model::extended), DomainError);
    CHECK_THROWS_AS(endemic_equilibrium_extended(p), DomainError);
}

TEST_CASE("validate names the offending field")
{
    auto p = oracle::endemic_basic();
    p.beta = -1.0;
    try {
        validate(p, Model::basic);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("beta") != std::string::npos);
    }
}

TEST_CASE("effective threshold")
{
    const auto p = oracle::endemic_extended();
    const double brute = oracle::ngm_block_radius(p);
    CHECK(oracle::rel_err(effective_threshold_extended(p), brute) < 1e-12);
    CHECK(effective_threshold_extended(p) == doctest::Approx(1.6044776119402984).epsilon(1e-13));
    CHECK(effective_threshold_extended(oracle::drug_free_extended()) ==
          doctest::Approx(oracle::ngm_block_radius(oracle::drug_free_extended())).epsilon(1e-12));

    auto q = p;
    q.mu[1] = 0.0;
    CHECK(oracle::rel_err(effective_threshold_extended(q), r0_extended(q)) < 1e-12);
    q = p;
    q.beta = 0.0;
    CHECK(effective_threshold_extended(q) == 0.0);

    oracle::ParamGen gen(41);
    for (int n = 0; n < 300; ++n) {
        const auto pr = gen.extended_any();
        CHECK(oracle::rel_err(effective_threshold_extended(pr), oracle::ngm_block_radius(pr)) < 1e-10);
        // Sign of C* follows the exact threshold.
        const bool invades = effective_threshold_extended(pr) > 1.0 + 1e-9;
        const bool below = effective_threshold_extended(pr) < 1.0 - 1e-9;
        if (invades) {
            const auto e = endemic_equilibrium_extended(pr);
            CHECK(e.point[1] > 0.0);
            CHECK(equilibrium_residual(e, pr) < 1e-10 * std::max(1.0, pr.lambda_recruit));
        } else if (below) {
            CHECK_THROWS_AS(endemic_equilibrium_extended(pr), NoEndemicEquilibrium);
        }
    }
}

TEST_CASE("Newton seeded near the drug-free state reports it")
{
    const auto p = oracle::drug_free_basic();
    const auto root = newton_equilibrium(p, basic_state(60, 0.1, 0.1, 0.1));
    CHECK(root.kind == EquilibriumKind::drug_free);
    CHECK(root.point[0] == doctest::Approx(71.66666666666667).epsilon(1e-10));
}
