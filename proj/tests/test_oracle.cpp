#include <cmath>
#include <sstream>

#include "doctest.h"

#include "chiral/error.hpp"
#include "chiral/oracle.hpp"

using namespace chiral;

TEST_CASE("Hamiltonian structure") {
    const FockBasis b(20);
    const auto h = assemble_hamiltonian(ModelParams::make(0.5, 0.125), b);
    CHECK(h.hermitian());
    CHECK(h.hermiticity_defect() < 1e-12);
    CHECK(interior_norm(commutator(h, total_jz(b)), b, 2) < 1e-10);
    CHECK(commutator(h, total_jz(b)).matrix().norm() < 1e-10);

    const auto h0 = assemble_hamiltonian(ModelParams::make(0.5, 0.0), b);
    const Vector up = b.unit(Spin::Up, 0, 0);
    CHECK(numeric_expectation(up, h0).real() == doctest::Approx(1.0));
    // xi~ -> 0 keeps a finite sqrt(2 xi~) a~_r = xi / sqrt(2 xi) a_r (mu diverges),
    // so only the minimal-coupling form is a pure anti-Jaynes-Cummings coupling.
    CHECK(std::abs(b.unit(Spin::Down, 1, 0).dot(h0 * up) - Complex(0, 0.5)) < 1e-15);
    const auto mc = assemble_minimal_coupling_hamiltonian(ModelParams::make(0.5, 0.0), b);
    CHECK(std::abs(b.unit(Spin::Down, 1, 0).dot(mc * up)) == 0.0);
    CHECK(std::abs(b.unit(Spin::Up, 0, 1).dot(mc * b.unit(Spin::Down, 0, 0))) > 0.0);

    CHECK_THROWS_AS(assemble_hamiltonian(ModelParams::make(0.5, 0.0), b, Family::OmegaTilde), Error);
}

TEST_CASE("omega-tilde assembly equals the Bogoliubov-built operator") {
    // sqrt(2 xi) a_l^dag - sqrt(2 xi~) a~_r built literally on the omega basis
    const FockBasis b(16);
    const auto p = ModelParams::make(0.3, 0.7);
    const auto bridge = bogoliubov(p);
    const Complex i{0, 1};
    const auto h12 = (i * std::sqrt(2 * p.xi)) * ladder(b, Mode::Left, Direction::Raise) -
                     (i * std::sqrt(2 * p.xi_tilde)) * tilde_ladder(b, bridge, Mode::Right, Direction::Lower);
    const auto off = h12 * sigma_plus(b);
    const auto literal = sigma_z(b) + off + off.adjoint();
    CHECK((literal - assemble_hamiltonian(p, b)).matrix().norm() < 1e-12);
}

TEST_CASE("diagonalize") {
    SUBCASE("two-level input") {
        SparseMatrix sz(2, 2);
        sz.insert(0, 0) = 1.0;
        sz.insert(1, 1) = -1.0;
        const auto r = diagonalize(OperatorMatrix(sz, true));
        CHECK(r.eigenvalues == std::vector<double>{-1.0, 1.0});
    }
    SUBCASE("non-Hermitian input") {
        SparseMatrix m(2, 2);
        m.insert(0, 1) = 1.0;
        try {
            diagonalize(OperatorMatrix(m));
            FAIL("expected NonHermitianInput");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NonHermitianInput);
        }
    }
    SUBCASE("sector and full solves agree") {
        const FockBasis b(8);
        const auto h = assemble_hamiltonian(ModelParams::make(0.4, 0.1), b);
        const auto full = diagonalize(h, 8);
        const auto sec = diagonalize_sectors(h, b);
        REQUIRE(full.eigenvalues.size() == sec.eigenvalues.size());
        for (std::size_t k = 0; k < full.eigenvalues.size(); ++k)
            CHECK(std::abs(full.eigenvalues[k] - sec.eigenvalues[k]) < 1e-12);
        CHECK(full.max_residual() < 1e-10);
        CHECK(sec.max_residual() < 1e-10);
    }
}

TEST_CASE("weak-field limit spectrum") {
    // xi~ = 0, xi = 0.25: lowest level above the flat E = 1 manifold.
    const FockBasis b(30);
    const auto h = assemble_hamiltonian(ModelParams::make(0.25, 0.0), b);
    const auto spec = diagonalize_sectors(h, b, {std::vector<int>{-1, 1}, true});
    double lowest_above = 1e9;
    for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
        const double e = spec.eigenvalues[k];
        if (e > 1.0 + 1e-6 &&
            boundary_weight(spec.eigenvectors.col(static_cast<Eigen::Index>(k)), b) < 1e-6)
            lowest_above = std::min(lowest_above, e);
    }
    CHECK(std::abs(lowest_above - std::sqrt(2.0)) < 1e-6);
    CHECK(std::abs(lowest_above - analytic_energy(ModelParams::make(0.25, 0.0), 0, Branch::Positive)) < 1e-6);
}

TEST_CASE("branch symmetry of the interacting levels") {
    const auto levels = tracked_levels(ModelParams::make(0.4, 0.1), 9, 30);
    REQUIRE(levels.size() == 9);
    CHECK(levels[0] == doctest::Approx(1.0));
    for (std::size_t k = 1; k + 1 < levels.size(); k += 2) CHECK(std::abs(levels[k] + levels[k + 1]) < 1e-6);
}

TEST_CASE("minimal coupling form is isospectral") {
    const FockBasis b(30);
    for (double ratio : {0.25, 3.0}) {
        const auto p = ModelParams::from_ratio(0.4, ratio);
        ConvergenceOptions o;
        const auto ours = tracked_levels(p, 6, 30, o);
        const auto h = assemble_minimal_coupling_hamiltonian(p, b);
        const auto spec = diagonalize_sectors(h, b, {std::vector<int>{-1, 1}, true});
        for (double e : ours) {
            double best = 1e9;
            for (double f : spec.eigenvalues) best = std::min(best, std::abs(e - f));
            CHECK(best < 1e-6);
        }
    }
}

TEST_CASE("convergence escalation") {
    const auto p = ModelParams::from_ratio(0.4, 0.25);
    const auto report = converged_spectrum(p, 6, 1e-6);
    CHECK(report.converged);
    CHECK(report.final_cutoff <= 40);
    for (std::size_t k = 1; k < report.cutoffs.size(); ++k) CHECK(report.cutoffs[k] > report.cutoffs[k - 1]);
    const auto analytic = analytic_levels(p, 6);
    for (std::size_t k = 0; k < 6; ++k)
        CHECK(std::abs(report.final_levels()[k] - analytic[k]) < 1e-6 * std::abs(analytic[k]));

    CHECK_THROWS_AS(converged_spectrum(p, 6, 0.0), Error);
    CHECK_THROWS_AS(converged_spectrum(p, 0, 1e-6), Error);

    try {
        converged_spectrum(ModelParams::from_ratio(0.4, 0.999), 6, 1e-6);
        FAIL("expected CutoffCeiling");
    } catch (const CutoffCeilingError& e) {
        CHECK(e.code() == ErrorCode::CutoffCeiling);
        CHECK_FALSE(e.report().converged);
        CHECK(e.report().final_cutoff == 60);
    }
}

TEST_CASE("numeric expectation") {
    const FockBasis b(10);
    const Vector up = b.unit(Spin::Up, 0, 0);
    CHECK(numeric_expectation(up, sigma_z(b)).real() == 1.0);
    CHECK(numeric_expectation(up, identity(b)).real() == 1.0);
    CHECK_THROWS_AS(numeric_expectation(2.0 * up, identity(b)), Error);
    CHECK(numeric_variance(up, sigma_z(b)) == doctest::Approx(0.0));

    const auto p = ModelParams::make(0.5, 0.125);
    const auto m = match_state(p, StateLabel::ground(), 40);
    CHECK(std::abs(numeric_expectation(m.vector, angular_momentum_lz(FockBasis(40))).real()) < 1e-6);
    CHECK(m.overlap > 0.99);
    CHECK(m.energy == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("state matching and escalation") {
    const auto p = ModelParams::from_ratio(0.4, 2.0);
    const auto c = converged_state(p, StateLabel::doublet(Branch::Negative, 1), 1e-8);
    CHECK(c.converged);
    CHECK(std::abs(c.state.energy - analytic_energy(p, 1, Branch::Negative)) < 1e-8);
    CHECK(c.state.overlap > 0.999999);
}

TEST_CASE("spectrum csv") {
    const FockBasis b(2);
    const auto spec = diagonalize_sectors(assemble_hamiltonian(ModelParams::make(0.4, 0.1), b), b);
    std::ostringstream out;
    write_spectrum_csv(out, 0.25, spec);
    const std::string s = out.str();
    CHECK(s.rfind("ratio,level_index,energy,residual,cutoff\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 1 + static_cast<long>(b.dim()));
}
