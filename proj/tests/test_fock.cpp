#include <cmath>
#include <sstream>

#include "doctest.h"

#include "chiral/error.hpp"
#include "chiral/fock.hpp"

using namespace chiral;

namespace {

double element(const OperatorMatrix& m, std::size_t row, std::size_t col) {
    return std::abs(m.matrix().coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)));
}

Complex expect(const OperatorMatrix& m, const Vector& v) { return v.dot(m * v); }

}  // namespace

TEST_CASE("basis index map") {
    FockBasis b(4);
    CHECK(b.dim() == 2 * 25);
    for (std::size_t i = 0; i < b.dim(); ++i) {
        const auto st = b.state(i);
        CHECK(b.index(st.spin, st.n_r, st.n_l) == i);
    }
    CHECK(b.index(Spin::Down, 1, 2) == 25 + 5 + 2);
    CHECK_THROWS_AS(b.index(Spin::Up, 5, 0), Error);
    CHECK_THROWS_AS(FockBasis(0), Error);
    CHECK(b.twice_jz(b.index(Spin::Up, 2, 0)) == 5);
}

TEST_CASE("ladder elements") {
    FockBasis b(6);
    const auto ar = ladder(b, Mode::Right, Direction::Lower);
    const auto ard = ladder(b, Mode::Right, Direction::Raise);
    const auto al = ladder(b, Mode::Left, Direction::Lower);
    const Vector vac = b.unit(Spin::Up, 0, 0);
    CHECK(std::abs(expect(ar * ard, vac) - 1.0) < 1e-15);
    CHECK(element(al, b.index(Spin::Up, 1, 3), b.index(Spin::Up, 1, 4)) == doctest::Approx(2.0));
    CHECK(commutator(ar, al).matrix().norm() == 0.0);
    // raising out of the cutoff truncates to zero
    CHECK((ard * b.unit(Spin::Up, 6, 0)).norm() == 0.0);
    // the canonical commutator fails only on the boundary
    const auto comm = commutator(ar, ard) - identity(b);
    CHECK(interior_norm(comm, b, 1) < 1e-14);
    CHECK(comm.matrix().norm() > 1.0);
}

TEST_CASE("sparse triplet dump") {
    FockBasis b(1);
    std::ostringstream out;
    ladder(b, Mode::Left, Direction::Raise).write_triplets(out);
    CHECK(out.str().find("# 8 8 4") == 0);
}

TEST_CASE("hermiticity bookkeeping") {
    FockBasis b(3);
    CHECK(sigma_z(b).hermitian());
    CHECK(number(b, Mode::Left).hermitian());
    CHECK_THROWS_AS(ladder(b, Mode::Left, Direction::Lower).declare_hermitian(), Error);
    const auto sx = sigma_plus(b) + sigma_minus(b);
    CHECK(sx.hermiticity_defect() == 0.0);
    const Vector up = b.unit(Spin::Up, 0, 0);
    CHECK(expect(sigma_z(b), up).real() == 1.0);
    CHECK((sigma_plus(b) * b.unit(Spin::Down, 1, 2) - b.unit(Spin::Up, 1, 2)).norm() == 0.0);
}

TEST_CASE("tilde ladders") {
    FockBasis b(12);
    SUBCASE("equal widths leave the ladder unchanged") {
        const Bogoliubov same{1.0, 0.0, 1.0};
        const auto diff = tilde_ladder(b, same, Mode::Right, Direction::Lower) -
                          ladder(b, Mode::Right, Direction::Lower);
        CHECK(diff.matrix().norm() == 0.0);
    }
    SUBCASE("canonical commutator away from the cutoff") {
        const auto bridge = bogoliubov(ModelParams::make(0.5, 0.125));
        const auto at = tilde_ladder(b, bridge, Mode::Right, Direction::Lower);
        const auto atd = tilde_ladder(b, bridge, Mode::Right, Direction::Raise);
        CHECK(interior_norm(commutator(at, atd) - identity(b), b, 2) < 1e-12);
        const auto alt = tilde_ladder(b, bridge, Mode::Left, Direction::Lower);
        CHECK(interior_norm(commutator(at, alt), b, 2) < 1e-12);
        const Vector vac = b.unit(Spin::Up, 0, 0);
        CHECK(std::abs(expect(atd * at, vac) - bridge.mu * bridge.mu) < 1e-14);
        CHECK(std::abs(bridge.mu - (-0.75)) < 1e-14);
    }
    SUBCASE("derived from the width definitions") {
        // a~ built from x, p with width Delta~ must equal the Bogoliubov form.
        const auto p = ModelParams::make(0.3, 0.9);
        const auto bridge = bogoliubov(p);
        const auto q = quadratures(b);
        const double wt = 1.0 / bridge.width_ratio;
        const double r2 = std::sqrt(2.0);
        const Complex i{0, 1};
        const auto ax = Complex(1 / (r2 * wt)) * q.x + Complex(i * wt / r2) * q.px;
        const auto ay = Complex(1 / (r2 * wt)) * q.y + Complex(i * wt / r2) * q.py;
        // a_r = (a_x - i a_y)/sqrt2
        const auto ar_t = Complex(1 / r2) * (ax - i * ay);
        const auto diff = ar_t - tilde_ladder(b, bridge, Mode::Right, Direction::Lower);
        CHECK(interior_norm(diff, b, 1) < 1e-12);
    }
}

TEST_CASE("quadratures") {
    FockBasis b(10);
    const auto q = quadratures(b);
    const Vector vac = b.unit(Spin::Up, 0, 0);
    CHECK(std::abs(expect(q.x * q.x, vac) - 0.5) < 1e-14);
    CHECK(std::abs(expect(q.x, vac)) < 1e-15);
    const Complex c = expect(commutator(q.x, q.px), vac);
    CHECK(std::abs(c - Complex(0, 1)) < 1e-14);
    CHECK(interior_norm(commutator(q.x, q.py), b, 2) < 1e-14);
    CHECK(q.x.hermiticity_defect() < 1e-15);
    CHECK(q.py.hermiticity_defect() < 1e-15);

    const auto lz = angular_momentum_lz(b);
    CHECK(interior_norm(quadrature_lz(q) - lz, b, 2) < 1e-10);
    const Vector s20 = b.unit(Spin::Down, 2, 0);
    CHECK(std::abs(expect(quadrature_lz(q), s20) - 2.0) < 1e-12);
    CHECK(std::abs(expect(lz, b.unit(Spin::Up, 3, 3))) == 0.0);

    SUBCASE("omega-tilde quadratures represent the same x and p") {
        const auto bridge = bogoliubov(ModelParams::make(0.4, 0.1));
        const auto qt = tilde_quadratures(b, bridge);
        CHECK(interior_norm(qt.x - q.x, b, 2) < 1e-10);
        CHECK(interior_norm(qt.y - q.y, b, 2) < 1e-10);
        CHECK(interior_norm(qt.px - q.px, b, 2) < 1e-10);
        CHECK(interior_norm(qt.py - q.py, b, 2) < 1e-10);
    }
}

TEST_CASE("squeeze unitary") {
    FockBasis b(30);
    const auto u0 = squeeze_unitary(b, 0.0);
    CHECK((u0.unitary - identity(b)).matrix().norm() < 1e-14);

    const double z = -0.6;
    const auto s = squeeze_unitary(b, z);
    CHECK(s.leakage < 1e-8);
    CHECK_FALSE(s.cutoff_warning);
    const auto uu = s.unitary * s.unitary.adjoint() - identity(b);
    CHECK(uu.matrix().norm() < 1e-8);

    // U(z)|vac> = sum_m tanh^m(z) / cosh(z) |m,m>
    const Vector img = s.unitary * b.unit(Spin::Up, 0, 0);
    double worst = 0.0;
    for (int m = 0; m <= 30; ++m) {
        const double expected = std::pow(std::tanh(z), m) / std::cosh(z);
        worst = std::max(worst, std::abs(img(static_cast<Eigen::Index>(b.index(Spin::Up, m, m))) - expected));
    }
    CHECK(worst < 1e-8);

    const auto lz = angular_momentum_lz(b);
    CHECK(interior_norm(commutator(s.unitary, lz), b, 2) < 1e-8);

    CHECK_THROWS_AS(squeeze_unitary(FockBasis(10), -2.0), Error);
    SqueezeOptions loose;
    loose.leakage_threshold = 1.0;
    CHECK(squeeze_unitary(FockBasis(8), -2.0, loose).cutoff_warning);
}
