#include "chiral/fock.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "chiral/error.hpp"

namespace chiral {

namespace {

using Triplet = Eigen::Triplet<Complex>;

SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& entries) {
    SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
}

const Complex kI{0.0, 1.0};

}  // namespace

FockBasis::FockBasis(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 1)
        throw Error(ErrorCode::InvalidParams, "Fock cutoff must be >= 1, got " + std::to_string(cutoff));
}

std::size_t FockBasis::index(Spin s, int n_r, int n_l) const {
    if (n_r < 0 || n_l < 0 || n_r > cutoff_ || n_l > cutoff_)
        throw Error(ErrorCode::InvalidParams, "occupation outside the truncated basis");
    return static_cast<std::size_t>(s) * orbital_dim() +
           static_cast<std::size_t>(n_r) * modes_dim() + static_cast<std::size_t>(n_l);
}

FockState FockBasis::state(std::size_t idx) const {
    if (idx >= dim()) throw Error(ErrorCode::InvalidParams, "basis index out of range");
    FockState st;
    st.spin = idx < orbital_dim() ? Spin::Up : Spin::Down;
    const std::size_t orb = idx % orbital_dim();
    st.n_r = static_cast<int>(orb / modes_dim());
    st.n_l = static_cast<int>(orb % modes_dim());
    return st;
}

bool FockBasis::interior(std::size_t idx, int margin) const {
    const auto st = state(idx);
    return st.n_r <= cutoff_ - margin && st.n_l <= cutoff_ - margin;
}

int FockBasis::twice_jz(std::size_t idx) const {
    const auto st = state(idx);
    return 2 * (st.n_r - st.n_l) + (st.spin == Spin::Up ? 1 : -1);
}

Vector FockBasis::unit(Spin s, int n_r, int n_l) const {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim()));
    v(static_cast<Eigen::Index>(index(s, n_r, n_l))) = 1.0;
    return v;
}

OperatorMatrix::OperatorMatrix(SparseMatrix m, bool hermitian) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw Error(ErrorCode::InvalidParams, "operator must be square");
    if (hermitian) declare_hermitian();
}

OperatorMatrix OperatorMatrix::adjoint() const {
    return OperatorMatrix(SparseMatrix(m_.adjoint()), hermitian_);
}

double OperatorMatrix::hermiticity_defect() const {
    const SparseMatrix diff = m_ - SparseMatrix(m_.adjoint());
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

OperatorMatrix& OperatorMatrix::declare_hermitian(double tol) {
    const double defect = hermiticity_defect();
    if (defect > tol)
        throw Error(ErrorCode::NonHermitianInput,
                    "operator declared Hermitian has defect " + std::to_string(defect));
    hermitian_ = true;
    return *this;
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    OperatorMatrix r(SparseMatrix(a.m_ + b.m_));
    r.hermitian_ = a.hermitian_ && b.hermitian_;
    return r;
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    OperatorMatrix r(SparseMatrix(a.m_ - b.m_));
    r.hermitian_ = a.hermitian_ && b.hermitian_;
    return r;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    return OperatorMatrix(SparseMatrix((a.m_ * b.m_).pruned()));
}

OperatorMatrix operator*(Complex s, const OperatorMatrix& a) {
    OperatorMatrix r(SparseMatrix(s * a.m_));
    r.hermitian_ = a.hermitian_ && s.imag() == 0.0;
    return r;
}

void OperatorMatrix::write_triplets(std::ostream& out) const {
    out << "# " << m_.rows() << ' ' << m_.cols() << ' ' << m_.nonZeros() << '\n';
    out.precision(17);
    for (Eigen::Index k = 0; k < m_.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m_, k); it; ++it)
            out << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' '
                << it.value().imag() << '\n';
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
    return a * b - b * a;
}

double interior_norm(const OperatorMatrix& m, const FockBasis& basis, int margin) {
    const SparseMatrix& s = m.matrix();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < s.outerSize(); ++k) {
        if (!basis.interior(static_cast<std::size_t>(k), margin)) continue;
        double col = 0.0;
        for (SparseMatrix::InnerIterator it(s, k); it; ++it) col += std::norm(it.value());
        worst = std::max(worst, std::sqrt(col));
    }
    return worst;
}

OperatorMatrix identity(const FockBasis& basis) {
    SparseMatrix m(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(basis.dim()));
    m.setIdentity();
    return OperatorMatrix(m, true);
}

OperatorMatrix ladder(const FockBasis& basis, Mode mode, Direction direction) {
    std::vector<Triplet> entries;
    const int n_max = basis.cutoff();
    for (std::size_t col = 0; col < basis.dim(); ++col) {
        const auto st = basis.state(col);
        const int n = mode == Mode::Right ? st.n_r : st.n_l;
        const int target = direction == Direction::Raise ? n + 1 : n - 1;
        if (target < 0 || target > n_max) continue;
        const double amp = std::sqrt(static_cast<double>(std::max(n, target)));
        const std::size_t row = mode == Mode::Right ? basis.index(st.spin, target, st.n_l)
                                                    : basis.index(st.spin, st.n_r, target);
        entries.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), amp);
    }
    return OperatorMatrix(from_triplets(basis.dim(), entries));
}

OperatorMatrix number(const FockBasis& basis, Mode mode) {
    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const auto st = basis.state(i);
        const int n = mode == Mode::Right ? st.n_r : st.n_l;
        if (n) entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), n);
    }
    return OperatorMatrix(from_triplets(basis.dim(), entries), true);
}

OperatorMatrix tilde_ladder(const FockBasis& basis, const Bogoliubov& bridge, Mode mode,
                            Direction direction) {
    const Mode other = mode == Mode::Right ? Mode::Left : Mode::Right;
    const Direction flipped = direction == Direction::Raise ? Direction::Lower : Direction::Raise;
    return Complex(bridge.mu_tilde) * ladder(basis, mode, direction) +
           Complex(bridge.mu) * ladder(basis, other, flipped);
}

OperatorMatrix sigma_z(const FockBasis& basis) {
    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < basis.dim(); ++i)
        entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i),
                             i < basis.orbital_dim() ? 1.0 : -1.0);
    return OperatorMatrix(from_triplets(basis.dim(), entries), true);
}

OperatorMatrix sigma_plus(const FockBasis& basis) {
    std::vector<Triplet> entries;
    const std::size_t half = basis.orbital_dim();
    for (std::size_t i = 0; i < half; ++i)
        entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + half), 1.0);
    return OperatorMatrix(from_triplets(basis.dim(), entries));
}

OperatorMatrix sigma_minus(const FockBasis& basis) { return sigma_plus(basis).adjoint(); }

OperatorMatrix angular_momentum_lz(const FockBasis& basis) {
    return number(basis, Mode::Right) - number(basis, Mode::Left);
}

namespace {

// Cartesian quadratures from a chiral pair (a_r, a_l):
//   a_x = (a_r + a_l)/sqrt2,  a_y = i(a_r - a_l)/sqrt2.
Quadratures quadratures_from(const OperatorMatrix& a_r, const OperatorMatrix& a_l, double width) {
    const double r2 = std::sqrt(2.0);
    const OperatorMatrix a_x = Complex(1.0 / r2) * (a_r + a_l);
    const OperatorMatrix a_y = (kI / r2) * (a_r - a_l);
    const OperatorMatrix ax_dag = a_x.adjoint();
    const OperatorMatrix ay_dag = a_y.adjoint();
    Quadratures q;
    q.x = Complex(width / r2) * (a_x + ax_dag);
    q.y = Complex(width / r2) * (a_y + ay_dag);
    q.px = (Complex(1.0) / (kI * r2 * width)) * (a_x - ax_dag);
    q.py = (Complex(1.0) / (kI * r2 * width)) * (a_y - ay_dag);
    return q;
}

}  // namespace

Quadratures quadratures(const FockBasis& basis, double width) {
    return quadratures_from(ladder(basis, Mode::Right, Direction::Lower),
                            ladder(basis, Mode::Left, Direction::Lower), width);
}

Quadratures tilde_quadratures(const FockBasis& basis, const Bogoliubov& bridge) {
    return quadratures_from(tilde_ladder(basis, bridge, Mode::Right, Direction::Lower),
                            tilde_ladder(basis, bridge, Mode::Left, Direction::Lower),
                            1.0 / bridge.width_ratio);
}

OperatorMatrix quadrature_lz(const Quadratures& q) { return q.x * q.py - q.y * q.px; }

SqueezeResult squeeze_unitary(const FockBasis& basis, double z, SqueezeOptions options) {
    const int n_max = basis.cutoff();
    SqueezeResult result;
    const double t = std::tanh(std::abs(z));
    result.leakage = std::pow(t, 2.0 * (n_max + 1));
    const double sh = std::sinh(std::abs(z));
    result.cutoff_warning = sh * sh > n_max / 4.0;
    if (result.leakage > options.leakage_threshold)
        throw Error(ErrorCode::TruncationLeakage,
                    "squeezed vacuum leaks " + std::to_string(result.leakage) +
                        " outside cutoff " + std::to_string(n_max));

    // K+ - K- only couples (n_r, n_l) to (n_r +- 1, n_l +- 1): blocks of fixed
    // spin and d = n_r - n_l, indexed by min(n_r, n_l).
    std::vector<Triplet> entries;
    for (Spin s : {Spin::Up, Spin::Down}) {
        for (int d = -n_max; d <= n_max; ++d) {
            const int len = n_max + 1 - std::abs(d);
            const int r0 = std::max(d, 0);
            const int l0 = std::max(-d, 0);
            Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(len, len);
            for (int k = 0; k + 1 < len; ++k) {
                // <k+1| a_r^dag a_l^dag |k> on the block's ladder
                const double amp = std::sqrt(static_cast<double>((r0 + k + 1) * (l0 + k + 1)));
                gen(k + 1, k) = z * amp;
                gen(k, k + 1) = -z * amp;
            }
            const Eigen::MatrixXd block = gen.exp();
            for (int i = 0; i < len; ++i)
                for (int j = 0; j < len; ++j) {
                    if (block(i, j) == 0.0) continue;
                    entries.emplace_back(
                        static_cast<Eigen::Index>(basis.index(s, r0 + i, l0 + i)),
                        static_cast<Eigen::Index>(basis.index(s, r0 + j, l0 + j)), block(i, j));
                }
        }
    }
    result.unitary = OperatorMatrix(from_triplets(basis.dim(), entries));
    return result;
}

}  // namespace chiral
