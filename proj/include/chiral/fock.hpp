/**
 * @file fock.hpp
 * @brief Truncated (right chiral mode) x (left chiral mode) x (spin) Hilbert
 *        space and the operators that live on it.
 *
 * Flat index = s (N+1)^2 + n_r (N+1) + n_l with s = 0 for spin up, 1 for spin
 * down. Raising a mode that already holds N quanta gives zero.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "chiral/model.hpp"

namespace chiral {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Spin { Up = 0, Down = 1 };
enum class Mode { Right, Left };
enum class Direction { Raise, Lower };
/// Which ladder family (width) a basis or operator refers to.
enum class Family { Omega, OmegaTilde };

struct FockState {
    Spin spin = Spin::Up;
    int n_r = 0;
    int n_l = 0;
};

class FockBasis {
public:
    explicit FockBasis(int cutoff);

    int cutoff() const { return cutoff_; }
    std::size_t modes_dim() const { return static_cast<std::size_t>(cutoff_ + 1); }
    std::size_t orbital_dim() const { return modes_dim() * modes_dim(); }
    std::size_t dim() const { return 2 * orbital_dim(); }

    std::size_t index(Spin s, int n_r, int n_l) const;
    FockState state(std::size_t index) const;

    /// Both occupations at most N - margin.
    bool interior(std::size_t index, int margin = 2) const;
    /// Twice the conserved J_z = L_z + S_z, an odd integer.
    int twice_jz(std::size_t index) const;

    Vector unit(Spin s, int n_r, int n_l) const;

private:
    int cutoff_;
};

class OperatorMatrix {
public:
    OperatorMatrix() = default;
    explicit OperatorMatrix(SparseMatrix m, bool hermitian = false);

    const SparseMatrix& matrix() const { return m_; }
    bool hermitian() const { return hermitian_; }
    Eigen::Index dim() const { return m_.rows(); }

    OperatorMatrix adjoint() const;
    DenseMatrix dense() const { return DenseMatrix(m_); }
    /// max |M - M^dag| over entries.
    double hermiticity_defect() const;
    OperatorMatrix& declare_hermitian(double tol = 1e-12);

    Vector operator*(const Vector& v) const { return m_ * v; }

    friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(Complex s, const OperatorMatrix& a);

    /// Sparse triplet dump, one "row col re im" line per stored entry.
    void write_triplets(std::ostream& out) const;

private:
    SparseMatrix m_;
    bool hermitian_ = false;
};

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Largest ||M e_i|| over basis vectors e_i whose occupations are at most
/// N - margin: the size of an operator identity away from the cutoff.
double interior_norm(const OperatorMatrix& m, const FockBasis& basis, int margin = 2);

OperatorMatrix identity(const FockBasis& basis);
OperatorMatrix ladder(const FockBasis& basis, Mode mode, Direction direction);
OperatorMatrix number(const FockBasis& basis, Mode mode);

/// omega-tilde family ladder written on the omega Fock basis:
///   a~_r = mu_tilde a_r + mu a_l^dag,  a~_l = mu_tilde a_l + mu a_r^dag.
OperatorMatrix tilde_ladder(const FockBasis& basis, const Bogoliubov& bridge, Mode mode,
                            Direction direction);

OperatorMatrix sigma_z(const FockBasis& basis);
/// |up><down|
OperatorMatrix sigma_plus(const FockBasis& basis);
OperatorMatrix sigma_minus(const FockBasis& basis);

/// hbar (n_r - n_l).
OperatorMatrix angular_momentum_lz(const FockBasis& basis);

struct Quadratures {
    OperatorMatrix x, y, px, py;
};

/// Cartesian position and momentum in units of Delta and hbar/Delta, built
/// from the basis' own ladders with width `width` (1 for the omega family).
Quadratures quadratures(const FockBasis& basis, double width = 1.0);

/// The same physical x, y, p built from the omega-tilde ladders of `bridge`
/// (width Delta~ = 1 / width_ratio) on the omega Fock basis.
Quadratures tilde_quadratures(const FockBasis& basis, const Bogoliubov& bridge);

/// x p_y - y p_x from quadrature products.
OperatorMatrix quadrature_lz(const Quadratures& q);

struct SqueezeResult {
    OperatorMatrix unitary;
    /// Weight of the exact squeezed vacuum outside the truncated space,
    /// tanh^{2(N+1)}|z|.
    double leakage = 0.0;
    /// sinh^2|z| > N/4: the squeezed states crowd the cutoff.
    bool cutoff_warning = false;
};

struct SqueezeOptions {
    double leakage_threshold = 1e-8;
};

/// exp(z (K+ - K-)) with K+ = a_r^dag a_l^dag, evaluated by dense
/// scaling-and-squaring on each (spin, L_z) block of the generator.
/// Throws TruncationLeakage when the leakage exceeds the threshold.
SqueezeResult squeeze_unitary(const FockBasis& basis, double z, SqueezeOptions options = {});

}  // namespace chiral
