#include "tmss/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "tmss/diagnostics.hpp"
#include "tmss/errors.hpp"
#include "tmss/laguerre.hpp"

namespace tmss {

int shape_dim(const Shape& shape)
{
    int dim = 1;
    for (int d : shape) {
        if (d < 1) throw ShapeError("shape factor must be positive");
        dim *= d;
    }
    return dim;
}

int cutoff_for_geometric_tail(double ratio, double tail_tol)
{
    if (!(ratio >= 0.0 && ratio < 1.0)) throw DomainError("geometric ratio must lie in [0, 1)");
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw DomainError("tail_tol must lie in (0, 1)");
    if (ratio == 0.0) return 1;
    // sum_{n>N} ratio^n = ratio^{N+1} / (1 - ratio)
    int cutoff = 1;
    while (std::pow(ratio, cutoff + 1) / (1.0 - ratio) >= tail_tol) ++cutoff;
    return cutoff;
}

// ---------------------------------------------------------------------------

FockSpace::FockSpace(int cutoff, double tail_tol) : cutoff_(cutoff), tail_tol_(tail_tol)
{
    if (cutoff < 1) throw DomainError("FockSpace cutoff must be >= 1");
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw DomainError("FockSpace tail_tol must lie in (0, 1)");
}

FockSpace FockSpace::for_geometric_tail(double ratio, double tail_tol)
{
    return FockSpace(cutoff_for_geometric_tail(ratio, tail_tol), tail_tol);
}

// ---------------------------------------------------------------------------

StateVector::StateVector(CVector amplitudes, Shape shape)
    : amplitudes_(std::move(amplitudes)), shape_(std::move(shape))
{
    if (shape_dim(shape_) != amplitudes_.size()) throw ShapeError("state size does not match shape");
    const double n2 = amplitudes_.squaredNorm();
    if (std::abs(n2 - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "state vector is not normalized (|psi|^2 - 1 = " << n2 - 1.0 << ")";
        throw DomainError(msg.str());
    }
}

StateVector StateVector::normalized(CVector amplitudes, Shape shape, double discarded_mass)
{
    const double norm = amplitudes.norm();
    if (!(norm > 1e-14)) throw DomainError("cannot normalize a zero vector");
    amplitudes /= norm;
    StateVector out(std::move(amplitudes), std::move(shape));
    out.discarded_mass_ = discarded_mass;
    return out;
}

StateVector StateVector::basis(const Shape& shape, const std::vector<int>& index)
{
    if (index.size() != shape.size()) throw ShapeError("basis index rank does not match shape");
    int flat = 0;
    for (std::size_t k = 0; k < shape.size(); ++k) {
        if (index[k] < 0 || index[k] >= shape[k]) throw DomainError("basis index out of range");
        flat = flat * shape[k] + index[k];
    }
    CVector v = CVector::Zero(shape_dim(shape));
    v[flat] = 1.0;
    return StateVector(std::move(v), shape);
}

DensityMatrix StateVector::to_density() const
{
    return DensityMatrix(amplitudes_ * amplitudes_.adjoint(), shape_, discarded_mass_, DensityMatrix::Trusted{});
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(CMatrix matrix, Shape shape) : matrix_(std::move(matrix)), shape_(std::move(shape))
{
    if (matrix_.rows() != matrix_.cols()) throw ShapeError("density matrix must be square");
    if (shape_dim(shape_) != matrix_.rows()) throw ShapeError("density matrix size does not match shape");
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw DomainError("density matrix is not Hermitian");
    if (std::abs(matrix_.trace() - cd(1.0)) > 1e-12) throw DomainError("density matrix trace differs from 1");
    double min_eig;
    if (is_number_diagonal(0.0)) {
        min_eig = matrix_.diagonal().real().minCoeff();
    } else {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
        min_eig = solver.eigenvalues().minCoeff();
    }
    if (min_eig < -1e-10) throw DomainError("density matrix has a negative eigenvalue");
}

DensityMatrix::DensityMatrix(CMatrix matrix, Shape shape, double discarded_mass, Trusted)
    : matrix_(std::move(matrix)), shape_(std::move(shape)), discarded_mass_(discarded_mass)
{
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& populations, double discarded_mass)
{
    double total = 0.0;
    for (double p : populations) {
        if (p < 0.0) throw DomainError("negative population");
        total += p;
    }
    if (!(total > 0.0)) throw DomainError("populations sum to zero");
    const int dim = static_cast<int>(populations.size());
    CMatrix m = CMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) m(n, n) = populations[n] / total;
    return DensityMatrix(std::move(m), Shape{dim}, discarded_mass, Trusted{});
}

double DensityMatrix::purity() const
{
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return matrix_.squaredNorm();
}

bool DensityMatrix::is_number_diagonal(double tol) const
{
    for (int j = 0; j < matrix_.cols(); ++j)
        for (int i = 0; i < matrix_.rows(); ++i)
            if (i != j && std::abs(matrix_(i, j)) > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------

Operator::Operator(CMatrix matrix, Shape shape) : matrix_(std::move(matrix)), shape_(std::move(shape))
{
    if (matrix_.rows() != matrix_.cols()) throw ShapeError("operator must be square");
    if (shape_dim(shape_) != matrix_.rows()) throw ShapeError("operator size does not match shape");
}

Operator Operator::adjoint() const { return Operator(matrix_.adjoint(), shape_); }

CVector Operator::apply(const CVector& v) const
{
    if (v.size() != matrix_.cols()) throw ShapeError("operator/vector size mismatch");
    return matrix_ * v;
}

cd Operator::expectation(const StateVector& psi) const
{
    if (psi.shape() != shape_) throw ShapeError("operator/state shape mismatch");
    return psi.amplitudes().dot(matrix_ * psi.amplitudes());
}

cd Operator::expectation(const DensityMatrix& rho) const
{
    if (rho.shape() != shape_) throw ShapeError("operator/state shape mismatch");
    // Tr(rho A) without forming the product
    return (rho.matrix().transpose().cwiseProduct(matrix_)).sum();
}

double Operator::hermiticity_defect() const
{
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

Operator Operator::operator*(const Operator& rhs) const
{
    if (rhs.shape_ != shape_) throw ShapeError("operator product shape mismatch");
    return Operator(matrix_ * rhs.matrix_, shape_);
}

Operator Operator::operator+(const Operator& rhs) const
{
    if (rhs.shape_ != shape_) throw ShapeError("operator sum shape mismatch");
    return Operator(matrix_ + rhs.matrix_, shape_);
}

Operator Operator::operator-(const Operator& rhs) const
{
    if (rhs.shape_ != shape_) throw ShapeError("operator difference shape mismatch");
    return Operator(matrix_ - rhs.matrix_, shape_);
}

Operator Operator::operator*(cd scale) const { return Operator(matrix_ * scale, shape_); }

// ---------------------------------------------------------------------------

Operator identity(int dim) { return Operator(CMatrix::Identity(dim, dim), Shape{dim}); }

Operator destroy(const FockSpace& space)
{
    const int dim = space.dim();
    CMatrix m = CMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return Operator(std::move(m), Shape{dim});
}

Operator create(const FockSpace& space) { return destroy(space).adjoint(); }

Operator number(const FockSpace& space)
{
    const int dim = space.dim();
    CMatrix m = CMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
    return Operator(std::move(m), Shape{dim});
}

Operator sigma_plus()
{
    CMatrix m = CMatrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return Operator(std::move(m), Shape{2});
}

Operator sigma_minus() { return sigma_plus().adjoint(); }

Operator sigma_x() { return sigma_plus() + sigma_minus(); }

Operator sigma_z()
{
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = -1.0;
    m(1, 1) = 1.0;
    return Operator(std::move(m), Shape{2});
}

Operator tensor(std::span<const Operator> ops)
{
    if (ops.empty()) throw ShapeError("tensor of an empty operator list");
    CMatrix acc = ops[0].matrix();
    Shape shape = ops[0].shape();
    for (std::size_t k = 1; k < ops.size(); ++k) {
        CMatrix next = Eigen::kroneckerProduct(acc, ops[k].matrix()).eval();
        acc = std::move(next);
        shape.insert(shape.end(), ops[k].shape().begin(), ops[k].shape().end());
    }
    return Operator(std::move(acc), std::move(shape));
}

Operator tensor(std::initializer_list<Operator> ops)
{
    return tensor(std::span<const Operator>(ops.begin(), ops.size()));
}

namespace {

// Splits a row-major flat index into (kept factor index, flat index of the rest).
struct FactorSplit {
    int keep_dim;
    int inner;  // product of dims after `keep`
    int rest_dim;

    FactorSplit(const Shape& shape, int keep)
    {
        if (shape.size() < 2) throw DomainError("partial_trace needs at least two factors");
        if (keep < 0 || keep >= static_cast<int>(shape.size())) throw DomainError("partial_trace: invalid factor index");
        keep_dim = shape[keep];
        inner = 1;
        for (std::size_t k = keep + 1; k < shape.size(); ++k) inner *= shape[k];
        rest_dim = shape_dim(shape) / keep_dim;
    }

    int flat(int kept, int rest) const
    {
        const int outer = rest / inner;
        const int in = rest % inner;
        return (outer * keep_dim + kept) * inner + in;
    }
};

}  // namespace

DensityMatrix partial_trace(const StateVector& state, int keep)
{
    const FactorSplit split(state.shape(), keep);
    CMatrix coeffs(split.keep_dim, split.rest_dim);
    for (int rest = 0; rest < split.rest_dim; ++rest)
        for (int k = 0; k < split.keep_dim; ++k) coeffs(k, rest) = state.amplitudes()[split.flat(k, rest)];
    CMatrix reduced = coeffs * coeffs.adjoint();
    reduced = 0.5 * (reduced + reduced.adjoint()).eval();
    return DensityMatrix(std::move(reduced), Shape{split.keep_dim}, state.discarded_mass(), DensityMatrix::Trusted{});
}

DensityMatrix partial_trace(const DensityMatrix& state, int keep)
{
    const FactorSplit split(state.shape(), keep);
    CMatrix reduced = CMatrix::Zero(split.keep_dim, split.keep_dim);
    for (int rest = 0; rest < split.rest_dim; ++rest)
        for (int j = 0; j < split.keep_dim; ++j)
            for (int i = 0; i < split.keep_dim; ++i)
                reduced(i, j) += state.matrix()(split.flat(i, rest), split.flat(j, rest));
    return DensityMatrix(std::move(reduced), Shape{split.keep_dim}, state.discarded_mass(), DensityMatrix::Trusted{});
}

// ---------------------------------------------------------------------------

RMatrix displacement_real(double magnitude, int dim)
{
    if (magnitude < 0.0) throw DomainError("displacement_real: negative magnitude");
    RMatrix d = RMatrix::Zero(dim, dim);
    if (magnitude == 0.0) {
        d.setIdentity();
        return d;
    }
    const double x = magnitude * magnitude;
    const double log_mag = std::log(magnitude);
    // <m|D|n> = sqrt(n!/m!) a^{m-n} e^{-x/2} L_n^{(m-n)}(x) for m >= n, real a = |alpha|.
    // For m < n, <m|D(a)|n> = (-1)^{n-m} <n|D(a)|m>.
    for (int k = 0; k < dim; ++k) {
        const std::vector<double> lag = assoc_laguerre_sequence(dim - 1 - k, k, x);
        for (int n = 0; n + k < dim; ++n) {
            const int m = n + k;
            const double log_pref = 0.5 * (log_factorial(n) - log_factorial(m)) + k * log_mag - 0.5 * x;
            const double value = std::exp(log_pref) * lag[n];
            if (!std::isfinite(value)) throw NumericalGuardError("displacement matrix element overflow");
            d(m, n) = value;
            if (k > 0) d(n, m) = (k % 2 == 0) ? value : -value;
        }
    }
    return d;
}

int displaced_cutoff(int cutoff, double magnitude)
{
    if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) throw DomainError("displaced_cutoff: bad magnitude");
    if (magnitude == 0.0) return cutoff;
    // D(a)|n> spreads over roughly a^2 (2n + 1) in variance
    const double spread = magnitude * std::sqrt(2.0 * cutoff + 1.0);
    int padded = cutoff + static_cast<int>(std::ceil(magnitude * magnitude + 6.0 * spread + 10.0));
    for (int attempt = 0; attempt < 8; ++attempt) {
        const RMatrix d = displacement_real(magnitude, padded + 1);
        const Eigen::VectorXd kept = d.leftCols(cutoff + 1).colwise().squaredNorm().transpose();
        if ((1.0 - kept.array()).maxCoeff() < 1e-12) return padded;
        padded += padded / 2;
    }
    throw TruncationError("displaced_cutoff: no adequate padding found");
}

DisplacementReport displacement_report(cd alpha, const FockSpace& space)
{
    const int dim = space.dim();
    const double magnitude = std::abs(alpha);
    const double phase = std::arg(alpha);
    const RMatrix real = displacement_real(magnitude, dim);

    DisplacementReport report;
    report.matrix = real.cast<cd>();
    if (magnitude > 0.0) {
        CVector rot(dim);
        for (int n = 0; n < dim; ++n) rot[n] = std::polar(1.0, n * phase);
        report.matrix = rot.asDiagonal() * report.matrix * rot.conjugate().asDiagonal();
    }

    // Leaked weight per column: 1 - sum_{m <= N} |D_mn|^2
    const Eigen::VectorXd kept = real.colwise().squaredNorm().transpose();
    int reliable = 0;
    while (reliable < dim && 1.0 - kept[reliable] < 1e-10) ++reliable;
    report.reliable_dim = reliable;
    if (reliable > 0) {
        const CMatrix block = report.matrix.leftCols(reliable);
        const CMatrix gram = block.adjoint() * block - CMatrix::Identity(reliable, reliable);
        report.unitarity_defect = gram.cwiseAbs().maxCoeff();
    } else {
        report.unitarity_defect = 1.0;
    }
    return report;
}

Operator displacement(cd alpha, const FockSpace& space)
{
    DisplacementReport report = displacement_report(alpha, space);
    if (2 * report.reliable_dim < space.dim() || report.unitarity_defect > 1e-8) {
        std::ostringstream msg;
        msg << "displacement |alpha|=" << std::abs(alpha) << " at cutoff " << space.cutoff() << ": only "
            << report.reliable_dim << " reliable columns, defect " << report.unitarity_defect;
        diagnostics::warn("displacement-truncation", msg.str());
    }
    return Operator(std::move(report.matrix), Shape{space.dim()});
}

// ---------------------------------------------------------------------------

CMatrix expm(const CMatrix& generator)
{
    if (generator.rows() != generator.cols()) throw ShapeError("expm of a non-square matrix");
    return generator.exp();
}

CVector expm_multiply(const CMatrix& generator, const CVector& v)
{
    const int dim = static_cast<int>(generator.rows());
    if (generator.cols() != dim || v.size() != dim) throw ShapeError("expm_multiply size mismatch");

    std::vector<char> reached(dim, 0);
    std::deque<int> frontier;
    for (int i = 0; i < dim; ++i) {
        if (v[i] != cd(0.0)) {
            reached[i] = 1;
            frontier.push_back(i);
        }
    }
    // Both directions: the component must be invariant under G, and G's image of
    // a reached index j lives in column j.
    while (!frontier.empty()) {
        const int j = frontier.front();
        frontier.pop_front();
        for (int i = 0; i < dim; ++i) {
            if (!reached[i] && (generator(i, j) != cd(0.0) || generator(j, i) != cd(0.0))) {
                reached[i] = 1;
                frontier.push_back(i);
            }
        }
    }
    std::vector<int> index;
    for (int i = 0; i < dim; ++i)
        if (reached[i]) index.push_back(i);

    const int sub = static_cast<int>(index.size());
    CVector out = CVector::Zero(dim);
    if (sub == 0) return out;
    CMatrix g(sub, sub);
    CVector w(sub);
    for (int b = 0; b < sub; ++b) {
        w[b] = v[index[b]];
        for (int a = 0; a < sub; ++a) g(a, b) = generator(index[a], index[b]);
    }
    const CVector result = expm(g) * w;
    for (int a = 0; a < sub; ++a) out[index[a]] = result[a];
    return out;
}

double fidelity(const StateVector& psi, const StateVector& phi)
{
    if (psi.shape() != phi.shape()) throw ShapeError("fidelity: shape mismatch");
    return std::norm(psi.amplitudes().dot(phi.amplitudes()));
}

}  // namespace tmss

// ---------------------------------------------------------------------------

namespace tmss {

ProductSum::ProductSum(Shape shape) : shape_(std::move(shape))
{
    shape_dim(shape_);
}

ProductSum& ProductSum::add(cd coeff, std::vector<Operator> factors)
{
    if (factors.size() != shape_.size()) throw ShapeError("ProductSum term rank does not match shape");
    for (std::size_t k = 0; k < factors.size(); ++k)
        if (factors[k].shape() != Shape{shape_[k]}) throw ShapeError("ProductSum factor dimension mismatch");
    terms_.push_back(ProductTerm{coeff, std::move(factors)});
    return *this;
}

std::vector<std::pair<int, cd>> ProductSum::column(int col) const
{
    const std::size_t rank = shape_.size();
    std::vector<int> digits(rank);
    for (std::size_t k = rank; k-- > 0;) {
        digits[k] = col % shape_[k];
        col /= shape_[k];
    }

    std::vector<std::pair<int, cd>> out;
    for (const ProductTerm& term : terms_) {
        // partial products over factors 0..k, as (flat row prefix, value)
        std::vector<std::pair<int, cd>> partial{{0, term.coeff}};
        for (std::size_t k = 0; k < rank && !partial.empty(); ++k) {
            const CMatrix& m = term.factors[k].matrix();
            std::vector<std::pair<int, cd>> next;
            for (int row = 0; row < shape_[k]; ++row) {
                const cd value = m(row, digits[k]);
                if (value == cd(0.0)) continue;
                for (const auto& [prefix, acc] : partial) next.emplace_back(prefix * shape_[k] + row, acc * value);
            }
            partial = std::move(next);
        }
        out.insert(out.end(), partial.begin(), partial.end());
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, cd>> merged;
    for (const auto& entry : out) {
        if (!merged.empty() && merged.back().first == entry.first)
            merged.back().second += entry.second;
        else
            merged.push_back(entry);
    }
    return merged;
}

Operator ProductSum::dense() const
{
    const int dim = shape_dim(shape_);
    CMatrix m = CMatrix::Zero(dim, dim);
    for (const ProductTerm& term : terms_) m += term.coeff * tensor(term.factors).matrix();
    return Operator(std::move(m), shape_);
}

CVector expm_multiply(const ProductSum& generator, const CVector& v)
{
    const int dim = shape_dim(generator.shape());
    if (v.size() != dim) throw ShapeError("expm_multiply size mismatch");

    // The generators used here are Hermitian or anti-Hermitian, so following
    // column sparsity alone reaches the full invariant component.
    std::vector<int> order;
    std::vector<int> slot(dim, -1);
    std::vector<std::vector<std::pair<int, cd>>> columns;
    std::deque<int> frontier;
    for (int i = 0; i < dim; ++i) {
        if (v[i] != cd(0.0)) {
            slot[i] = static_cast<int>(order.size());
            order.push_back(i);
            frontier.push_back(i);
        }
    }
    while (!frontier.empty()) {
        const int j = frontier.front();
        frontier.pop_front();
        auto col = generator.column(j);
        for (const auto& [row, value] : col) {
            if (slot[row] < 0) {
                slot[row] = static_cast<int>(order.size());
                order.push_back(row);
                frontier.push_back(row);
            }
        }
        columns.resize(std::max<std::size_t>(columns.size(), slot[j] + 1));
        columns[slot[j]] = std::move(col);
    }

    const int sub = static_cast<int>(order.size());
    CVector out = CVector::Zero(dim);
    if (sub == 0) return out;
    CMatrix g = CMatrix::Zero(sub, sub);
    CVector w(sub);
    for (int b = 0; b < sub; ++b) {
        w[b] = v[order[b]];
        for (const auto& [row, value] : columns[b]) g(slot[row], b) += value;
    }
    const CVector result = expm(g) * w;
    for (int a = 0; a < sub; ++a) out[order[a]] = result[a];
    return out;
}

}  // namespace tmss
