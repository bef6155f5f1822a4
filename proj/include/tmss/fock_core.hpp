#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tmss {

using cd = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

// Ordered factor dimensions, e.g. {2, N+1, N+1} for qubit (x) mode a (x) mode b.
// Basis index is row-major: the last factor varies fastest.
using Shape = std::vector<int>;

inline constexpr double kDefaultTailTol = 1e-10;

int shape_dim(const Shape& shape);

// Smallest cutoff N >= 1 with sum_{n>N} ratio^n < tail_tol.
int cutoff_for_geometric_tail(double ratio, double tail_tol = kDefaultTailTol);

// Truncation metadata for one bosonic mode: Fock states |0> ... |cutoff>.
class FockSpace {
public:
    explicit FockSpace(int cutoff, double tail_tol = kDefaultTailTol);

    static FockSpace for_geometric_tail(double ratio, double tail_tol = kDefaultTailTol);

    int cutoff() const { return cutoff_; }
    int dim() const { return cutoff_ + 1; }
    double tail_tol() const { return tail_tol_; }

private:
    int cutoff_;
    double tail_tol_;
};

class DensityMatrix;

class StateVector {
public:
    // Squared norm must already be 1 within 1e-12.
    StateVector(CVector amplitudes, Shape shape);

    // Divides by the norm; throws DomainError for a zero vector.
    // `discarded_mass` records probability lost to truncation before renormalizing.
    static StateVector normalized(CVector amplitudes, Shape shape, double discarded_mass = 0.0);

    static StateVector basis(const Shape& shape, const std::vector<int>& index);

    const CVector& amplitudes() const { return amplitudes_; }
    const Shape& shape() const { return shape_; }
    int dim() const { return static_cast<int>(amplitudes_.size()); }
    double discarded_mass() const { return discarded_mass_; }

    DensityMatrix to_density() const;

private:
    CVector amplitudes_;
    Shape shape_;
    double discarded_mass_ = 0.0;
};

class DensityMatrix {
public:
    // Validates Hermiticity and unit trace (1e-12) and spectrum >= -1e-10.
    DensityMatrix(CMatrix matrix, Shape shape);

    // Single-mode number-diagonal state; populations are renormalized.
    static DensityMatrix diagonal(const std::vector<double>& populations, double discarded_mass = 0.0);

    const CMatrix& matrix() const { return matrix_; }
    const Shape& shape() const { return shape_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }
    double discarded_mass() const { return discarded_mass_; }

    double purity() const;
    bool is_number_diagonal(double tol = 1e-12) const;

private:
    struct Trusted {};
    DensityMatrix(CMatrix matrix, Shape shape, double discarded_mass, Trusted);

    CMatrix matrix_;
    Shape shape_;
    double discarded_mass_ = 0.0;

    friend class StateVector;
    friend DensityMatrix partial_trace(const StateVector&, int);
    friend DensityMatrix partial_trace(const DensityMatrix&, int);
};

class Operator {
public:
    Operator(CMatrix matrix, Shape shape);

    const CMatrix& matrix() const { return matrix_; }
    const Shape& shape() const { return shape_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }

    Operator adjoint() const;
    CVector apply(const CVector& v) const;
    cd expectation(const StateVector& psi) const;
    cd expectation(const DensityMatrix& rho) const;

    // max |H - H^dagger|
    double hermiticity_defect() const;

    Operator operator*(const Operator& rhs) const;
    Operator operator+(const Operator& rhs) const;
    Operator operator-(const Operator& rhs) const;
    Operator operator*(cd scale) const;

private:
    CMatrix matrix_;
    Shape shape_;
};

inline Operator operator*(cd scale, const Operator& op) { return op * scale; }

Operator identity(int dim);
Operator destroy(const FockSpace& space);
Operator create(const FockSpace& space);
Operator number(const FockSpace& space);

// Qubit convention: index 0 = |g>, index 1 = |e>; sigma_plus = |e><g|.
Operator sigma_plus();
Operator sigma_minus();
Operator sigma_x();
Operator sigma_z();

// Kronecker product in the given order; shapes concatenate.
Operator tensor(std::span<const Operator> ops);
Operator tensor(std::initializer_list<Operator> ops);

DensityMatrix partial_trace(const StateVector& state, int keep);
DensityMatrix partial_trace(const DensityMatrix& state, int keep);

// Closed-form truncated displacement D(alpha) = exp(alpha a^dagger - alpha^* a).
//
// A truncated displacement is never exactly unitary: columns near the cutoff
// leak weight above it. `reliable_dim` counts the leading columns whose leaked
// weight is below 1e-10; `unitarity_defect` is max |D^dagger D - I| over that
// leading block.
struct DisplacementReport {
    CMatrix matrix;
    int reliable_dim = 0;
    double unitarity_defect = 0.0;
};

DisplacementReport displacement_report(cd alpha, const FockSpace& space);

// Warns through diagnostics when fewer than half of the columns are reliable
// or the defect on the reliable block exceeds 1e-8.
Operator displacement(cd alpha, const FockSpace& space);

// Real matrix D(|alpha|); D(|alpha| e^{i phi}) = R(phi) D(|alpha|) R(phi)^dagger
// with R(phi) = diag(e^{i n phi}).
RMatrix displacement_real(double magnitude, int dim);

// Smallest tested cutoff M >= cutoff such that D(magnitude) on |0>..|M> keeps
// every column n <= cutoff inside the space (leaked weight < 1e-12). Embedding a
// state into M before displacing it makes the truncated displacement exact on
// the state's support.
int displaced_cutoff(int cutoff, double magnitude);

// Dense matrix exponential.
CMatrix expm(const CMatrix& generator);

// exp(generator) v, evaluated on the smallest coordinate subspace containing
// supp(v) that the generator leaves invariant (connected component of the
// generator's sparsity graph). Exact, not an approximation.
CVector expm_multiply(const CMatrix& generator, const CVector& v);

// Sum of product operators, sum_k c_k (F_k0 (x) F_k1 (x) ...), kept in factored
// form so that generators on large multi-mode spaces never have to be formed densely.
struct ProductTerm {
    cd coeff;
    std::vector<Operator> factors;
};

class ProductSum {
public:
    explicit ProductSum(Shape shape);

    ProductSum& add(cd coeff, std::vector<Operator> factors);

    const Shape& shape() const { return shape_; }
    const std::vector<ProductTerm>& terms() const { return terms_; }

    // Nonzero entries (row, value) of column `col` of the full operator.
    std::vector<std::pair<int, cd>> column(int col) const;

    Operator dense() const;

private:
    Shape shape_;
    std::vector<ProductTerm> terms_;
};

// exp(generator) v on the invariant coordinate subspace reachable from supp(v).
CVector expm_multiply(const ProductSum& generator, const CVector& v);

// |<psi|phi>|^2
double fidelity(const StateVector& psi, const StateVector& phi);

}  // namespace tmss
