#pragma once

// Symplectic and matrix-analysis primitives.
//
// Phase-space vectors are stored in xxpp ordering (x_1..x_n, p_1..p_n) unless
// a value carries Ordering::ModeWise, which only occurs at API boundaries.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gravlocc/config.hpp"

namespace gravlocc {

using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

enum class Ordering { ModeWise, XXPP };

// Index of mode-wise component i in xxpp ordering.
inline Eigen::Index modewise_to_xxpp_index(Eigen::Index i, Eigen::Index n) {
    return (i % 2 == 0) ? i / 2 : n + i / 2;
}

// Permutation P with v_xxpp = P v_modewise.
inline RMatrix ordering_permutation(int n) {
    RMatrix P = RMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < 2 * n; ++i) P(modewise_to_xxpp_index(i, n), i) = 1.0;
    return P;
}

// Conjugates a 2n x 2n matrix from one ordering to another.
inline RMatrix reorder(const RMatrix& M, Ordering from, Ordering to) {
    if (from == to) return M;
    const int n = static_cast<int>(M.rows() / 2);
    const RMatrix P = ordering_permutation(n);
    return from == Ordering::ModeWise ? RMatrix(P * M * P.transpose())
                                      : RMatrix(P.transpose() * M * P);
}

inline RVector reorder(const RVector& v, Ordering from, Ordering to) {
    if (from == to) return v;
    const int n = static_cast<int>(v.size() / 2);
    const RMatrix P = ordering_permutation(n);
    return from == Ordering::ModeWise ? RVector(P * v) : RVector(P.transpose() * v);
}

struct SymplecticForm {
    int n = 1;
    Ordering ordering = Ordering::XXPP;

    RMatrix matrix() const {
        RMatrix O = RMatrix::Zero(2 * n, 2 * n);
        O.topRightCorner(n, n).setIdentity();
        O.bottomLeftCorner(n, n) = -RMatrix::Identity(n, n);
        return reorder(O, Ordering::XXPP, ordering);
    }
};

inline RMatrix omega(int n, Ordering ordering = Ordering::XXPP) {
    return SymplecticForm{n, ordering}.matrix();
}

// ||S Omega S^T - Omega||_inf (max row sum).
inline double symplectic_defect(const RMatrix& S, Ordering ordering = Ordering::XXPP) {
    const RMatrix O = omega(static_cast<int>(S.rows() / 2), ordering);
    return (S * O * S.transpose() - O).cwiseAbs().rowwise().sum().maxCoeff();
}

class SymplecticMatrix {
public:
    SymplecticMatrix(RMatrix entries, Ordering ordering = Ordering::XXPP,
                     const Tolerances& tol = default_tolerances())
        : S_(std::move(entries)), ordering_(ordering) {
        if (S_.rows() != S_.cols() || S_.rows() % 2 != 0 || S_.rows() == 0)
            throw Error(ErrorKind::NotSymplectic, "matrix must be 2n x 2n");
        const double defect = symplectic_defect(S_, ordering_);
        if (!(defect <= tol.symp))
            throw Error(ErrorKind::NotSymplectic,
                        "||S Omega S^T - Omega||_inf = " + std::to_string(defect));
        const double det = S_.determinant();
        if (!(std::abs(det - 1.0) <= tol.symp * std::max(1.0, S_.norm())))
            throw Error(ErrorKind::NotSymplectic, "det S = " + std::to_string(det));
    }

    int n() const { return static_cast<int>(S_.rows() / 2); }
    Ordering ordering() const { return ordering_; }
    const RMatrix& entries() const { return S_; }
    RMatrix in(Ordering o) const { return reorder(S_, ordering_, o); }

    // S^{-1} = Omega S^T Omega^T, in xxpp ordering.
    RMatrix inverse_xxpp() const {
        const RMatrix S = in(Ordering::XXPP);
        const RMatrix O = omega(n());
        return O * S.transpose() * O.transpose();
    }

private:
    RMatrix S_;
    Ordering ordering_;
};

// Subset J of modes {0..n-1}; carries both Xi_J and Omega_J.
class SignedModeMask {
public:
    SignedModeMask() = default;
    explicit SignedModeMask(int n) : in_(static_cast<std::size_t>(n), 0) {}
    SignedModeMask(int n, const std::vector<int>& members) : SignedModeMask(n) {
        for (int j : members) {
            if (j < 0 || j >= n) throw Error(ErrorKind::IndexOutOfRange, "mode index " + std::to_string(j));
            in_[static_cast<std::size_t>(j)] = 1;
        }
    }

    int n() const { return static_cast<int>(in_.size()); }
    bool contains(int j) const { return in_[static_cast<std::size_t>(j)] != 0; }
    int size() const { return static_cast<int>(std::count(in_.begin(), in_.end(), 1)); }

    std::vector<int> members() const {
        std::vector<int> out;
        for (int j = 0; j < n(); ++j)
            if (contains(j)) out.push_back(j);
        return out;
    }
    std::vector<int> non_members() const {
        std::vector<int> out;
        for (int j = 0; j < n(); ++j)
            if (!contains(j)) out.push_back(j);
        return out;
    }

    SignedModeMask complement() const {
        SignedModeMask c(n());
        for (std::size_t j = 0; j < in_.size(); ++j) c.in_[j] = in_[j] ? 0 : 1;
        return c;
    }

    // '1' for members, mode 1 first.
    std::string bitstring() const {
        std::string s;
        for (char b : in_) s.push_back(b ? '1' : '0');
        return s;
    }

    // Xi_J = diag(+1 on J, -1 on J^c).
    RVector xi_diagonal() const {
        RVector d(n());
        for (int j = 0; j < n(); ++j) d(j) = contains(j) ? 1.0 : -1.0;
        return d;
    }
    RMatrix xi() const { return xi_diagonal().asDiagonal(); }

    // Omega_J: +(0,1;-1,0) on modes in J, -(0,1;-1,0) elsewhere.
    RMatrix omega_J(Ordering ordering = Ordering::XXPP) const {
        const int m = n();
        RMatrix O = RMatrix::Zero(2 * m, 2 * m);
        O.topRightCorner(m, m) = xi();
        O.bottomLeftCorner(m, m) = -xi();
        return reorder(O, Ordering::XXPP, ordering);
    }

    friend bool operator==(const SignedModeMask& a, const SignedModeMask& b) { return a.in_ == b.in_; }

    // Lexicographic order on the sorted member lists.
    friend bool lex_less(const SignedModeMask& a, const SignedModeMask& b) {
        const auto ma = a.members();
        const auto mb = b.members();
        return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
    }

private:
    std::vector<char> in_;
};

struct CovarianceMatrix {
    RMatrix W;
    RVector mean;
    Ordering ordering = Ordering::XXPP;

    int n() const { return static_cast<int>(W.rows() / 2); }
};

// Sigma_J: -1 on the momentum rows of modes in J.
inline RMatrix partial_transpose_signature(const SignedModeMask& mask, Ordering ordering = Ordering::XXPP) {
    const int n = mask.n();
    RVector d = RVector::Ones(2 * n);
    for (int j = 0; j < n; ++j)
        if (mask.contains(j)) d(n + j) = -1.0;
    return reorder(RMatrix(d.asDiagonal()), Ordering::XXPP, ordering);
}

inline CovarianceMatrix partial_transpose(const CovarianceMatrix& c, const SignedModeMask& mask) {
    const RMatrix Sig = partial_transpose_signature(mask, c.ordering);
    CovarianceMatrix out = c;
    out.W = Sig * c.W * Sig;
    if (c.mean.size() == c.W.rows()) out.mean = Sig * c.mean;
    return out;
}

inline double hermitian_defect(const CMatrix& H) {
    return (H - H.adjoint()).cwiseAbs().rowwise().sum().maxCoeff();
}

// Ascending real spectrum of a Hermitian matrix.
inline std::vector<double> hermitian_eigenvalues(const CMatrix& H, const Tolerances& tol = default_tolerances()) {
    if (H.rows() != H.cols()) throw Error(ErrorKind::NotHermitian, "matrix is not square");
    if (H.rows() == 0) return {};
    if (!(hermitian_defect(H) <= tol.herm))
        throw Error(ErrorKind::NotHermitian, "||H - H^dag||_inf = " + std::to_string(hermitian_defect(H)));
    const CMatrix Hs = 0.5 * (H + H.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(Hs, Eigen::EigenvaluesOnly);
    const RVector ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

inline std::vector<double> symmetric_eigenvalues(const RMatrix& A) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
    const RVector ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

// Singular values in descending order.
template <typename Derived>
std::vector<double> singular_values(const Eigen::MatrixBase<Derived>& X) {
    using Plain = typename Derived::PlainObject;
    if (X.size() == 0) return {};
    Eigen::BDCSVD<Plain> svd(X.eval());
    const auto& s = svd.singularValues();
    std::vector<double> out(s.data(), s.data() + s.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& X) {
    double sum = 0.0;
    for (double s : singular_values(X)) sum += s;
    return sum;
}

template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& X) {
    const auto s = singular_values(X);
    return s.empty() ? 0.0 : s.front();
}

inline void require_positive_definite(const RMatrix& W, const Tolerances& tol) {
    if (W.rows() != W.cols() || W.rows() % 2 != 0 || W.rows() == 0)
        throw Error(ErrorKind::NonPositiveDefinite, "covariance matrix must be 2n x 2n");
    if ((W - W.transpose()).cwiseAbs().maxCoeff() > tol.symp * std::max(1.0, W.cwiseAbs().maxCoeff()))
        throw Error(ErrorKind::NonPositiveDefinite, "covariance matrix is not symmetric");
    const auto ev = symmetric_eigenvalues(W);
    if (!(ev.front() > tol.symp))
        throw Error(ErrorKind::NonPositiveDefinite, "min eigenvalue " + std::to_string(ev.front()));
}

// Symplectic eigenvalues nu_1 >= ... >= nu_n, from the Hermitian matrix
// W^{1/2} (i Omega) W^{1/2} whose spectrum is {+-nu_j}.
inline std::vector<double> williamson_eigenvalues(const CovarianceMatrix& c,
                                                  const Tolerances& tol = default_tolerances()) {
    require_positive_definite(c.W, tol);
    const int n = c.n();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (c.W + c.W.transpose()));
    const RMatrix root = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
                         es.eigenvectors().transpose();
    RMatrix A = root * omega(n, c.ordering) * root;
    A = 0.5 * (A - A.transpose()).eval();
    const CMatrix H = std::complex<double>(0.0, 1.0) * A.cast<std::complex<double>>();
    auto ev = hermitian_eigenvalues(H, tol);
    std::vector<double> nu(ev.end() - n, ev.end());
    std::sort(nu.begin(), nu.end(), std::greater<>());
    return nu;
}

// Largest eigenvalue of the Gaussian operator with covariance W: prod 2/(nu_j+1).
inline double gaussian_operator_max_eigenvalue(const CovarianceMatrix& c,
                                               const Tolerances& tol = default_tolerances()) {
    double log_value = 0.0;
    for (double nu : williamson_eigenvalues(c, tol)) log_value += std::log(2.0 / (nu + 1.0));
    return std::exp(log_value);
}

// True iff every nu_j >= 1 - tol.symp, i.e. W + i Omega >= 0.
inline bool is_valid_state(const CovarianceMatrix& c, const Tolerances& tol = default_tolerances()) {
    const auto nu = williamson_eigenvalues(c, tol);
    return nu.back() >= 1.0 - tol.symp;
}

namespace detail {

inline double norm_inf(const RMatrix& A) { return A.cwiseAbs().rowwise().sum().maxCoeff(); }
inline double norm_1(const RMatrix& A) { return A.cwiseAbs().colwise().sum().maxCoeff(); }

// Pade approximant r_m(A) = (V - U)^{-1} (V + U) for m in {3,5,7,9,13}.
inline RMatrix pade(const RMatrix& A, int m) {
    const Eigen::Index N = A.rows();
    const RMatrix I = RMatrix::Identity(N, N);
    const RMatrix A2 = A * A;
    RMatrix U, V;
    if (m == 13) {
        static constexpr std::array<double, 14> b = {
            64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
            129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
            1323241920.0,        40840800.0,          960960.0,           16380.0,
            182.0,               1.0};
        const RMatrix A4 = A2 * A2;
        const RMatrix A6 = A4 * A2;
        U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
        V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
    } else {
        static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
        static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
        static constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                                     25200.0,    1512.0,    56.0,      1.0};
        static constexpr std::array<double, 10> b9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                                      302702400.0,   30270240.0,   2162160.0,
                                                      110880.0,      3960.0,       90.0,
                                                      1.0};
        const double* b = m == 3 ? b3.data() : m == 5 ? b5.data() : m == 7 ? b7.data() : b9.data();
        RMatrix power = I;
        RMatrix odd = b[1] * I;
        V = b[0] * I;
        for (int k = 1; 2 * k <= m; ++k) {
            power = power * A2;
            V += b[2 * k] * power;
            odd += b[2 * k + 1] * power;
        }
        U = A * odd;
    }
    return (V - U).partialPivLu().solve(V + U);
}

}  // namespace detail

// e^A by scaling and squaring with Pade approximants (Higham 2005).
inline RMatrix matrix_exponential(const RMatrix& A, const Tolerances& tol = default_tolerances()) {
    if (A.rows() != A.cols()) throw Error(ErrorKind::InvalidArgument, "matrix_exponential: not square");
    if (!A.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix_exponential: non-finite entry");
    if (A.size() == 0) return A;
    if (detail::norm_inf(A) > tol.expm_norm_cap)
        throw Error(ErrorKind::Overflow, "matrix_exponential: ||A||_inf = " +
                                             std::to_string(detail::norm_inf(A)) + " exceeds cap " +
                                             std::to_string(tol.expm_norm_cap));
    static constexpr std::array<std::pair<int, double>, 4> thetas = {
        {{3, 1.495585217958292e-2}, {5, 2.539398330063230e-1}, {7, 9.504178996162932e-1},
         {9, 2.097847961257068e0}}};
    const double a1 = detail::norm_1(A);
    for (const auto& [m, theta] : thetas)
        if (a1 <= theta) return detail::pade(A, m);
    constexpr double theta13 = 5.371920351148152;
    int s = 0;
    if (a1 > theta13) s = static_cast<int>(std::ceil(std::log2(a1 / theta13)));
    RMatrix X = detail::pade(A / std::ldexp(1.0, s), 13);
    for (int k = 0; k < s; ++k) X = X * X;
    if (!X.allFinite()) throw Error(ErrorKind::Overflow, "matrix_exponential: result overflowed");
    return X;
}

}  // namespace gravlocc
