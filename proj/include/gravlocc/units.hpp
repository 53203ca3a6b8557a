#pragma once

// Minimal runtime-checked SI quantities. Exponents of (kg, m, s, K, A) are
// stored in sixths so that square and cube roots stay exact.

#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "gravlocc/config.hpp"

namespace gravlocc {

struct Dim {
    std::array<int, 5> e{};  // sixths of kg, m, s, K, A

    friend bool operator==(const Dim&, const Dim&) = default;
    Dim operator+(const Dim& o) const {
        Dim r;
        for (int i = 0; i < 5; ++i) r.e[i] = e[i] + o.e[i];
        return r;
    }
    Dim operator-(const Dim& o) const {
        Dim r;
        for (int i = 0; i < 5; ++i) r.e[i] = e[i] - o.e[i];
        return r;
    }
    // Scale by num/den; throws unless the result stays in sixths.
    Dim scaled(int num, int den) const {
        Dim r;
        for (int i = 0; i < 5; ++i) {
            if ((e[i] * num) % den != 0) throw Error(ErrorKind::UnitMismatch, "non-representable unit power");
            r.e[i] = e[i] * num / den;
        }
        return r;
    }

    std::string str() const {
        static constexpr std::array<const char*, 5> names = {"kg", "m", "s", "K", "A"};
        std::ostringstream os;
        bool first = true;
        for (int i = 0; i < 5; ++i) {
            if (e[i] == 0) continue;
            if (!first) os << ' ';
            first = false;
            os << names[i];
            if (e[i] != 6) {
                os << '^';
                if (e[i] % 6 == 0) os << e[i] / 6;
                else if (e[i] % 3 == 0) os << e[i] / 3 << "/2";
                else if (e[i] % 2 == 0) os << e[i] / 2 << "/3";
                else os << e[i] << "/6";
            }
        }
        return first ? "1" : os.str();
    }
};

inline Dim dim(int kg, int m, int s, int K = 0, int A = 0) { return Dim{{6 * kg, 6 * m, 6 * s, 6 * K, 6 * A}}; }

class Quantity {
public:
    Quantity() = default;
    constexpr explicit Quantity(double v) : v_(v) {}
    Quantity(double v, Dim d) : v_(v), d_(d) {}

    double value() const { return v_; }
    const Dim& dim() const { return d_; }
    std::string unit() const { return d_.str(); }
    bool dimensionless() const { return d_ == Dim{}; }

    // Value after asserting the expected unit.
    double in(const Dim& expected) const {
        if (!(d_ == expected))
            throw Error(ErrorKind::UnitMismatch, "expected " + expected.str() + ", got " + d_.str());
        return v_;
    }

    friend Quantity operator*(const Quantity& a, const Quantity& b) { return {a.v_ * b.v_, a.d_ + b.d_}; }
    friend Quantity operator/(const Quantity& a, const Quantity& b) { return {a.v_ / b.v_, a.d_ - b.d_}; }
    friend Quantity operator*(double s, const Quantity& a) { return {s * a.v_, a.d_}; }
    friend Quantity operator*(const Quantity& a, double s) { return {s * a.v_, a.d_}; }
    friend Quantity operator/(const Quantity& a, double s) { return {a.v_ / s, a.d_}; }
    friend Quantity operator/(double s, const Quantity& a) { return {s / a.v_, Dim{} - a.d_}; }
    friend Quantity operator+(const Quantity& a, const Quantity& b) {
        require_same(a, b, "+");
        return {a.v_ + b.v_, a.d_};
    }
    friend Quantity operator-(const Quantity& a, const Quantity& b) {
        require_same(a, b, "-");
        return {a.v_ - b.v_, a.d_};
    }

    static void require_same(const Quantity& a, const Quantity& b, const char* op) {
        if (!(a.d_ == b.d_))
            throw Error(ErrorKind::UnitMismatch, std::string("operands of '") + op + "': " + a.d_.str() + " vs " + b.d_.str());
    }

private:
    double v_ = 0.0;
    Dim d_{};
};

inline Quantity pow(const Quantity& q, int num, int den = 1) {
    return {std::pow(q.value(), static_cast<double>(num) / den), q.dim().scaled(num, den)};
}
inline Quantity sqrt(const Quantity& q) { return pow(q, 1, 2); }
inline Quantity cbrt(const Quantity& q) { return {std::cbrt(q.value()), q.dim().scaled(1, 3)}; }

namespace units {
inline const Dim one{};
inline const Dim kg = dim(1, 0, 0);
inline const Dim m = dim(0, 1, 0);
inline const Dim s = dim(0, 0, 1);
inline const Dim K = dim(0, 0, 0, 1);
inline const Dim per_s = dim(0, 0, -1);
inline const Dim per_s2 = dim(0, 0, -2);
inline const Dim Pa = dim(1, -1, -2);
inline const Dim T = dim(1, 0, -2, 0, -1);          // tesla
inline const Dim T_per_m = dim(1, -1, -2, 0, -1);
inline const Dim V_per_m = dim(1, 1, -3, 0, -1);
inline const Dim V_per_m2 = dim(1, 0, -3, 0, -1);
inline const Dim W = dim(1, 2, -3);
inline const Dim kg_per_m3 = dim(1, -3, 0);
}  // namespace units


}  // namespace gravlocc
