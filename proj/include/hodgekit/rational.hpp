#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hodgekit {

using Rat = boost::multiprecision::cpp_rational;

/// Gaussian rational a + b*i. Plain rationals are the im == 0 subfield.
/// Conjugation is the field automorphism fixing the rational subfield.
struct Scalar {
    Rat re;
    Rat im;

    Scalar() : re(0), im(0) {}
    Scalar(long v) : re(v), im(0) {}           // NOLINT(google-explicit-constructor)
    Scalar(Rat r) : re(std::move(r)), im(0) {} // NOLINT(google-explicit-constructor)
    Scalar(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static Scalar i() { return Scalar(Rat(0), Rat(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_rational() const { return im == 0; }

    Scalar conj() const { return Scalar(re, -im); }

    Scalar operator-() const { return Scalar(-re, -im); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        return Scalar(a.re + b.re, a.im + b.im);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        return Scalar(a.re - b.re, a.im - b.im);
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return Scalar(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        Rat n = b.re * b.re + b.im * b.im;
        if (n == 0) throw std::domain_error("division by zero scalar");
        return Scalar((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
};

inline std::string rat_to_string(const Rat& r) {
    if (boost::multiprecision::denominator(r) == 1)
        return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return Rat(boost::multiprecision::cpp_int(s));
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in rational \"" + s + "\"");
    return Rat(num, den);
}

inline std::string scalar_to_string(const Scalar& s) {
    if (s.im == 0) return rat_to_string(s.re);
    return rat_to_string(s.re) + (s.im < 0 ? "-" : "+") +
           rat_to_string(boost::multiprecision::abs(s.im)) + "i";
}

} // namespace hodgekit
