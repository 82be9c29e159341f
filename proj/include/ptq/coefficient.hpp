#pragma once

#include <complex>
#include <string>

#include <gmpxx.h>

namespace ptq {

/// Exact Gaussian rational re + i*im. Both parts are kept in lowest terms with
/// a positive denominator (GMP canonical form).
class Coefficient {
public:
    Coefficient() = default;
    Coefficient(long re) : re_(re) {} // NOLINT(google-explicit-constructor)
    Coefficient(mpq_class re, mpq_class im = 0);

    /// Exact rational num/den; den must be nonzero.
    static Coefficient rational(long num, long den);
    static Coefficient imaginary_unit() { return Coefficient(0, 1); }

    const mpq_class& re() const noexcept { return re_; }
    const mpq_class& im() const noexcept { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_imaginary() const { return sgn(re_) == 0; }

    Coefficient operator-() const { return Coefficient(-re_, -im_); }
    Coefficient& operator+=(const Coefficient& o);
    Coefficient& operator-=(const Coefficient& o);
    Coefficient& operator*=(const Coefficient& o);
    Coefficient& operator*=(const mpq_class& s);
    Coefficient& operator/=(const mpq_class& s);

    /// Multiply by i.
    Coefficient times_i() const { return Coefficient(-im_, re_); }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    /// Plain-text form: "a/b", "a/bi", or "(a/b+c/di)".
    std::string to_string() const;
    /// Inverse of to_string; throws ArgumentError on malformed input.
    static Coefficient parse(const std::string& s);

    friend bool operator==(const Coefficient& a, const Coefficient& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

Coefficient operator+(Coefficient a, const Coefficient& b);
Coefficient operator-(Coefficient a, const Coefficient& b);
Coefficient operator*(Coefficient a, const Coefficient& b);

} // namespace ptq
