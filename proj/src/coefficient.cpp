#include "ptq/coefficient.hpp"

#include "ptq/errors.hpp"

namespace ptq {

Coefficient::Coefficient(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im))
{
    re_.canonicalize();
    im_.canonicalize();
}

Coefficient Coefficient::rational(long num, long den)
{
    if (den == 0) {
        throw ArgumentError("zero denominator");
    }
    mpq_class q(num, den);
    return Coefficient(q);
}

Coefficient& Coefficient::operator+=(const Coefficient& o)
{
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o)
{
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Coefficient& Coefficient::operator*=(const Coefficient& o)
{
    if (o.is_real()) {
        return *this *= o.re_;
    }
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

Coefficient& Coefficient::operator*=(const mpq_class& s)
{
    re_ *= s;
    im_ *= s;
    return *this;
}

Coefficient& Coefficient::operator/=(const mpq_class& s)
{
    if (sgn(s) == 0) {
        throw DomainError("division of coefficient by zero");
    }
    re_ /= s;
    im_ /= s;
    return *this;
}

Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
Coefficient operator*(Coefficient a, const Coefficient& b) { return a *= b; }

std::string Coefficient::to_string() const
{
    if (is_real()) {
        return re_.get_str();
    }
    if (is_imaginary()) {
        return im_.get_str() + "i";
    }
    std::string im = im_.get_str();
    if (im.front() != '-') {
        im.insert(im.begin(), '+');
    }
    return "(" + re_.get_str() + im + "i)";
}

namespace {

mpq_class parse_rational(const std::string& s)
{
    if (s.empty()) {
        throw ArgumentError("empty rational literal");
    }
    mpq_class q;
    if (q.set_str(s, 10) != 0 || sgn(q.get_den()) == 0) {
        throw ArgumentError("malformed rational literal '" + s + "'");
    }
    q.canonicalize();
    return q;
}

} // namespace

Coefficient Coefficient::parse(const std::string& s)
{
    if (s.empty()) {
        throw ArgumentError("empty coefficient literal");
    }
    if (s.front() == '(') {
        if (s.size() < 4 || s.back() != ')' || s[s.size() - 2] != 'i') {
            throw ArgumentError("malformed complex coefficient '" + s + "'");
        }
        const std::string body = s.substr(1, s.size() - 3);
        // Split at the sign that starts the imaginary part (never position 0).
        const auto split = body.find_first_of("+-", 1);
        if (split == std::string::npos) {
            throw ArgumentError("malformed complex coefficient '" + s + "'");
        }
        std::string im = body.substr(split);
        if (im.front() == '+') {
            im.erase(im.begin());
        }
        return Coefficient(parse_rational(body.substr(0, split)), parse_rational(im));
    }
    if (s.back() == 'i') {
        return Coefficient(0, parse_rational(s.substr(0, s.size() - 1)));
    }
    return Coefficient(parse_rational(s));
}

} // namespace ptq
