#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fk {

// Coefficient field: the rationals by default, or a prime field F_p with
// p > 3. Characteristic 2 and 3 are rejected at construction.
struct Field {
    long p = 0;  // 0 = rationals

    Field() = default;
    explicit Field(long prime) : p(prime) {
        if (p != 0) validate_prime(p);
    }

    bool rational() const { return p == 0; }
    bool operator==(const Field& o) const { return p == o.p; }
    bool operator!=(const Field& o) const { return p != o.p; }

    static void validate_prime(long p) {
        if (p < 5) throw std::invalid_argument("field characteristic must be 0 or a prime > 3");
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0) throw std::invalid_argument("field modulus is not prime: " + std::to_string(p));
    }
};

// Exact field element. Rational mode stores a canonical mpq (reduced,
// positive denominator). Prime mode stores the residue 0..p-1 in the
// numerator with denominator 1.
class Scalar {
  public:
    Scalar() : p_(0) {}
    Scalar(long v, Field f = Field()) : v_(v), p_(f.p) { reduce(); }
    Scalar(mpq_class v, Field f = Field()) : v_(std::move(v)), p_(f.p) {
        v_.canonicalize();
        reduce();
    }

    Field field() const { return p_ == 0 ? Field() : Field(p_); }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    const mpq_class& raw() const { return v_; }

    Scalar operator-() const { return with(-v_); }

    Scalar& operator+=(const Scalar& o) {
        match(o);
        v_ += o.v_;
        reduce();
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        match(o);
        v_ -= o.v_;
        reduce();
        return *this;
    }
    Scalar& operator*=(const Scalar& o) {
        match(o);
        v_ *= o.v_;
        reduce();
        return *this;
    }
    Scalar& operator/=(const Scalar& o) {
        match(o);
        if (o.is_zero()) throw std::domain_error("division by zero");
        if (p_ == 0) {
            v_ /= o.v_;
        } else {
            v_ *= o.inverse().v_;
            reduce();
        }
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b) { return a.p_ == b.p_ && a.v_ == b.v_; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    Scalar inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero");
        if (p_ == 0) return with(1 / v_);
        // extended Euclid on the residue
        mpz_class r;
        if (mpz_invert(r.get_mpz_t(), v_.get_num().get_mpz_t(), mpz_class(p_).get_mpz_t()) == 0)
            throw std::domain_error("non-invertible residue");
        return with(mpq_class(r));
    }

    // Canonical text form "n/d" with d > 0, gcd-reduced.
    std::string str() const { return v_.get_num().get_str() + "/" + v_.get_den().get_str(); }
    // Human form: omit "/1".
    std::string pretty() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return str();
    }

  private:
    mpq_class v_;
    long p_;

    Scalar with(mpq_class v) const {
        Scalar s;
        s.v_ = std::move(v);
        s.p_ = p_;
        s.v_.canonicalize();
        s.reduce();
        return s;
    }
    void match(const Scalar& o) {
        // Literals created without field context adopt the other operand's field.
        if (p_ == o.p_) return;
        if (p_ == 0 && v_.get_den() == 1) {
            p_ = o.p_;
            reduce();
            return;
        }
        if (o.p_ == 0 && o.v_.get_den() == 1) return;  // o is a plain integer literal
        throw std::logic_error("mixed-field scalar arithmetic");
    }
    void reduce() {
        if (p_ == 0) return;
        if (v_.get_den() != 1) {
            mpz_class inv;
            if (mpz_invert(inv.get_mpz_t(), v_.get_den().get_mpz_t(), mpz_class(p_).get_mpz_t()) == 0)
                throw std::domain_error("denominator not invertible mod p");
            v_ = mpq_class(v_.get_num() * inv);
        }
        mpz_class n = v_.get_num() % p_;
        if (n < 0) n += p_;
        v_ = mpq_class(n);
    }
};

}  // namespace fk
