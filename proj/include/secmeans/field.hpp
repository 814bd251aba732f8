#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace secmeans {

using BigInt = boost::multiprecision::cpp_int;

/// Deterministic Miller-Rabin, exact for any value these simulations use
/// (the witness set covers all n < 3.3e24).
bool is_prime(const BigInt& n);

/// Centered representative of v mod p: the value in (-p/2, p/2].
BigInt centered_mod(const BigInt& v, const BigInt& p);

/// Prime modulus defining the share space. All shares, randoms and
/// aggregates live in the integers mod p.
struct FieldModulus {
    BigInt p;

    explicit FieldModulus(BigInt prime);

    bool operator==(const FieldModulus& other) const { return p == other.p; }
    bool operator!=(const FieldModulus& other) const { return p != other.p; }
};

/// Smallest prime p with p > 2*n*ceil(x_max*scale) + 1. The margin keeps
/// every aggregate of n encoded values inside a unique centered residue,
/// so signed sums decode unambiguously.
FieldModulus choose_modulus(int n, double x_max, long scale);

/// An integer in [0, p). Mixing elements of different moduli throws.
class FieldElement {
public:
    FieldElement() : v_(0), p_(0) {}
    FieldElement(BigInt value, const FieldModulus& m);

    const BigInt& value() const { return v_; }
    const BigInt& modulus() const { return p_; }

    FieldElement operator+(const FieldElement& rhs) const;
    FieldElement operator-(const FieldElement& rhs) const;
    FieldElement operator-() const;
    /// Multiply by an arbitrary integer scalar (reduced mod p).
    FieldElement scaled(const BigInt& m) const;

    bool operator==(const FieldElement& rhs) const {
        return v_ == rhs.v_ && p_ == rhs.p_;
    }
    bool operator!=(const FieldElement& rhs) const { return !(*this == rhs); }

private:
    void check_same_modulus(const FieldElement& rhs) const;

    BigInt v_;  // always in [0, p)
    BigInt p_;
};

/// Reversible fixed-point map between bounded reals and field elements.
/// encode(x) = round(x*scale) mod p with round-half-away-from-zero;
/// decode_sum lifts to the centered representative in (-p/2, p/2] and
/// divides by scale, which is exact for any aggregate of at most n
/// bounded inputs.
struct FixedPointCodec {
    long scale;
    FieldModulus modulus;
    int n;
    double x_max;

    FixedPointCodec(long scale_, FieldModulus mod, int n_, double x_max_);

    FieldElement encode(double x) const;
    double decode_sum(const FieldElement& v) const;
    /// Centered integer lift without the scale division.
    BigInt centered_lift(const FieldElement& v) const;
};

}  // namespace secmeans
