#include "secmeans/field.hpp"

namespace secmeans {

bool is_prime(const BigInt& n) {
    if (n < 2) return false;
    for (int small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == small) return true;
        if (n % small == 0) return false;
    }
    BigInt d = n - 1;
    unsigned long r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        BigInt x = boost::multiprecision::powm(BigInt(a), d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned long i = 0; i + 1 < r; ++i) {
            x = x * x % n;
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

BigInt centered_mod(const BigInt& v, const BigInt& p) {
    BigInt r = v % p;
    if (r < 0) r += p;
    if (r > (p - 1) / 2) r -= p;
    return r;
}

FieldModulus::FieldModulus(BigInt prime) : p(std::move(prime)) {
    if (!is_prime(p)) {
        throw std::invalid_argument("FieldModulus: " + p.str() + " is not prime");
    }
}

FieldModulus choose_modulus(int n, double x_max, long scale) {
    if (n < 1) throw std::invalid_argument("choose_modulus: n must be >= 1");
    if (!(x_max > 0)) throw std::invalid_argument("choose_modulus: x_max must be > 0");
    if (scale < 1) throw std::invalid_argument("choose_modulus: scale must be >= 1");

    BigInt units(static_cast<long long>(std::ceil(x_max * static_cast<double>(scale))));
    BigInt bound = 2 * BigInt(n) * units + 1;
    BigInt candidate = bound + 1;
    if (candidate <= 2) candidate = 2;
    while (!is_prime(candidate)) ++candidate;
    return FieldModulus(candidate);
}

FieldElement::FieldElement(BigInt value, const FieldModulus& m) : v_(std::move(value)), p_(m.p) {
    v_ %= p_;
    if (v_ < 0) v_ += p_;
}

void FieldElement::check_same_modulus(const FieldElement& rhs) const {
    if (p_ != rhs.p_) {
        throw std::invalid_argument("FieldElement: modulus mismatch (" + p_.str() + " vs " +
                                    rhs.p_.str() + ")");
    }
}

FieldElement FieldElement::operator+(const FieldElement& rhs) const {
    check_same_modulus(rhs);
    FieldElement out = *this;
    out.v_ += rhs.v_;
    if (out.v_ >= p_) out.v_ -= p_;
    return out;
}

FieldElement FieldElement::operator-(const FieldElement& rhs) const {
    check_same_modulus(rhs);
    FieldElement out = *this;
    out.v_ -= rhs.v_;
    if (out.v_ < 0) out.v_ += p_;
    return out;
}

FieldElement FieldElement::operator-() const {
    FieldElement out = *this;
    if (out.v_ != 0) out.v_ = p_ - out.v_;
    return out;
}

FieldElement FieldElement::scaled(const BigInt& m) const {
    FieldElement out = *this;
    out.v_ = v_ * m % p_;
    if (out.v_ < 0) out.v_ += p_;
    return out;
}

FixedPointCodec::FixedPointCodec(long scale_, FieldModulus mod, int n_, double x_max_)
    : scale(scale_), modulus(std::move(mod)), n(n_), x_max(x_max_) {
    if (scale < 1) throw std::invalid_argument("FixedPointCodec: scale must be >= 1");
    if (n < 1) throw std::invalid_argument("FixedPointCodec: n must be >= 1");
    if (!(x_max > 0)) throw std::invalid_argument("FixedPointCodec: x_max must be > 0");
}

FieldElement FixedPointCodec::encode(double x) const {
    if (!(std::abs(x) <= x_max)) {
        throw std::out_of_range("FixedPointCodec::encode: |" + std::to_string(x) +
                                "| exceeds bound " + std::to_string(x_max));
    }
    // std::round is round-half-away-from-zero, matching the codec contract.
    long long units = static_cast<long long>(std::round(x * static_cast<double>(scale)));
    return FieldElement(BigInt(units), modulus);
}

BigInt FixedPointCodec::centered_lift(const FieldElement& v) const {
    if (v.modulus() != modulus.p) {
        throw std::invalid_argument("FixedPointCodec: element from a different modulus");
    }
    BigInt half = (modulus.p - 1) / 2;
    if (v.value() <= half) return v.value();
    return v.value() - modulus.p;
}

double FixedPointCodec::decode_sum(const FieldElement& v) const {
    return static_cast<double>(centered_lift(v)) / static_cast<double>(scale);
}

}  // namespace secmeans
