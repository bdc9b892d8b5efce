#include "noether/complexbox.hpp"

#include <stdexcept>

namespace noether {

ComplexBox::ComplexBox(std::vector<BigComplex> c, std::vector<BigFloat> r)
    : center(std::move(c)), radius(std::move(r)) {
    if (center.size() != radius.size())
        throw std::invalid_argument("ComplexBox: center/radius dimension mismatch");
    for (const auto& rad : radius)
        if (!(rad > BigFloat(0))) throw std::invalid_argument("ComplexBox: radius must be positive");
}

bool ComplexBox::contains(const std::vector<BigComplex>& p, const BigFloat& slack) const {
    if (p.size() != dim()) return false;
    for (size_t k = 0; k < dim(); ++k) {
        BigComplex d = p[k] - center[k];
        if (abs(d) > radius[k] + slack) return false;
    }
    return true;
}

ComplexBox ComplexBox::inflated(const BigFloat& margin) const {
    ComplexBox out = *this;
    for (auto& r : out.radius) r = r + margin;
    return out;
}

ComplexBox ComplexBox::scaled(const BigFloat& factor) const {
    ComplexBox out = *this;
    for (auto& r : out.radius) r = r * factor;
    return out;
}

namespace {
// fractional part of index*sqrt(prime), computed at working precision;
// distinct primes per coordinate keep the tuples equidistributed
const unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                            41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

BigFloat frac_part(const BigFloat& x) {
    mpfr_t f;
    mpfr_init2(f, mpfr_get_prec(x.raw()));
    mpfr_frac(f, x.raw(), MPFR_RNDN);
    BigFloat out(0, mpfr_get_prec(x.raw()));
    mpfr_swap(out.raw(), f);
    mpfr_clear(f);
    return out;
}
} // namespace

BigFloat rotation_angle(size_t index, size_t coord, long prec) {
    unsigned p = kPrimes[coord % (sizeof(kPrimes) / sizeof(kPrimes[0]))];
    // extra bits so the product index*sqrt(p) keeps full fractional accuracy
    BigFloat root = sqrt(BigFloat((long)p, prec + 64));
    BigFloat t = frac_part(root * BigFloat((long)index, prec + 64));
    return (BigFloat(2, prec) * pi(prec)) * t.with_precision(prec);
}

std::vector<BigComplex> ComplexBox::boundary_sample(size_t index) const {
    long prec = BigFloat::default_precision();
    std::vector<BigComplex> p(dim());
    for (size_t k = 0; k < dim(); ++k) {
        BigFloat th = rotation_angle(index, k, prec);
        p[k] = center[k] + unit_circle(th) * radius[k];
    }
    return p;
}

std::vector<BigComplex> ComplexBox::interior_sample(size_t index) const {
    long prec = BigFloat::default_precision();
    std::vector<BigComplex> p(dim());
    for (size_t k = 0; k < dim(); ++k) {
        BigFloat th = rotation_angle(index, k, prec);
        // radial factor from a second rotation, offset so index 0 is interior
        BigFloat rho = frac_part(sqrt(BigFloat((long)kPrimes[(k + 7) % 24], prec)) *
                                 BigFloat((long)(index + 1), prec));
        p[k] = center[k] + unit_circle(th) * (radius[k] * rho);
    }
    return p;
}

bool ComplexBox::operator==(const ComplexBox& o) const {
    if (dim() != o.dim()) return false;
    for (size_t k = 0; k < dim(); ++k) {
        if (!(center[k].re == o.center[k].re) || !(center[k].im == o.center[k].im)) return false;
        if (!(radius[k] == o.radius[k])) return false;
    }
    return true;
}

} // namespace noether
