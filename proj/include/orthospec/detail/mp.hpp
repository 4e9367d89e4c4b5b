#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include "orthospec/error.hpp"

namespace orthospec::detail {

template <unsigned Digits>
using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<Digits>,
                                              boost::multiprecision::et_off>;

// Calls f(T{}) with T the real type for the requested decimal digits.
template <class F>
decltype(auto) with_precision(int digits, F&& f) {
    switch (digits) {
        case 0:
        case 16:
            return f(double{});
        case 50:
            return f(mp_real<50>{});
        case 100:
            return f(mp_real<100>{});
        case 200:
            return f(mp_real<200>{});
        case 400:
            return f(mp_real<400>{});
        default:
            throw ParameterDomainError("unsupported working precision: " + std::to_string(digits) + " digits");
    }
}

template <class T>
double to_double(const T& x) {
    return static_cast<double>(x);
}

}  // namespace orthospec::detail
