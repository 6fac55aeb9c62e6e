#pragma once
#include <complex>
#include <initializer_list>
#include <vector>

#include "minper/linalg.hpp"

// Interleaved-storage builders shared by the test suites.
inline minper::Storage rv(std::initializer_list<double> xs) {
    minper::Storage s(2 * xs.size(), 0.0);
    std::size_t j = 0;
    for (double x : xs) s[2 * (j++)] = x;
    return s;
}

inline minper::Storage cv(std::initializer_list<minper::cplx> xs) {
    minper::Storage s;
    s.reserve(2 * xs.size());
    for (minper::cplx x : xs) {
        s.push_back(x.real());
        s.push_back(x.imag());
    }
    return s;
}

inline minper::Matrix rmat(std::size_t n, std::initializer_list<double> rows) {
    return minper::Matrix::from_real(n, std::vector<double>(rows));
}

inline minper::Matrix cmat(std::size_t n, std::initializer_list<minper::cplx> rows) {
    return minper::Matrix::from_complex(n, std::vector<minper::cplx>(rows));
}
