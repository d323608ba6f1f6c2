#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cnnbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data (CSV parse failures, conflicting duplicates, bad parameters).
class InputError : public Error {
public:
    using Error::Error;
};

/// Nearest-neighbor queries against an empty prototype set.
class EmptySetError : public Error {
public:
    using Error::Error;
};

/// No analytic bandwidth certificate: some query is exactly equidistant from two
/// distinct dataset points, so the squared-distance gap is zero.
class CertificateUnavailable : public Error {
public:
    CertificateUnavailable(std::size_t query, std::size_t first, std::size_t second);

    std::size_t query;
    std::size_t first;
    std::size_t second;
};

/// Exhaustive neighborliness verification requested on a dataset above the size cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// A single-class dataset has no difference vectors, so the margin bound is vacuous.
class VacuousBound : public Error {
public:
    using Error::Error;
};

/// A bound was requested at a bandwidth with no neighborliness certificate.
class UncertifiedSigma : public Error {
public:
    using Error::Error;
};

/// The margin solver could not certify a positive margin.
class NotSeparable : public Error {
public:
    using Error::Error;
};

/// No bandwidth in a search grid could be certified neighborly.
class NoCertifiedSigma : public Error {
public:
    using Error::Error;
};

}  // namespace cnnbound
