#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace kdv {

// Base class for all numerical-domain failures raised by the library.
// CLI maps these to exit code 3, configuration problems to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Degenerate input: zero polynomial, vanishing denominator, <q,q> = 0, ...
struct DegenerateError : Error {
    using Error::Error;
};

// Spectral parameter hit a pole of the Lax matrix (lambda on the spectrum).
struct PoleError : Error {
    using Error::Error;
};

// The two sigma branches of a potential constraint coincide (curve branch point).
struct BranchCollisionError : Error {
    using Error::Error;
};

// Quadrature encountered a non-finite integrand value; carries the node.
struct QuadratureError : Error {
    std::complex<double> node;
    QuadratureError(const std::string& msg, std::complex<double> node_)
        : Error(msg), node(node_) {}
};

// Orbit/grid iteration failed at a specific step or site.
struct StepError : Error {
    int step = -1;  // orbit index, or grid m
    int site = -1;  // grid n, -1 for orbits
    StepError(const std::string& msg, int step_, int site_ = -1)
        : Error(msg), step(step_), site(site_) {}
};

// State norm exceeded the growth guard during iteration.
struct GrowthError : Error {
    using Error::Error;
};

// ODE integration hit a singularity or could not meet the tolerance.
struct IntegrationError : Error {
    using Error::Error;
};

// Sampled generating function is inconsistent with the declared rational form.
struct FitError : Error {
    using Error::Error;
};

// Root continuation across a finite-difference probe lost track of a root.
struct RootTrackingError : Error {
    using Error::Error;
};

// Degenerate spectral curve, bad homology pairing, non-convergent theta sum.
struct CurveError : Error {
    using Error::Error;
};

// Malformed configuration (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace kdv
