// Shared aliases and error types for the lattice two-hop library.
#ifndef LATHOP_COMMON_HPP
#define LATHOP_COMMON_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lathop {

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using ArrayXd = ArrayX<double>;
using ArrayXi64 = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>;

// Per-axis coset digits of a codeword, each in [0, radix).
using Digits = Eigen::Array<std::int32_t, Eigen::Dynamic, 1>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Malformed caller input (dimension mismatch, non-positive SNR, ...).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Invalid or inconsistent configuration (bad chain parameters, unknown
/// interference kind, infeasible auto-planned run, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Enumeration request larger than the configured cap.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Broken internal contract; indicates a bug upstream, not bad user input.
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Filesystem failure while emitting results.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lathop

#endif  // LATHOP_COMMON_HPP
