#pragma once

#include <cstddef>

// One table for every numerical threshold, so validators and property tests agree.
namespace qslab::tol {

inline constexpr std::size_t kMaxDim = 16;

inline constexpr double kHerm = 1e-10;          // A - A^dag, trace, orthonormality
inline constexpr double kRecon = 1e-9;          // eigen reconstruction
inline constexpr double kEigClamp = 1e-12;      // negative eigenvalues of A A^dag clamped to 0
inline constexpr double kStateNegEig = 1e-10;   // density-matrix eigenvalues below -this are invalid
inline constexpr double kNonReal = 1e-8;        // imaginary residue allowed on expectations
inline constexpr double kPostselect = 1e-12;    // POSTSELECT_EPS
inline constexpr double kQfi = 1e-12;           // QFI_EPS
inline constexpr double kSupport = 1e-12;       // SUPPORT_EPS
inline constexpr double kTau = 1e-12;           // TAU_EPS
inline constexpr double kSat = 1e-6;            // SAT_TOL
inline constexpr double kChain = 1e-9;          // slack allowed on every bound
inline constexpr double kUnitNorm = 1e-9;       // generator operator norm == 1
inline constexpr double kDrift = 1e-8;          // trace / hermiticity drift in the integrator
inline constexpr double kDegenerate = 1e-12;    // eigenvalue gap treated as degenerate

inline constexpr int kJacobiSweeps = 100;

}  // namespace qslab::tol
