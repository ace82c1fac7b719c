#pragma once

namespace loewner::tol {

// All relative tolerances are multiplied by max(1, ||M||_F) of the matrix
// they refer to.

inline constexpr double kHermitianRel = 1e-10;
inline constexpr double kJacobiOffRel = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kPsdRel = 1e-9;
inline constexpr double kPdFloorRel = 1e-8;
inline constexpr double kClusterRel = 1e-8;

inline constexpr double kCommuteRel = 1e-9;
inline constexpr double kSimulDiagRel = 1e-8;
inline constexpr int kSimulDiagRetries = 5;

inline constexpr double kViolationAbs = 1e-7;
inline constexpr double kViolationRel = 1e-9;
inline constexpr double kBoundaryNudge = 1e-6;

inline constexpr double kWitnessReplay = 1e-9;
inline constexpr long kMaxDenseDim = 4096;

}  // namespace loewner::tol
