#pragma once

namespace sweep::tol {

/// Absolute feasibility tolerance on constraint values g_i.
inline constexpr double feas = 1e-9;

/// KKT residual target for polyhedral projections.
inline constexpr double proj = 1e-10;

/// Complementary-slackness tolerance lambda_i * slack_i.
inline constexpr double comp = 1e-8;

/// Gradient norms below this are treated as zero.
inline constexpr double grad_floor = 1e-12;

}  // namespace sweep::tol
