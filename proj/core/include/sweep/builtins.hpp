#pragma once

#include <string>
#include <vector>

#include "sweep/problem.hpp"

namespace sweep::builtins {

/// Analytic benchmark problems, all on [0, 1] by default:
///   moving-wall-1d      g(t,q) = q - t, f = 0, q0 = 0; solution q(t) = t.
///   static-wall-push-1d g(q) = q, f = -1, q0 = 0; the wall blocks the push,
///                       q(t) = 0.
///   two-disk-headon     two disks pushed together at unit speed; they stop
///                       dead at contact.
///   halfplane-sweep-2d  g(t,q) = q_x - t with a unit upward drift;
///                       q(t) = (t, 0.3 + t).
std::vector<std::string> names();

bool is_builtin(const std::string& name);

/// Throws ConfigError for unknown names. `horizon` <= 0 keeps the default.
SweepingProblem make(const std::string& name, double horizon = 0.0);

/// Closed-form solution where one exists (all builtins have one).
Configuration exact_solution(const std::string& name, double t);

}  // namespace sweep::builtins
