// validation.hpp: invariant checks run by `cmat validate`.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cmat/model.hpp"

namespace cmat {

struct ValidationOptions {
    std::uint64_t seed = 20240917;
    double rel_tol = 1e-9;           // integrator tolerance for the dynamics checks
    std::size_t eigen_samples = 200;
    std::size_t dynamics_samples = 10;
    // Hamiltonian fed to the eigensystem cross-check; tests inject faults here.
    std::function<Matrix5c(const Couplings&)> hamiltonian_builder;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_validation(const ValidationOptions& opts = {});

} // namespace cmat
