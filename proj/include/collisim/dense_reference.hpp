#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "collisim/environment.hpp"

// Brute-force dense evolution of collision scenarios, used as the independent
// reference for the tensor-network paths. Works on the full d_S * d^n space
// and never touches the chain/embedding code.

namespace collisim::dense {

// Global state vector ordering (ancilla 1, ..., ancilla n, system): apply the
// collision unitaries sequentially. u acts on (system, ancilla) with
// system-major indexing.
std::vector<cplx> collision_statevector(const ComplexMatrix& u, const std::vector<cplx>& phi,
                                        const std::vector<std::vector<cplx>>& psis);

// Same, for mixed inputs; initial ancilla state defaults to the tensor
// product of `rhos`.
ComplexMatrix collision_density(const ComplexMatrix& u, const ComplexMatrix& rho_s,
                                const std::vector<ComplexMatrix>& rhos);

// Dense matrix of the initial n-ancilla environment encoded by an
// EnvironmentMPDO (the reduced state of its first n sites), contracted
// directly from the definition.
ComplexMatrix environment_density(const EnvironmentMPDO& env, std::size_t n);

// Trajectory of system states from dense evolution of rho_S (x) rho_env
// through `steps` collisions (steps <= n).
std::vector<ComplexMatrix> scenario_trajectory(const CollisionScenario& scenario, std::size_t n);

// Deterministic random inputs for the property tests.
ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng);
ComplexMatrix random_density(std::size_t n, std::mt19937_64& rng);
std::vector<cplx> random_state(std::size_t n, std::mt19937_64& rng);
ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng);

}  // namespace collisim::dense
