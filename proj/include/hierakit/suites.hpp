#pragma once

#include <vector>

#include "hierakit/config.hpp"
#include "hierakit/report.hpp"

// Verification suites behind the CLI commands.  Default parameters and
// tolerances are the shipped ones; config values override them.

namespace hierakit {

// Bracket antisymmetry / Jacobi, embedding homomorphism, Poisson-bracket
// laws (Leibniz, Jacobi, Casimir), the defining duality of the Hamiltonian
// vector fields, non-degeneracy of the trace pairing, and finite-difference
// oracles for every derivative and symplectic gradient.
Report cmd_verify_algebra(const ExperimentConfig& cfg);

// Distance between the N-particle and limiting brackets over cfg.sweep;
// fits the log-log slope (skipped for a single-point sweep).
Report cmd_converge_bracket(const ExperimentConfig& cfg, CsvTable* csv = nullptr);

// Matrix-exact agreement of the Hamiltonian vector fields with the coupled
// reduced-density right-hand sides, plus the worked coefficient identities.
Report cmd_flow_equivalence(const ExperimentConfig& cfg);

// The three embedding identities (density-matrix map, reduced-density
// duality, factorized embedding) and the Hamiltonian pullback identity.
Report cmd_morphism(const ExperimentConfig& cfg);

// Von-Neumann-then-reduce versus integrate-the-hierarchy, with an
// integrator-order fit.
Report cmd_commuting_diagram(const ExperimentConfig& cfg, CsvTable* csv = nullptr);

// Split-step conservation laws and the factorized-trajectory residual decay.
Report cmd_nls_gp(const ExperimentConfig& cfg, CsvTable* csv = nullptr);

}  // namespace hierakit
