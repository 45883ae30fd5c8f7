// dynamics.hpp: unitary evolution, classical transmon trajectories, Ehrenfest checks

#pragma once

#include "cqed/coupled.hpp"
#include "cqed/qops.hpp"
#include "cqed/trajectory.hpp"
#include "cqed/transmon.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cqed {

struct EvolveOptions {
    // Extra observables recorded as <O>(t), real part.
    std::vector<std::pair<std::string, OperatorMatrix>> observables;
    // Record |<k|psi>|^2 for every basis state when dim <= this.
    std::size_t population_limit = 64;
    // Substeps per grid interval are doubled until the final observables move by less than this.
    double tolerance = 1e-8;
    std::size_t initial_substeps = 1;
    std::size_t max_refinements = 10;
};

// Series: "norm", "energy", "P[label]" per basis state, then options.observables.
Trajectory evolve(const OperatorMatrix& h, const StateVector& psi0, const std::vector<double>& t_grid,
                  const EvolveOptions& opt = {});

// Adds "P_q<i>" per transmon level and "n_<l>" per mode; per-state populations only
// when the product space is within options.population_limit.
Trajectory evolve(const CoupledHamiltonian& h, const StateVector& psi0,
                  const std::vector<double>& t_grid, EvolveOptions opt = {});

struct ClassicalState {
    double phi = 0.0;
    double n = 0.0;

    bool finite() const;
};

// 4 E_C (n - n_g)^2 - E_J cos(phi)
double classical_energy(const TransmonParams& p, const ClassicalState& s);

struct ClassicalOptions {
    // Largest leapfrog step; 0 picks 1/200 of the shortest natural period.
    double max_step = 0.0;
};

// Kick-drift-kick leapfrog for dphi/dt = 8 E_C (n - n_g), dn/dt = -E_J sin(phi).
// Series: "phi", "n", "energy". Metadata records the step count.
// Throws StepSizeError when |E - E0| exceeds 1% of |E0|.
Trajectory classical_trajectory(const TransmonParams& p, const ClassicalState& s0,
                                const std::vector<double>& t_grid, const ClassicalOptions& opt = {});

// Mean spacing of upward zero crossings of series x (linear interpolation); NaN with fewer than 2.
double crossing_period(const std::vector<double>& t, const std::vector<double>& x, double level = 0.0);

// Least-squares slope of y against its sample index.
double drift_per_sample(const std::vector<double>& y);

// Large-amplitude pendulum period 4 K(sin(phi0 / 2)) / sqrt(8 E_C E_J), starting at rest.
double pendulum_period(const TransmonParams& p, double phi0);

struct EhrenfestResult {
    // max_t |d<n>/dt + E_J <sin phi>| / max_t |E_J <sin phi>|
    double residual = 0.0;
    // The same residual using every other grid point (step 2 dt).
    double residual_coarse = 0.0;
    double scale = 0.0;
    std::vector<std::string> warnings;
};

// Exact propagation of psi0 over a uniform t_grid, centered differences for d<n>/dt.
EhrenfestResult ehrenfest_check(const OperatorMatrix& h, const OperatorMatrix& n_op,
                                const OperatorMatrix& sin_op, double E_J, const StateVector& psi0,
                                const std::vector<double>& t_grid);

// Isolated transmon in the charge basis.
EhrenfestResult ehrenfest_check(const TransmonParams& p, const StateVector& psi0,
                                const std::vector<double>& t_grid);

}  // namespace cqed
