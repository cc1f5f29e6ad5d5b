"""
Conversion efficiency along a pumping trajectory
================================================

With all seven Zeeman states populated, the parallel lambda subsystems
store coherences with different phases and amplitudes, and the readout
interferes imperfectly.  Pumping toward the stretched state removes the
mismatch for one conversion direction and makes it worse for the other.
This script follows both directions of the sigma- / sigma+ conversion
while a sigma+ pump runs, and repeats the exercise for a pi pump, which
keeps the distribution symmetric and treats both directions equally.
"""

import numpy as np

from eitconvert import (
    PopulationDistribution,
    PumpConfig,
    UnitSystem,
    build_cesium_d1_scheme,
    coherence_mismatch,
    evolve_pumping,
    relative_efficiency_multi,
)

units = UnitSystem(gamma_2pi_MHz=4.56)
eta, kappa = 4.0, 1.35
# Depth quoted on the stretched sigma+ line, whose coupling is exactly 1.
alpha = 500.0
start = PopulationDistribution.isotropic()


def xi_along(trajectory, direction):
    values = []
    for k in range(trajectory.ground.shape[0]):
        scheme = build_cesium_d1_scheme(direction,
                                        trajectory.distribution_at(k),
                                        alpha_p=alpha, alpha_c=alpha)
        values.append(relative_efficiency_multi(scheme, eta, kappa))
    return np.asarray(values)


# 1. Circular pump: the two conversion directions split.
pump = PumpConfig(Omega_r_pump=1.2, duration=units.time_in(1.6))
trajectory = evolve_pumping(pump, start, n_samples=81)
up = xi_along(trajectory, "minus_to_plus")
down = xi_along(trajectory, "plus_to_minus")

print("relative conversion efficiency under a sigma+ pump (depth %g)"
      % alpha)
print("%8s  %12s  %12s" % ("t (us)", "sig- -> sig+", "sig+ -> sig-"))
for t_us in (0.0, 0.4, 0.8, 1.2, 1.6):
    k = int(np.argmin(np.abs(trajectory.t - units.time_in(t_us))))
    print("%8.1f  %12.4f  %12.4f" % (t_us, up[k], down[k]))
print("both start at the isotropic value %.4f and split: pumping toward"
      % up[0])
print("the stretched state favors converting into the sigma+ channel")

# 2. Pi pump: the distribution stays m-symmetric, the broadening factors
#    of the two channels stay equal, and the efficiency ratio reduces to
#    the coherence mismatch alone, identical for both directions.
pump_pi = PumpConfig(Omega_pi_pump=1.2, duration=units.time_in(6.0))
trajectory_pi = evolve_pumping(pump_pi, start, n_samples=121)
up_pi = xi_along(trajectory_pi, "minus_to_plus")
down_pi = xi_along(trajectory_pi, "plus_to_minus")

print()
print("pi pump: direction split %.1e (exactly zero up to rounding)"
      % np.max(np.abs(up_pi - down_pi)))
scheme_end = build_cesium_d1_scheme(
    "minus_to_plus", trajectory_pi.distribution_at(-1),
    alpha_p=alpha, alpha_c=alpha)
print("xi after 6 us of pi pumping: %.4f (coherence mismatch %.4f)"
      % (up_pi[-1], coherence_mismatch(scheme_end)))
print("the pi pump gathers population near m = 0 and pushes the")
print("conversion efficiency toward 1 without preferring either channel")
