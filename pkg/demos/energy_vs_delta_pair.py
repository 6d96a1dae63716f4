"""Continuous steady state against the best two-point configuration.

With b = 2 and 2 < a < 3 the compactly supported steady state has lower
interaction energy than any pair of equal point masses.  The table lists
both energies and ranks them with the generic energy comparison.
"""

import numpy as np

from aggsteady import PowerLawKernel, construct_b2
from aggsteady.kernel import optimal_delta_pair
from aggsteady.verify import energy_compare


def main():
    print(f"{'a':>5} {'R':>10} {'E state':>14} {'E delta':>14}  lowest")
    for a in np.arange(2.1, 2.95, 0.1):
        kernel = PowerLawKernel(a, 2.0)
        state = construct_b2(a)
        pair, _ = optimal_delta_pair(kernel)
        ranking = energy_compare(kernel, [state, pair])
        e_state, e_pair = state.E, pair.interaction_energy(kernel)
        print(f"{a:5.2f} {state.R:10.6f} {e_state:14.8f} {e_pair:14.8f}  {ranking.lowest[0]}")


if __name__ == "__main__":
    main()
