"""How the steady state for a = 4 changes shape as b varies.

For d = 2, 3 the density at the origin changes sign at b = b_bar: below it
the profile is positive throughout, above it the candidate loses
positivity near the centre and is no longer a valid steady state.
"""

import numpy as np

from aggsteady.steadyhd import b_bar, b_upper, construct_hd


def main():
    for d in (2, 3):
        print(f"d = {d}: b_bar = {b_bar(d):.6f}, upper limit {b_upper(2, d):.6f}")
        for b in np.linspace(-d + 0.25, b_upper(2, d) - 0.05, 8):
            s = construct_hd(2, b, d)
            print(f"  b = {b:7.3f}  R = {s.R:.6f}  rho(0) = {s.rho_at_origin:10.6f}  valid = {s.valid}")


if __name__ == "__main__":
    main()
