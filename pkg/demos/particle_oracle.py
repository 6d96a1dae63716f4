"""Gradient descent on N particles versus the continuum support radius.

Particles settle into a disc whose radius approaches R as N grows.
Takes roughly a minute for the largest run.
"""

from aggsteady import PowerLawKernel, construct_hd, particle_descent


def main():
    kernel = PowerLawKernel(4.0, 0.5, 2)
    R = construct_hd(2, 0.5, 2).R
    print(f"continuum radius R = {R:.6f}")
    for n in (50, 100, 200, 400):
        conf = particle_descent(kernel, n, seed=0)
        err = abs(conf.radius() - R) / R
        print(f"N = {n:4d}  radius = {conf.radius():.6f}  rel err = {err:.3%}  "
              f"max force = {conf.max_force:.1e}  iters = {conf.iterations}")


if __name__ == "__main__":
    main()
