"""Closed-form convolution identities checked against direct quadrature."""

from aggsteady.verify import general_formula_suite, identity_suite, pv_suite


def main():
    for name, rows in (("identities", identity_suite()), ("principal values", pv_suite()),
                       ("inversion formula", general_formula_suite())):
        worst = max(rows, key=lambda r: r.rel_error)
        print(f"{name:18s} {len(rows):4d} checks  worst {worst.rel_error:.2e} ({worst.identity})")


if __name__ == "__main__":
    main()
