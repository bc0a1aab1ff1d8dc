#!/usr/bin/env python3
"""End-to-end demonstration of the unfolding-restriction pipeline on the
one-parameter family (x, y^2, y^3 + s*x^(k+1)*y), s = +-1.

For each (k, s) the script:
  1. loads the catalog entry with the germ, its stable unfolding F, and the
     recorded generating sets;
  2. certifies the five unfolding fields over F;
  3. restricts through the parameter-divisibility syzygies and minimizes;
  4. compares the result with the recorded five-field set (the minimal
     generator count is 4: one recorded field is redundant);
  5. verifies the exact relation -Y*v1 + U*v2 + s*X*v4 = 3*v5.

Usage:
    python scripts/unfolding_pipeline.py [--cert-order N]
"""

import argparse
import time

from liftfields import catalog, compare_modules, restrict_from_unfolding, solve_lift
from liftfields.parser import parse_polynomial
from liftfields.poly import vec_scale


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cert-order", type=int, default=12)
    args = ap.parse_args()
    cert = args.cert_order

    for name, s in [
        ("sfold-1-plus", 1),
        ("sfold-1-minus", -1),
        ("sfold-2-plus", 1),
        ("sfold-2-minus", -1),
    ]:
        doc = catalog.load(name)
        spec = doc.to_unfolding_spec()
        lift_F = doc.fields["liftF"].fields
        vees = doc.fields["vees"].fields
        t0 = time.perf_counter()

        for eta in lift_F:
            assert solve_lift(spec.F, eta, cert).exact
        mod = restrict_from_unfolding(
            spec, lift_F=lift_F, cert_order=cert, check_expected=False
        )
        cmp = compare_modules(mod.fields(), vees, doc.p, cert)
        assert cmp.equal, (name, cmp)

        names = doc.target_vars
        Y = parse_polynomial("Y", names)
        U = parse_polynomial("U", names)
        X = parse_polynomial("X", names)
        v = [tuple(g) for g in vees]
        combo = tuple(
            -Y * a + U * b + X.scale(s) * c for a, b, c in zip(v[0], v[1], v[3])
        )
        assert combo == tuple(vec_scale(v[4], 3))

        dt = time.perf_counter() - t0
        print(
            f"{name:14s} minimal generators {mod.count}; module equals the"
            f" recorded five-field set; relation verified ({dt:.1f}s)"
        )


if __name__ == "__main__":
    main()
