"""Invariant metrics on finite abelian groups and their character embeddings.

A metric F on an abelian group expands as sum_chi a_chi |1 - chi(x)|^2. When
all the weights are non-negative the characters give an explicit map into
L_p, and its distortion grows at most logarithmically in the exponent.

    python3 demos/abelian_metrics.py
"""

import math

import numpy as np

from lamplighter import abelian_lp as ab


def main():
    cube = ab.InvariantMetric.hamming(6)
    w = ab.fourier_weights(cube)
    print("hamming cube C_2^6: nonzero weights", np.unique(np.round(w.a[w.a > 1e-12], 12)),
          " L1 distortion", round(ab.gl_check(cube).measured_l1, 9))

    print("\n  m   L1 distortion   / ln m")
    for m in (4, 8, 12, 16, 32, 64, 128):
        r = ab.gl_check(ab.InvariantMetric.cycle(m))
        print(f"{m:4d}   {r.measured_l1:11.4f}   {r.measured_l1 / math.log(m):.3f}")

    print("\np-profile for C_30")
    for p in (1.0, 1.25, 1.5, 2.0):
        r = ab.gl_check(ab.InvariantMetric.cycle(30), p)
        print(f"  p={p:4.2f}  distortion {r.measured_lp:.4f}")

    bad = ab.negative_type_fixture()
    res = ab.negative_type_test(ab.fourier_weights(bad))
    print(f"\nC_8 metric {np.round(bad.F, 2).tolist()}")
    print(f"  valid metric: {not bad.violations()},  negative type: {res.passed}, "
          f"witness character {res.witness} with weight {res.weight:.6f}")


if __name__ == "__main__":
    main()
