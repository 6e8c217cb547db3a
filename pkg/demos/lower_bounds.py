"""Two lower bounds on Euclidean distortion.

The representation-averaging bound uses only the standard generators and the
second moment of the word metric; it stays near 2 as n grows while the
measured distortion keeps climbing. Swapping the single step for a random
set of movements turns the base into an expander and gives a bound growing
like sqrt(n).

    python3 demos/lower_bounds.py
"""

import math

from lamplighter import analysis as an
from lamplighter import embedding as em
from lamplighter import lower_bounds as lb
from lamplighter import word_metric as wm


def main():
    print(" n   bound   measured   minimizing label")
    for n in (6, 8, 10, 12):
        gens = wm.GeneratorSet.standard(n)
        bound = lb.lemma32_bound(wm.bfs_table(n), gens)
        listed = lb.listed_rayleigh_min(gens)
        D = an.embedding_distortion(em.EmbeddingParams.default(n)).report.distortion
        print(f"{n:2d}  {bound:6.3f}  {D:8.3f}   {listed.label}")
    for n in (24, 40, 60):
        bound = lb.lemma32_bound(wm.standard_moments(n), wm.GeneratorSet.standard(n))
        print(f"{n:2d}  {bound:6.3f}")

    print("\nrandom movement sets, estimate mode")
    for n in (1024, 2048, 4096):
        count = lb.default_generator_count(n)
        r = lb.prop34_bound(n, lb.sample_generators(n, count, seed=0))
        print(f"  n={n:4d} |S|={count:4d}  lambda2={r.lambda2:.3f}  lambda={r.lambda_:.6f}  "
              f"D >= {r.d_lower:.2f} = {r.d_lower / math.sqrt(n):.3f} sqrt(n)")

    n = 8
    S = lb.sample_generators(n, 3, 0)
    r = lb.prop34_bound(n, S, "exact")
    D = an.embedding_distortion(em.EmbeddingParams.default(n), wm.GeneratorSet(n, S, True)).report.distortion
    print(f"\nexact check at n=8 with steps {S}: bound {r.d_lower:.3f}, measured {D:.3f}")


if __name__ == "__main__":
    main()
