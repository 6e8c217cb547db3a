"""Distortion of the arc embedding, exactly and by sampling.

For each n the scan compares the closed-form embedded distance with the word
metric over every element (the metric is invariant and the embedding
equivariant, so pairs with the identity suffice). At n = 60 the group has
about 7e19 elements and the scan samples a million of them.

    python3 demos/embedding_distortion.py
"""

import math
import time

from lamplighter import analysis as an
from lamplighter import embedding as em
from lamplighter import group as grp


def main():
    print(" n   distortion  D/sqrt(ln n)  expansion at           contraction at")
    for n in range(6, 16):
        scan = an.embedding_distortion(em.EmbeddingParams.default(n))
        r = scan.report
        w = scan.witnesses()
        print(f"{n:2d}   {r.distortion:9.4f}  {r.distortion / math.sqrt(math.log(n)):11.3f}  "
              f"{w['expansion'][0]:<22} {w['contraction'][0]}")

    print("\ngenerator lengths under the default scaling")
    for n in (12, 24, 36, 48, 60):
        p = em.EmbeddingParams.default(n)
        toggle = em.fast_sq_dist(grp.toggle(n), p)
        step = em.fast_sq_dist(grp.step(n), p)
        print(f"  n={n:2d}  toggle {toggle:.4f}  step {step:.4f}  step/ln n {step / math.log(n):.4f}")

    t = time.perf_counter()
    r = an.embedding_distortion(em.EmbeddingParams.default(60), mode="sampled",
                                count=200_000, seed=1, workers=4).report
    print(f"\nn=60 sampled over 200k elements: distortion >= {r.distortion:.3f} "
          f"({time.perf_counter() - t:.1f}s)")


if __name__ == "__main__":
    main()
