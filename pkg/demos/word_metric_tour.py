"""A walk through the lamplighter group and its word metric.

Builds the BFS table for a few cycle lengths, checks the travel-cost
formula against it, and shows how far the cheap surrogate drifts from the
true distance.

    python3 demos/word_metric_tour.py
"""

import numpy as np

from lamplighter import group as grp
from lamplighter import word_metric as wm


def main():
    n = 6
    g = grp.GroupElement.from_members([0, 2], 1, n)
    h = grp.step(n) * grp.toggle(n)
    print(f"g = {g},  h = {h}")
    print(f"g*h = {g * h},  g^-1 = {grp.inverse(g)}")

    table = wm.bfs_table(n)
    print(f"\nn={n}: {table.order} elements, diameter {table.dist.max()}")
    far = int(np.argmax(table.dist))
    print("a farthest element:", grp.GroupElement.from_index(far, n))

    print("\n n  elements  mismatches  rho/sigma range")
    for n in range(4, 12):
        table = wm.bfs_table(n)
        x, j = grp.all_element_arrays(n)
        rho = table.lookup(x, j)
        travel = wm.travel_metric_batch(x, j, n)
        sigma = wm.surrogate_sigma_batch(x, j, n)
        nz = sigma > 0
        ratio = rho[nz] / sigma[nz]
        print(f"{n:2d}  {rho.size:8d}  {int(np.sum(rho != travel)):10d}  "
              f"[{ratio.min():.3f}, {ratio.max():.3f}]")

    # the exact moments are available well beyond BFS range
    order, total, total_sq = wm.standard_moments(60)
    print(f"\nn=60: mean distance {total / order:.2f}, rms {np.sqrt(total_sq / order):.2f}")


if __name__ == "__main__":
    main()
