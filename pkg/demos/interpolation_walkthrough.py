"""Walk through the three-node interpolation problem with nodes 0, -1/2,
1/2 and targets 0, (1/4)i, mu*j, showing all three outcomes of the solver
as mu varies: an infinite solution family, a unique Blaschke solution on
the singular boundary, and unsolvability.

Run:  python3 demos/interpolation_walkthrough.py
"""

import math

from slicereg import (
    InterpolationProblem,
    Quaternion,
    build_q_table,
    build_solution,
    classify,
    pick_matrix,
    psd_check,
)
from slicereg.quaternion import I, J, ZERO

NODES = [0.0, -0.5, 0.5]
LAM = 0.25
MU_STAR = math.sqrt(13.0 / 112.0)  # singular threshold for lam = 1/4


def show_case(title, mu):
    print(f"\n=== {title} (mu = {mu:.6f}) ===")
    prob = InterpolationProblem(NODES, [ZERO, I * LAM, J * mu])
    table = build_q_table(prob)
    for (k, l), cell in sorted(table.cells.items()):
        if k == 0:
            continue
        v = cell.value
        desc = f"|Q| = {abs(v):.6f}" if v is not None else "(no value)"
        print(f"  Q_{k}^{l}: {cell.kind:10s} {desc}")
    kind = classify(table)
    print(f"  classification: {kind.variant}"
          + (f" (Blaschke degree {kind.kappa0})" if kind.kappa0 else ""))
    ok, min_eig = psd_check(pick_matrix(NODES, list(prob.values)))
    print(f"  Pick matrix PSD: {ok} (min eigenvalue {min_eig:+.3e})")
    if kind.variant == "no_solution":
        return
    h = J if kind.variant == "non_singular" else None
    f = build_solution(table, kind, h=h)
    residuals = [abs(f.eval(Quaternion(r)) - s)
                 for r, s in zip(prob.nodes, prob.values)]
    label = "with parameter h = j" if h is not None else "unique solution"
    print(f"  interpolant residuals ({label}): "
          + ", ".join(f"{r:.2e}" for r in residuals))


def main():
    show_case("inside the solvable region", 0.9 * MU_STAR)
    show_case("singular boundary", MU_STAR)
    show_case("beyond the boundary", 0.45)
    print("\nThe singular threshold sqrt(13/112) makes |Q_2^3| exactly 1:")
    print(f"  mu* = {MU_STAR:.12f}")


if __name__ == "__main__":
    main()
