"""Visualize (as text tables) the closed-form bounds on the hyperbolic
derivative of a regular self-map f with f(0) = 0:

* a Euclidean disk guaranteed to contain f^h(q0), with an explicit
  center and radius depending only on |q0| and |f(q0)|;
* a supremum bound that branches at |q0| = sqrt(2) - 1;
* a bound in terms of the modulus of the slice derivative at 0;
* two-sided bounds for maps with a real slice derivative alpha at 0.

The map f(q) = q^2 attains several of these bounds at real points.

Run:  python3 demos/derivative_bounds.py
"""

import math

from slicereg.hyperbolic import (
    balpha_bounds,
    dieudonne_rhs,
    dieudonne_sup_rhs,
    goluzin_rhs,
    hyperbolic_derivative,
)
from slicereg.quaternion import Quaternion
from slicereg.series import TaylorSeries

Q2 = TaylorSeries.from_quaternions(
    [Quaternion(0.0), Quaternion(0.0), Quaternion(1.0)], exact=True)


def main():
    print("f(q) = q^2 on the real axis: disk bound attained on the boundary")
    print(f"{'r':>5} {'f^h(r)':>12} {'center':>12} {'radius':>12} "
          f"{'|f^h-c|-rad':>12}")
    for r in (0.2, 0.4, 0.6, 0.8):
        q0 = Quaternion(r)
        fh = hyperbolic_derivative(Q2, q0)
        center, radius = dieudonne_rhs(q0, Quaternion(r * r))
        gap = abs(fh - center) - radius
        print(f"{r:5.2f} {abs(fh):12.8f} {abs(center):12.8f} "
              f"{radius:12.8f} {gap:12.2e}")

    thr = math.sqrt(2.0) - 1.0
    print(f"\nsupremum bound branches at |q0| = sqrt(2)-1 = {thr:.6f}")
    print(f"{'|q0|':>6} {'bound (alpha=1)':>16}")
    for r in (0.2, 0.4, thr, 0.5, 0.7):
        print(f"{r:6.3f} {dieudonne_sup_rhs(r, 1.0):16.8f}")

    print("\nslice-derivative bound (f'(0) = 0, e.g. f = q^2): "
          "equality at real points")
    print(f"{'r':>5} {'|f^h(r)|':>12} {'bound':>12}")
    for r in (0.2, 0.5, 0.8):
        fh = hyperbolic_derivative(Q2, Quaternion(r))
        print(f"{r:5.2f} {abs(fh):12.8f} {goluzin_rhs(0.0, r):12.8f}")

    print("\ntwo-sided bounds for alpha = 0.5 "
          "(f = q(0.5 + 0.3q), real slice derivative at 0)")
    f = TaylorSeries.from_quaternions(
        [Quaternion(0.0), Quaternion(0.5), Quaternion(0.3)], exact=True)
    print(f"{'|q0|':>6} {'lo':>10} {'Re f^h':>10} {'|f^h|':>10} {'hi':>10}")
    for r in (0.1, 0.3, 0.5, 0.7):
        q0 = Quaternion(r, 0.0, r / 2, 0.0) * (1 / math.sqrt(1.25))
        lo, hi = balpha_bounds(0.5, abs(q0))
        fh = hyperbolic_derivative(f, q0)
        print(f"{abs(q0):6.3f} {lo:10.6f} {fh.re:10.6f} "
              f"{abs(fh):10.6f} {hi:10.6f}")


if __name__ == "__main__":
    main()
