"""Numerically explore the Schwarz-Pick inequality for regular self-maps
of the quaternionic unit ball and its multi-point refinement through
iterated hyperbolic difference quotients.

For any regular self-map f and base point p the inequality
|(M_{f(p)} . f)(q)| <= |M_p(q)| holds, with equality exactly for regular
Moebius transformations.  Dividing out the zero at p gives the hyperbolic
difference quotient f*_p, again a self-map, so the process iterates; a
Blaschke product of degree d collapses to a unimodular constant after d
quotients at its zeros.

Run:  python3 demos/schwarz_pick_exploration.py
"""

import numpy as np

from slicereg import qarray
from slicereg.hyperbolic import hyperbolic_derivative, iterated_quotient
from slicereg.moebius import BlaschkeProduct, Bullet, Moebius
from slicereg.quaternion import Quaternion
from slicereg.series import TaylorSeries


def sp_margin(f, p, points):
    """max over points of |(M_{f(p)} . f)(q)| - |M_p(q)| (should be <= 0)."""
    fp = f.eval(p)
    lhs = qarray.qnorm(Bullet(fp, f).eval_many(points))
    rhs = qarray.qnorm(Moebius(p).eval_many(points))
    return float((lhs - rhs).max())


def main():
    rng = np.random.default_rng(2024)
    points = qarray.uniform_ball(rng, 4000, 0.9)
    p = Quaternion(0.3, 0.1, -0.2, 0.1)

    b = BlaschkeProduct([Quaternion(0.2, 0.3), Quaternion(-0.1, 0.0, 0.4)],
                        u=Quaternion(0, 0, 0, 1))
    print("degree-2 Blaschke product:")
    print(f"  Schwarz-Pick margin: {sp_margin(b.to_expr(), p, points):+.3e}"
          " (strictly negative: not a Moebius map)")

    m = Moebius(Quaternion(0.4, -0.1, 0.2, 0.0))
    print("regular Moebius transformation:")
    print(f"  Schwarz-Pick margin: {sp_margin(m, p, points):+.3e}"
          " (equality up to rounding)")

    print("\niterated quotients of a degree-3 Blaschke product at its zeros:")
    zeros = [Quaternion(0.25), Quaternion(-0.2, 0.1), Quaternion(0.1, 0.0, 0.3)]
    f = BlaschkeProduct(zeros).to_expr()
    for depth in (1, 2, 3):
        hq = iterated_quotient(f, zeros[:depth])
        if hq.is_unimodular_constant:
            print(f"  depth {depth}: unimodular constant "
                  f"{hq.unimodular_value!r}")
        else:
            sup = float(qarray.qnorm(hq.eval_many(points)).max())
            print(f"  depth {depth}: still a genuine self-map, "
                  f"sampled sup |f^({depth})| = {sup:.6f}")

    print("\nhyperbolic derivative of f(q) = q^2 along the real axis:")
    q2 = TaylorSeries.from_quaternions(
        [Quaternion(0.0), Quaternion(0.0), Quaternion(1.0)], exact=True)
    for r in (0.2, 0.5, 0.8):
        fh = hyperbolic_derivative(q2, Quaternion(r))
        print(f"  f^h({r}) = {abs(fh):.10f}   closed form 2r/(1+r^2) = "
              f"{2 * r / (1 + r * r):.10f}")


if __name__ == "__main__":
    main()
