"""Stress tensor at small warp: time machine against cylinder plus zero mode."""
import argparse
import math

import numpy as np

from tmqft.correlators import gamma_of_delta
from tmqft.cylinder_qft import CylinderConfig, ZeroModeState
from tmqft.geometry import WarpConfig
from tmqft.rset import cylinder_rset, f_beta, f_beta_asymptote, f_beta_series, rset_cylinder_chart


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--delta-min", type=float, default=1e-3)
    p.add_argument("--delta-max", type=float, default=1e-1)
    p.add_argument("--count", type=int, default=7)
    p.add_argument("--L", type=float, default=1.0)
    args = p.parse_args(argv)

    L = args.L
    deltas = np.geomspace(args.delta_min, args.delta_max, args.count)
    cyl = CylinderConfig(L)
    res = []
    print(f"{'delta':>9} {'T_mm TM':>13} {'T_mm cyl+zm':>13} {'|diff|':>9} {'T_pm':>11} {'d^2/24pi':>11}"
          f" {'F exact':>13} {'F two-term':>13} {'F series':>13}")
    for d in map(float, deltas):
        T = rset_cylinder_chart((0.0, 0.0), WarpConfig.from_delta(d, L))
        C = cylinder_rset(ZeroModeState(gamma_of_delta(d)), cyl)
        res.append(abs(T.T_mm - C.T_mm))
        F = f_beta(WarpConfig.from_delta(d, L).beta)
        print(f"{d:9.3g} {T.T_mm:13.9f} {C.T_mm:13.9f} {res[-1]:9.2e} {T.T_pm:11.4e} {d * d / (24 * math.pi):11.4e}"
              f" {F:13.6g} {f_beta_asymptote(d):13.6g} {f_beta_series(d):13.6g}")
    slope = np.polyfit(np.log(deltas), np.log(res), 1)[0]
    print(f"log-log slope of |T_mm(TM) - T_mm(cyl + zm)|: {slope:.3f}")


if __name__ == "__main__":
    main()
