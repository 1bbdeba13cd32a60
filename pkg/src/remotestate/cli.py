"""Command-line frontend: scans, density grids, boundaries, t0 selection, transfer check.

Exit codes: 0 on success, 2 on a configuration error, 3 on an I/O error.
"""
import argparse
from dataclasses import dataclass, field
from pathlib import Path
import sys

import numpy as np

from . import analysis
from .creation_map import (
    DEFAULT_T0, THREE_NODE_PERIOD, ConfigError, ScanConfig, ScanRecords, scan, t0_scores, transfer_map,
)
from .spin_chain import ChainSpec
from .unitary_params import DEFAULT_TRIAD, OneQubit

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3
FOUR_NODE_POINTS = {10: 51, 11: 26, 12: 51}


@dataclass
class RunConfig:
    command: str
    chain: int = 3
    lambdaB: list = field(default_factory=lambda: [1.0])
    t0: float = DEFAULT_T0
    t_points: int = 2400
    t_max: float = THREE_NODE_PERIOD
    points: dict = field(default_factory=dict)
    phi2: float = 0.0
    triad: tuple = DEFAULT_TRIAD
    eps: float = 0.01
    gamma: float = 0.0
    workers: int = 1
    out: str = None
    records: list = None
    heatmap: str = None
    unavailable: str = None
    t: float = None
    samples: int = 20
    seed: int = 0

    def scan_config(self, lambdaB):
        chain = ChainSpec(self.chain, gamma=self.gamma)
        if self.chain == 3:
            return ScanConfig.three_node(lambdaB, self.points.get(1, 400), self.t_points, self.t_max,
                                         phi2=self.phi2, chain=chain, workers=self.workers)
        pts = tuple(self.points.get(k, FOUR_NODE_POINTS.get(k, 26)) for k in self.triad)
        pts += (self.points.get("phi", 26),)
        return ScanConfig.four_node(lambdaB, self.t0, pts, self.triad, chain=chain, workers=self.workers)


def _add_common(p, lambda_many=False):
    p.add_argument("--chain", type=int, choices=(3, 4), default=3)
    if lambda_many:
        p.add_argument("--lambdaB", type=float, nargs="+", default=[1.0, 0.75, 0.25, 0.0])
    else:
        p.add_argument("--lambdaB", type=float, default=1.0)
    p.add_argument("--t0", type=float, default=DEFAULT_T0, help="registration time of the 4-site scan")
    p.add_argument("--t-points", type=int, default=None)
    p.add_argument("--t-max", type=float, default=THREE_NODE_PERIOD)
    for k in range(1, 13):
        p.add_argument(f"--phi{k}-points", type=int, default=None, dest=f"phi{k}_points")
    p.add_argument("--phi-points", type=int, default=None, help="points of the common 4-site parameter")
    p.add_argument("--phi2", type=float, default=0.0, help="fixed phase of the 3-site sender")
    p.add_argument("--triad", type=int, nargs=3, default=list(DEFAULT_TRIAD))
    p.add_argument("--gamma", type=float, default=0.0, help="Larmor frequency")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="remotestate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="write scan records as CSV")
    _add_common(p)

    p = sub.add_parser("density", help="bin records into the density grid")
    _add_common(p)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--records", nargs="+", default=None, help="record CSV instead of an inline scan")
    p.add_argument("--heatmap", default=None, help="write an 8-bit PGM heatmap of S")

    p = sub.add_parser("boundary", help="creatable-region boundaries and the absolutely unavailable cells")
    _add_common(p, lambda_many=True)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--records", nargs="+", default=None, help="one record CSV per --lambdaB value")
    p.add_argument("--unavailable", default=None, help="write absolutely unavailable cell centers")

    p = sub.add_parser("choose-t0", help="scan registration times and pick the largest creatable area")
    _add_common(p)
    p.add_argument("--eps", type=float, default=0.02)

    p = sub.add_parser("transfer", help="check one-qubit state transfer on the 3-site chain")
    _add_common(p)
    p.add_argument("--t", type=float, default=None, help="registration time (default pi*sqrt(2))")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    return parser


def run_config(args):
    points = {k: getattr(args, f"phi{k}_points") for k in range(1, 13) if getattr(args, f"phi{k}_points")}
    if args.phi_points:
        points["phi"] = args.phi_points
    lambdas = args.lambdaB if isinstance(args.lambdaB, list) else [args.lambdaB]
    t_points = args.t_points
    if t_points is None:
        t_points = 52 if args.command == "choose-t0" else 2400
    cfg = RunConfig(
        command=args.command, chain=args.chain, lambdaB=lambdas, t0=args.t0, t_points=t_points,
        t_max=args.t_max, points=points, phi2=args.phi2, triad=tuple(args.triad),
        eps=getattr(args, "eps", 0.01), gamma=args.gamma, workers=args.workers, out=args.out,
        records=getattr(args, "records", None), heatmap=getattr(args, "heatmap", None),
        unavailable=getattr(args, "unavailable", None), t=getattr(args, "t", None),
        samples=getattr(args, "samples", 20), seed=getattr(args, "seed", 0),
    )
    if cfg.t_points < 1:
        raise ConfigError("--t-points must be >= 1")
    if cfg.records and len(cfg.records) != len(cfg.lambdaB):
        raise ConfigError("give one --records file per --lambdaB value")
    for lb in cfg.lambdaB:
        cfg.scan_config(lb)
    analysis._cells(cfg.eps)
    return cfg


def _records_for(cfg, k):
    if cfg.records:
        return ScanRecords.from_csv(cfg.records[k], cfg.triad)
    return scan(cfg.scan_config(cfg.lambdaB[k]))


def write_heatmap(grid, path):
    """Binary PGM, one pixel per cell, beta1 increasing upward, S clipped at its 99th percentile."""
    s = grid.S
    occupied = s[s > 0]
    top = np.percentile(occupied, 99) if occupied.size else 1.0
    img = np.round(255 * np.clip(s / top, 0, 1)).astype(np.uint8).T[::-1]
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img).tobytes())


def write_grid(grid, path):
    lc, bc = np.meshgrid(grid.lambda_centers, grid.beta1_centers, indexing="ij")
    data = np.column_stack([lc.ravel(), bc.ravel(), grid.counts.ravel(), grid.S.ravel()])
    np.savetxt(path, data, fmt=["%.6g", "%.6g", "%d", "%.17g"], delimiter=",",
               header="lambda_center,beta1_center,count,S", comments="")


def cmd_scan(cfg):
    records = scan(cfg.scan_config(cfg.lambdaB[0]))
    out = cfg.out or "records.csv"
    records.to_csv(out)
    print(len(records))


def cmd_density(cfg):
    grid = analysis.density(_records_for(cfg, 0), cfg.eps)
    s_max, lam, b1 = analysis.density_max(grid)
    if cfg.out:
        write_grid(grid, cfg.out)
    if cfg.heatmap:
        write_heatmap(grid, cfg.heatmap)
    print(f"{s_max:.6g} {lam:.6g} {b1:.6g}")
    print(f"# area={analysis.creatable_area(grid):.6g} "
          f"hardly_creatable_fraction(lambda<{analysis.HARDLY_CREATABLE_LAMBDA})="
          f"{analysis.hardly_creatable_fraction(grid):.6g}")


def _boundary_path(out, lambdaB, many):
    if not many:
        return Path(out)
    p = Path(out)
    return p.with_name(f"{p.stem}_lambdaB{lambdaB:g}{p.suffix or '.csv'}")


def cmd_boundary(cfg):
    grids = []
    many = len(cfg.lambdaB) > 1
    for k, lb in enumerate(cfg.lambdaB):
        grid = analysis.density(_records_for(cfg, k), cfg.eps)
        grids.append(grid)
        curve = analysis.boundary(grid)
        res = analysis.boundary_residuals(curve, grid.eps_beta1)
        if cfg.out:
            data = np.column_stack([curve.lam, curve.beta1_upper, curve.beta1_lower, res["analytic_upper"],
                                    res["analytic_lower"], res["residual_upper"], res["residual_lower"]])
            np.savetxt(_boundary_path(cfg.out, lb, many), data, fmt="%.17g", delimiter=",", comments="",
                       header="lambda,beta1_upper,beta1_lower,analytic_upper,analytic_lower,"
                              "residual_upper,residual_lower")
        side = analysis.boundary_side(lb)
        rms = analysis.boundary_rms(curve, side, grid_eps_beta1=grid.eps_beta1) if lb != 0.5 else float("nan")
        print(f"lambdaB={lb:g} samples={len(curve)} side={side} rms={rms:.6g}")
    cells = analysis.absolutely_unavailable(grids)
    if cfg.unavailable:
        centers = np.array(analysis.cell_centers(grids[0], cells)).reshape(-1, 2)
        np.savetxt(cfg.unavailable, centers, fmt="%.6g", delimiter=",",
                   header="lambda_center,beta1_center", comments="")
    print(f"absolutely_unavailable={len(cells)}")


def cmd_choose_t0(cfg):
    if cfg.chain != 4:
        raise ConfigError("choose-t0 needs --chain 4")
    scfg = cfg.scan_config(cfg.lambdaB[0])
    period, times, scores = t0_scores(scfg, cfg.t_points, cfg.eps)
    print(f"T={period:.10g}")
    for t, s in zip(times, scores):
        print(f"t={t:.10g} score={s:.10g}")
    t0 = float(times[int(np.argmax(scores))])
    print(f"t0={t0:.10g} score={scores.max():.10g}")
    if cfg.out:
        scfg.fixed_t = t0
        scan(scfg).to_csv(cfg.out)


def cmd_transfer(cfg):
    if cfg.chain != 3:
        raise ConfigError("transfer needs --chain 3")
    t = THREE_NODE_PERIOD if cfg.t is None else cfg.t
    if t < 0 or cfg.samples < 1:
        raise ConfigError("transfer needs t >= 0 and at least one sample")
    chain = ChainSpec(3, gamma=cfg.gamma)
    rng = np.random.default_rng(cfg.seed)
    phis = rng.uniform(0, 1, size=(cfg.samples, 2))
    states = [transfer_map(chain, OneQubit(p1, p2), t, cfg.lambdaB[0]) for p1, p2 in phis]
    lam = np.array([s.lam for s in states])
    d1 = np.array([abs(s.beta1 - p1) for s, (p1, _) in zip(states, phis)])
    d2 = np.array([abs((s.beta2 - p2 + 0.5) % 1.0 - 0.5) for s, (_, p2) in zip(states, phis)])
    print(f"t={t:.10g} gamma={cfg.gamma:.10g}")
    print(f"min_lambda={lam.min():.15g} max_abs_lambda_minus_1={np.abs(lam - 1).max():.3e}")
    print(f"max_abs_beta1_minus_phi1={d1.max():.3e}")
    print(f"max_abs_beta2_minus_phi2={d2.max():.3e}")


COMMANDS = {"scan": cmd_scan, "density": cmd_density, "boundary": cmd_boundary,
            "choose-t0": cmd_choose_t0, "transfer": cmd_transfer}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = run_config(args)
        COMMANDS[args.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"remotestate: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"remotestate: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
