#!/usr/bin/env python3
"""Print the optimal SANIA weights for the four-unit triangle with a tail at unit 0."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path


def _parse_args() -> argparse.Namespace:
    """Parse command-line arguments."""
    parser = argparse.ArgumentParser(
        description="Print the triangle-with-tail weight table.",
    )
    parser.add_argument(
        "--digits",
        type=int,
        default=2,
        help="Decimal places in the printed table.",
    )
    parser.add_argument(
        "--out",
        type=Path,
        default=None,
        help="Optional weights file to write as well.",
    )
    return parser.parse_args()


def main() -> int:
    """Solve the example and print one row per allocation."""
    args = _parse_args()
    project_root = Path(__file__).resolve().parents[1]
    if str(project_root) not in sys.path:
        sys.path.insert(0, str(project_root))

    from netlue.designs.design import bernoulli_design, bitstring
    from netlue.graphs.generators import GraphFamily, generate
    from netlue.io.formats import write_weights
    from netlue.models.kinds import ModelKind
    from netlue.priors.prior import sania_constant
    from netlue.solver.general import solve_general

    g = generate(GraphFamily.TRIANGLE_TAIL_V1, 4)
    d = bernoulli_design(4, exclude_trivial=True)
    prior = sania_constant(4, jitter=0.0)
    report = solve_general(ModelKind.SANIA, g, d, prior)

    header = "z      " + " ".join(f"{f'w{i}':>8}" for i in range(g.n))
    print(header)
    for row, weights in zip(report.weights.support, report.weights.weights):
        cells = " ".join(f"{w:8.{args.digits}f}" for w in weights)
        print(f"{bitstring(row)}   {cells}")
    print(f"path_used: {report.path_used}")
    print(f"kkt_residual: {report.kkt_residual:.3e}")
    if args.out is not None:
        write_weights(report.weights, args.out, report.to_metadata())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
