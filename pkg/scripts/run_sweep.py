#!/usr/bin/env python3
"""Compare binary and quaternary decoding over a noise grid.

Runs the two sum-product decoders on the same codes, channel points, and
seeds, then writes one CSV per decoder.  Defaults reproduce the headline
comparison: the [[25, 8; 1]] and [[49, 12; 1]] codes at p_d in
{0.02, 0.03} with and without burst correlations.
"""

import argparse
import time

from eaqc.channel import ChannelParams
from eaqc.decoder import DecoderConfig
from eaqc.eacode import build_theorem5
from eaqc.harness import SimConfig, sweep, write_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--pd", type=float, nargs="+", default=[0.02, 0.03])
    parser.add_argument("--eta", type=float, nargs="+", default=[0.0, 0.5])
    parser.add_argument("--lmax", type=int, default=100)
    parser.add_argument("--out-prefix", default="sweep")
    args = parser.parse_args()

    codes = [build_theorem5(5, 2, 2), build_theorem5(7, 3, 3)]
    for algorithm, tag in (("binary-spa", "binary"), ("quaternary-spa", "quat")):
        rows = []
        t0 = time.perf_counter()
        for code in codes:
            cfg = SimConfig(
                code=code,
                channel=ChannelParams(args.pd[0], args.eta[0]),
                decoder=DecoderConfig(algorithm, p_d=args.pd[0], l_max=args.lmax),
                trials=args.trials,
                master_seed=args.seed,
                pd_axis=tuple(args.pd),
                eta_axis=tuple(args.eta),
            )
            rows.extend(sweep(cfg))
        target = f"{args.out_prefix}_{tag}.csv"
        write_csv(rows, target)
        print(f"{tag}: {len(rows)} rows -> {target} "
              f"({time.perf_counter() - t0:.1f}s)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
