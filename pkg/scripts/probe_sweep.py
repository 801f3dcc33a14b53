"""Congruence probe across seeds and term sizes; reports violations and
timings per configuration."""
import argparse
import time

from diagram_sos.algebra import parse_algebra
from diagram_sos.checks import ProbeConfig, congruence_probe
from diagram_sos.syntax import circ_signature


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--algebra", default="zmod:2")
    ap.add_argument("--seeds", type=int, nargs="*", default=[0, 1, 2, 3, 4])
    ap.add_argument("--sizes", type=int, nargs="*", default=[4, 6])
    ap.add_argument("--samples", type=int, default=200)
    args = ap.parse_args()
    sig = circ_signature(parse_algebra(args.algebra))
    print("seed size pairs checks skipped truncated violations seconds")
    for size in args.sizes:
        for seed in args.seeds:
            t0 = time.perf_counter()
            rep = congruence_probe(sig, ProbeConfig(samples=args.samples, max_size=size, seed=seed))
            dt = time.perf_counter() - t0
            print(f"{seed:4} {size:4} {rep.pairs:5} {rep.checks:6} {rep.skipped:7} {rep.incomplete:9} {len(rep.violations):10} {dt:7.2f}")


if __name__ == "__main__":
    main()
