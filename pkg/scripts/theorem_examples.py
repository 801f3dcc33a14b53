"""Run the process/diagram correspondence on the bundled declaration files
in both synchronisation modes."""
import argparse
from pathlib import Path

from diagram_sos.proccalc import parse_declarations, parse_judgement, theorem_check, type_check

DATA = Path(__file__).resolve().parent.parent / "data"
CASES = [
    ("ex5.proc", "hoare", ["1: nu(2) (f [perm 1 2] | g)", "1: f", "2: f | g", "3: g"]),
    ("ex5.proc", "milner", ["1: nu(2) (f [perm 1 2] | g)", "2: g"]),
    ("handshake.proc", "milner", ["0: nu(1) (f | h)", "1: f | h"]),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=3)
    args = ap.parse_args()
    for fname, mode, roots in CASES:
        ds = parse_declarations((DATA / fname).read_text(), mode)
        for root in roots:
            n, p = parse_judgement(root)
            rep = theorem_check(type_check(n, p, ds), ds, mode, args.depth)
            j = rep.to_json()
            status = "pass" if rep.passed else "FAIL"
            print(f"{fname:15} {mode:6} {root:32} {status}  states={j['states_checked']:3} "
                  f"moves={j['process_moves']:3}/{j['diagram_moves']:3}  by={j['equal_by']}")


if __name__ == "__main__":
    main()
