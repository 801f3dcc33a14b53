"""Table of Frobenius-axiom verdicts for both colours over every built-in
algebra, with a witness for each failure."""
import argparse

from diagram_sos.algebra import ABELIAN_GROUP, parse_algebra
from diagram_sos.checks import check_frobenius_axioms

SPECS = ["zmod:2", "zmod:3", "zmod:5", "bool", "two", "nat:3", "int:1", "int:2"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--algebras", nargs="*", default=SPECS)
    args = ap.parse_args()
    print(f"{'algebra':8} {'group':7} {'black':>6} {'white':>6}  white failures")
    for spec in args.algebras:
        alg = parse_algebra(spec)
        row = {}
        fails = []
        for colour in ("black", "white"):
            checks = check_frobenius_axioms(colour, alg)
            row[colour] = f"{sum(c.passed for c in checks)}/{len(checks)}"
            if colour == "white":
                fails = [f"{c.name} [{c.result.witness_text(alg)}]" for c in checks if not c.passed]
        group = ("partial" if alg.partial else "yes") if alg.has(ABELIAN_GROUP) else "no"
        print(f"{spec:8} {group:7} {row['black']:>6} {row['white']:>6}  {', '.join(fails) or '-'}")


if __name__ == "__main__":
    main()
