#!/usr/bin/env python3
"""Solve an LP file with HiGHS and write `name value` lines.

Usage: highs_solve.py MODEL.lp SOLUTION.txt
Exits non-zero unless HiGHS proves optimality.
"""
import sys

import highspy


def main() -> int:
    model, solution = sys.argv[1], sys.argv[2]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    if h.readModel(model) != highspy.HighsStatus.kOk:
        print(f"cannot read {model}", file=sys.stderr)
        return 1
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        print(f"solver status: {h.modelStatusToString(status)}", file=sys.stderr)
        return 2
    values = h.getSolution().col_value
    lp = h.getLp()
    with open(solution, "w") as out:
        out.write(f"# objective {h.getInfo().objective_function_value}\n")
        for name, v in zip(lp.col_names_, values):
            out.write(f"{name} {v!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
