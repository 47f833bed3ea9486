"""Synthetic youth-league instance: construct, improve, and check the result
against the exported integer program."""
from __future__ import annotations

import tempfile
from pathlib import Path

from irrsched.alahc import SearchConfig, run
from irrsched.construct import construct_ystp_initial
from irrsched.io import random_ystp
from irrsched.lp import build_model, check_substitution, export_lp
from irrsched.objective import ystp_evaluate


def main():
    inst = random_ystp(12, 5, seed=7, eligible_density=0.7, v_plus=3, b_plus=3)
    start = construct_ystp_initial(inst)
    print("start", ystp_evaluate(start, inst))
    res = run(inst, "ystp", SearchConfig(suite="iPTS-CR", time_limit=20, seed=0), initial=start)
    print("after search", res.evaluation)

    with tempfile.TemporaryDirectory() as d:
        model = export_lp(inst, Path(d) / "syn12.lp")
        print(f"LP file: {len(model.variables)} variables, {len(model.rows)} rows")
    sub = check_substitution(build_model(inst, "soft"), res.best, inst)
    print(f"substituted into the model: feasible={sub.feasible} objective={sub.objective}")


if __name__ == "__main__":
    main()
