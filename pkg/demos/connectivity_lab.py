"""Exhaustive move graphs on six teams."""
from __future__ import annotations

from irrsched import lab
from irrsched.construct import construct_circle


def main():
    for r in (2, 3):
        print(lab.check_connectivity(6, r, ("iPRS-U",)).summary())
    print(lab.check_connectivity(6, 2, "Base").summary())
    for r in (2, 3, 4):
        print(lab.verify_orientation_connectivity(6, r).summary())

    rep = lab.verify_counterexample_r2(6)
    print(f"closure of the two-round Hamiltonian timetable: {rep.closure_states} timetables, "
          f"{rep.closure_colorings} of {rep.total_colorings} colorings")

    start = construct_circle(8, 5)
    for name in ("iPTS", "iPRS-U", "TS", "PRS"):
        print(f"{name}: {len(lab.escaping_moves(start, name))} moves leave the perfect factorization of K8")


if __name__ == "__main__":
    main()
