#pragma once

namespace vtlscuc::detail {

// HiGHS bridge (via scipy). The gateway writes this script to a temp file
// and drives it with JSON request/response files. Values >= 1e29 stand in
// for +inf on the wire.
inline constexpr const char* kBridgeScript = R"PY(
import json
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp
from scipy.sparse import csr_matrix

INF = 1e29


def _clean(a):
    a = np.asarray(a, dtype=float)
    a = np.where(a >= INF, np.inf, a)
    a = np.where(a <= -INF, -np.inf, a)
    return a


def _status(code, has_x):
    if code == 0:
        return "optimal"
    if code == 1:
        return "feasible" if has_x else "time_limit"
    if code == 2:
        return "infeasible"
    return "error"


def solve_milp_task(mdl, task):
    lb = mdl["lb"].copy()
    ub = mdl["ub"].copy()
    for col, val in task.get("fix", {}).items():
        lb[int(col)] = ub[int(col)] = float(val)
    res = milp(
        mdl["obj"],
        constraints=[LinearConstraint(mdl["A"], mdl["rlo"], mdl["rup"])],
        integrality=mdl["integer"],
        bounds=Bounds(lb, ub),
        options={
            "mip_rel_gap": float(task.get("gap", 1e-6)),
            "time_limit": float(task.get("time_limit", 1e7)),
        },
    )
    out = {"status": _status(res.status, res.x is not None)}
    if res.x is not None:
        out["x"] = list(res.x)
        out["objective"] = float(res.fun)
        out["gap"] = float(res.mip_gap) if res.mip_gap is not None else 0.0
        if task.get("refine_lp"):
            # Fix integers at their rounded values and re-solve the LP for a
            # crisp continuous part plus duals.
            fix = dict(task.get("fix", {}))
            for j in np.nonzero(mdl["integer"])[0]:
                fix[str(int(j))] = float(round(res.x[j]))
            ref = solve_lp_task(mdl, {"fix": fix})
            if ref["status"] == "optimal":
                out["x"] = ref["x"]
                out["objective"] = ref["objective"]
                out["duals"] = ref["duals"]
    return out


def solve_lp_task(mdl, task):
    lb = mdl["lb"].copy()
    ub = mdl["ub"].copy()
    for col, val in task.get("fix", {}).items():
        lb[int(col)] = ub[int(col)] = float(val)
    res = linprog(
        mdl["obj"],
        A_ub=mdl["A_ub"] if mdl["A_ub"] is not None else None,
        b_ub=mdl["b_ub"],
        A_eq=mdl["A_eq"] if mdl["A_eq"] is not None else None,
        b_eq=mdl["b_eq"],
        bounds=np.column_stack([lb, ub]),
        method="highs",
    )
    out = {"status": _status(res.status, res.x is not None)}
    if res.status == 0:
        out["x"] = list(res.x)
        out["objective"] = float(res.fun)
        nrows = len(mdl["rlo"])
        duals = np.zeros(nrows)
        if mdl["A_eq"] is not None:
            duals[mdl["eq_rows"]] = res.eqlin.marginals
        if mdl["A_ub"] is not None:
            m = res.ineqlin.marginals
            for pos, (row, sign) in enumerate(mdl["ub_rows"]):
                duals[row] += sign * m[pos]
        out["duals"] = list(duals)
    return out


def prepare(model):
    mdl = {
        "obj": np.asarray(model["obj"], dtype=float),
        "lb": _clean(model["lb"]),
        "ub": _clean(model["ub"]),
        "integer": np.asarray(model["integer"], dtype=int),
    }
    rows = model["rows"]
    rlo = _clean(rows["lo"])
    rup = _clean(rows["up"])
    ncols = len(mdl["obj"])
    A = csr_matrix(
        (rows["value"], rows["index"], rows["start"]), shape=(len(rlo), ncols)
    )
    mdl["A"], mdl["rlo"], mdl["rup"] = A, rlo, rup

    eq_rows = [i for i in range(len(rlo)) if rlo[i] == rup[i]]
    ub_rows = []  # (original row, sign) per generated <= row
    ub_blocks = []
    b_ub = []
    for i in range(len(rlo)):
        if rlo[i] == rup[i]:
            continue
        if np.isfinite(rup[i]):
            ub_rows.append((i, 1.0))
            ub_blocks.append(A.getrow(i))
            b_ub.append(rup[i])
        if np.isfinite(rlo[i]):
            ub_rows.append((i, -1.0))
            ub_blocks.append(-A.getrow(i))
            b_ub.append(-rlo[i])
    from scipy.sparse import vstack

    mdl["eq_rows"] = eq_rows
    mdl["A_eq"] = A[eq_rows] if eq_rows else None
    mdl["b_eq"] = rlo[eq_rows] if eq_rows else None
    mdl["ub_rows"] = ub_rows
    mdl["A_ub"] = vstack(ub_blocks) if ub_blocks else None
    mdl["b_ub"] = np.asarray(b_ub) if b_ub else None
    return mdl


def main():
    with open(sys.argv[1]) as f:
        req = json.load(f)
    mdl = prepare(req["model"])
    results = []
    for task in req["tasks"]:
        try:
            if task["type"] == "milp":
                results.append(solve_milp_task(mdl, task))
            else:
                results.append(solve_lp_task(mdl, task))
        except Exception as exc:  # propagate as a per-task error
            results.append({"status": "error", "message": str(exc)})
    with open(sys.argv[2], "w") as f:
        json.dump({"results": results}, f)


if __name__ == "__main__":
    main()
)PY";

}  // namespace vtlscuc::detail
