"""End-to-end checks of the sgcurv command-line tool."""

import json
import os
import subprocess
import sys
import tempfile

BIN, DATA = sys.argv[1], sys.argv[2]
failures = []


def run(*args):
    return subprocess.run([BIN, *args], capture_output=True, text=True)


def check(label, ok, detail=""):
    print(("ok   " if ok else "FAIL ") + label + (f"  ({detail})" if detail and not ok else ""))
    if not ok:
        failures.append(label)


def data(name):
    return os.path.join(DATA, name)


r = run("analyze", "--input", data("c3.sg"), "--epsilon", "0.25")
check("analyze c3 exits 0", r.returncode == 0, r.stderr)
env = json.loads(r.stdout)
p = env["payload"]
check("analyze c3 consensus index", abs(p["consensus_index"]["value"] - 0.5) < 1e-3)
check("analyze c3 omega(2,3)", abs(p["analysis"]["omega"][1][2] - 3.998) < 3e-3)
check("envelope fields", env["command"] == "analyze" and env["input_digest"].startswith("sha256:"))
check("analyze is deterministic", run("analyze", "--input", data("c3.sg"), "--epsilon", "0.25").stdout == r.stdout)

r = run("analyze", "--input", data("allpos.sg"), "--epsilon", "7")
check("analyze allpos at 7 exits 0", r.returncode == 0, r.stderr)
check("allpos consensus index is infinity", json.loads(r.stdout)["payload"]["consensus_index"]["value"] == "infinity")

r = run("analyze", "--input", data("c3.sg"), "--epsilon", "0.6")
check("analyze c3 at 0.6 exits 2", r.returncode == 2, str(r.returncode))
check("precondition message", "epsilon exceeds consensus index 0.5" in r.stderr, r.stderr)

with tempfile.NamedTemporaryFile("w", suffix=".sg", delete=False) as f:
    f.write("3\n0 1 1 +1\n0 7 1 +1\n")
    bad = f.name
r = run("analyze", "--input", bad, "--epsilon", "0")
check("parse error exits 1", r.returncode == 1, str(r.returncode))
check("parse error names the line", "line 3" in r.stderr, r.stderr)
os.unlink(bad)


def sweep(name, lo, hi, steps):
    r = run("sweep", "--input", data(name), "--from", str(lo), "--to", str(hi), "--steps", str(steps))
    lines = [l for l in r.stdout.splitlines() if l and not l.startswith("#")]
    head = lines[0].split(",")
    rows = [dict(zip(head, map(float, l.split(",")))) for l in lines[1:]]
    return r, rows


r, rows = sweep("c3.sg", 0.0, 0.49, 50)
check("sweep c3 has 50 rows", len(rows) == 50)
check("sweep c3 W nondecreasing", all(a["W"] <= b["W"] + 1e-9 for a, b in zip(rows, rows[1:])))
check("sweep reports monotone", "# monotone,true" in r.stdout)

_, one = sweep("c3.sg", 0.25, 0.25, 1)
check("single-step sweep matches analyze", abs(one[0]["W"] - p["analysis"]["W"]) < 1e-9)

_, rows = sweep("c4.sg", 0.0, 0.33, 34)
check("sweep c4 lambda2 strictly decreasing", all(a["lambda2"] > b["lambda2"] for a, b in zip(rows, rows[1:])))
check("sweep c4 lambda2 ends near 0", 0.0 < rows[-1]["lambda2"] < 0.02)

r = run("sweep", "--input", data("c3.sg"), "--from", "0", "--to", "0.7", "--steps", "5")
check("sweep beyond the consensus index exits 2", r.returncode == 2)

r = run("bounds", "--input", DATA)
check("bounds on a directory", r.returncode == 0 and isinstance(json.loads(r.stdout)["payload"], list), r.stderr)

r = run("dynamics", "--input", data("c3_table.sg"), "--alpha", "0.1", "--beta", "0.04")
d = json.loads(r.stdout)["payload"]
check("dynamics decays at the spectral rate", d["decays"] and abs(d["fitted_rate"] - d["predicted_rate"]) < 1e-6)

r = run("verify-paper", "--only", "c3")
check("verify-paper --only c3 passes", r.returncode == 0, r.stdout[-400:])
check("verify-paper --only c3 runs only that block", "criterion 2" in r.stdout and "criterion 3" not in r.stdout)

r = run("verify-paper", "--only", "c3", "--perturb-weight", "1.1")
check("perturbed fixture fails", r.returncode == 1 and "FAIL" in r.stdout)

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
