#!/usr/bin/env python3
"""Run the CLI over a few configurations per subcommand and validate each JSON output against schemas/."""
import json
import subprocess
import sys
from pathlib import Path

import jsonschema

RUNS = {
    "bound": [
        ["--spectrum", "poly:2", "--n", "1e6"],
        ["--spectrum", "poly:2", "--n", "1e6", "--theorem", "3", "--d", "2"],
        ["--spectrum", "exp:0.5,1", "--n", "1000", "--theorem", "6", "--d", "2", "--whitened-mode", "crude"],
        ["--spectrum", "poly:2", "--n", "100", "--theorem", "trivial"],
    ],
    "select-dim": [
        ["--spectrum", "poly:2", "--n", "1e6"],
        ["--spectrum", "log:1", "--n", "1e9", "--rule", "ex5"],
    ],
    "rate": [
        ["--example", "3", "--b", "3", "--compare"],
        ["--example", "4", "--b", "3"],
        ["--example", "5", "--tau", "1", "--compare"],
        ["--example", "1", "--alpha", "1", "--beta", "1", "--compare"],
    ],
    "simulate": [
        ["--spectrum", "poly:2", "--n", "10", "--dim", "4", "--reps", "20"],
        ["--spectrum", "exp:1,1", "--n", "5", "--dim", "3", "--reps", "20", "--model", "gaussian", "--functional", "gaussian-max"],
    ],
    "sweep": [
        ["--spectrum", "poly:2", "--dim", "4", "--n-grid", "2,4,8", "--reps", "20", "--functional", "gaussian-max"],
        ["--spectrum", "poly:2", "--dim", "4", "--n-grid", "16", "--reps", "20"],
    ],
    "lower-bound": [
        ["--spectrum", "poly:2", "--n", "100", "--dim", "2000", "--reps", "20"],
    ],
    "check": [
        ["--spectrum", "poly:2", "--n", "2", "--dim", "1", "--mode", "enumerate"],
        ["--spectrum", "poly:2", "--n", "3", "--dim", "2", "--mode", "enumerate", "--inequality", "rosenthal"],
        ["--spectrum", "poly:2", "--n", "8", "--dim", "3", "--reps", "200", "--inequality", "rosenthal"],
    ],
}


def main() -> int:
    cli, schema_dir = sys.argv[1], Path(sys.argv[2])
    failures = 0
    for sub, runs in RUNS.items():
        schema = json.loads((schema_dir / f"{sub}.json").read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        for args in runs:
            proc = subprocess.run([cli, sub, *args], capture_output=True, text=True)
            label = " ".join([sub, *args])
            if proc.returncode != 0:
                print(f"FAIL {label}: exit {proc.returncode}: {proc.stderr.strip()}")
                failures += 1
                continue
            errors = list(jsonschema.Draft202012Validator(schema).iter_errors(json.loads(proc.stdout)))
            for e in errors:
                print(f"FAIL {label}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
            failures += bool(errors)
            if not errors:
                print(f"ok   {label}")
    for sub, args in [("sweep", RUNS["sweep"][0]), ("simulate", RUNS["simulate"][0])]:
        proc = subprocess.run([cli, sub, *args, "--format", "csv"], capture_output=True)
        lines = proc.stdout.decode().split("\r\n")
        ok = proc.returncode == 0 and lines[0].startswith("# config: ") and lines[-1] == ""
        if ok:
            echo = json.loads(lines[0][len("# config: "):])
            ok = echo.get("subcommand") == sub and "out" not in echo.get("config", {})
        print(("ok   " if ok else "FAIL ") + f"{sub} csv layout")
        failures += not ok
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
