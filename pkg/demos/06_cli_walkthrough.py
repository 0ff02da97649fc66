"""The batch CLI, driven end to end from Python.

Writes a problem config, runs `certify` (JSON report + exit code),
`simulate` (trajectory CSVs + gauge summary), the `epsilon` utility and
the `feasibility` analysis.  Artifacts land in demos/cli_run/.
"""

import json
import os

from invarcert.cli import main

HERE = os.path.dirname(os.path.abspath(__file__))
RUN = os.path.join(HERE, "cli_run")
os.makedirs(RUN, exist_ok=True)

config = {
    "schema": 1,
    "system": {
        "network": {
            "edges": [[0, 1], [1, 2]],
            "floating": [0, 2],
            "inputs": [1],
            "nominal_weights": [-0.25, 0.5],
        }
    },
    "state_set": {"box": {"lower": [-1, -1], "upper": [1, 1]}},
    "input_set": {"box": {"lower": [-1], "upper": [1]}},
    "scenarios": {
        "uniform": {"lower": [-0.35, 0.3], "upper": [-0.15, 0.7]},
        "count": 100,
        "seed": 7,
    },
    "beta": 1e-6,
}
config_path = os.path.join(RUN, "config.json")
with open(config_path, "w") as fh:
    json.dump(config, fh, indent=2)

print("== certify ==")
code = main(["certify", "--config", config_path, "--estimate", "2000",
             "--out", RUN])
print("exit code:", code)

print("\n== simulate (nominal weights, all vertices) ==")
code = main(["simulate", "--config", config_path,
             "--policy", os.path.join(RUN, "report.json"),
             "--nominal", "--init", "vertices", "--horizon", "25",
             "--out", RUN])
print("exit code:", code)

print("\n== epsilon utility ==")
main(["epsilon", "--K", "100", "--beta", "1e-6", "--h", "5"])

print("\n== feasibility analysis of sample 0 ==")
code = main(["feasibility", "--config", config_path, "--sample", "0"])
print("exit code:", code)

print("\nartifacts in", RUN, ":", sorted(os.listdir(RUN)))
